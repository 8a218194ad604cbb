#include "qsage/linear.hpp"

#include <cmath>
#include <stdexcept>

namespace qsage {

namespace {

// Gaussian elimination with partial pivoting on the (d+1)x(d+1) normal
// system. Returns false when a pivot collapses.
bool solve_in_place(std::vector<std::vector<double>>& a, std::vector<double>& b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (std::abs(a[pivot][col]) < 1e-12) return false;
    std::swap(a[col], a[pivot]);
    std::swap(b[col], b[pivot]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] / a[col][col];
      if (factor == 0.0) continue;
      for (std::size_t c = col; c < n; ++c) a[r][c] -= factor * a[col][c];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return true;
}

}  // namespace

LinearModel::LinearModel(ModelSpec spec, std::vector<double> coefficients,
                         double intercept, std::size_t feature_count)
    : Model(spec, feature_count),
      coefficients_(std::move(coefficients)),
      intercept_(intercept) {}

double LinearModel::predict_row(std::span<const double> row) const {
  double v = intercept_;
  for (std::size_t i = 0; i < coefficients_.size(); ++i) v += coefficients_[i] * row[i];
  return v;
}

std::unique_ptr<Model> fit_linear(const ModelSpec& spec, const Matrix& x,
                                  const std::vector<double>& y) {
  if (x.rows() == 0 || x.rows() != y.size())
    throw std::invalid_argument("fit_linear: empty data or size mismatch");

  const std::size_t d = x.cols();
  const std::size_t n = x.rows();
  const std::size_t w = d + 1;  // intercept last

  // Normal system: A = Xa' Xa, rhs = Xa' y with Xa = [X | 1].
  std::vector<std::vector<double>> gram(w, std::vector<double>(w, 0.0));
  std::vector<double> rhs(w, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    const auto row = x.row(r);
    for (std::size_t i = 0; i < d; ++i) {
      for (std::size_t j = i; j < d; ++j) gram[i][j] += row[i] * row[j];
      gram[i][d] += row[i];
      rhs[i] += row[i] * y[r];
    }
    gram[d][d] += 1.0;
    rhs[d] += y[r];
  }
  for (std::size_t i = 0; i < w; ++i)
    for (std::size_t j = 0; j < i; ++j) gram[i][j] = gram[j][i];

  auto a = gram;
  auto b = rhs;
  if (!solve_in_place(a, b)) {
    a = gram;
    b = rhs;
    for (std::size_t i = 0; i < w; ++i) a[i][i] += 1e-8;
    if (!solve_in_place(a, b))
      throw std::runtime_error("fit_linear: normal system is degenerate");
  }

  double intercept = b[d];
  b.resize(d);
  return std::make_unique<LinearModel>(spec, std::move(b), intercept, d);
}

}  // namespace qsage
