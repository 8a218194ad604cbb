#include "qsage/logistic.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "qsage/errors.hpp"

namespace qsage {

namespace {

// Stable softmax of scores, in place.
void softmax(std::vector<double>& scores) {
  double hi = scores[0];
  for (double s : scores) hi = std::max(hi, s);
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - hi);
    total += s;
  }
  for (double& s : scores) s /= total;
}

std::vector<double> scores_for(const Matrix& weights, std::span<const double> row) {
  const std::size_t k = weights.rows();
  const std::size_t d = weights.cols() - 1;
  std::vector<double> scores(k);
  for (std::size_t c = 0; c < k; ++c) {
    double s = weights.at(c, d);  // bias
    for (std::size_t f = 0; f < d; ++f) s += weights.at(c, f) * row[f];
    scores[c] = s;
  }
  return scores;
}

}  // namespace

LogisticModel::LogisticModel(ModelSpec spec, Matrix weights,
                             std::vector<int> classes,
                             std::optional<BinSpec> bins,
                             std::size_t feature_count)
    : Model(spec, feature_count), weights_(std::move(weights)) {
  classes_ = std::move(classes);
  bin_spec_ = bins;
}

std::vector<double> LogisticModel::proba_row(std::span<const double> row) const {
  std::vector<double> p = scores_for(weights_, row);
  softmax(p);
  return p;
}

double LogisticModel::loss(const Matrix& weights, const Matrix& x,
                           const std::vector<int>& class_index,
                           double l2_penalty) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p = scores_for(weights, x.row(i));
    softmax(p);
    total += -std::log(std::max(p[static_cast<std::size_t>(class_index[i])], 1e-300));
  }
  total /= static_cast<double>(n);
  double penalty = 0.0;
  for (std::size_t c = 0; c < weights.rows(); ++c)
    for (std::size_t f = 0; f < d; ++f)  // bias column excluded
      penalty += weights.at(c, f) * weights.at(c, f);
  return total + 0.5 * l2_penalty * penalty;
}

Matrix LogisticModel::gradient(const Matrix& weights, const Matrix& x,
                               const std::vector<int>& class_index,
                               double l2_penalty) {
  const std::size_t n = x.rows();
  const std::size_t d = x.cols();
  const std::size_t k = weights.rows();
  Matrix grad(k, d + 1);
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> p = scores_for(weights, x.row(i));
    softmax(p);
    const auto row = x.row(i);
    for (std::size_t c = 0; c < k; ++c) {
      const double delta = p[c] - (class_index[i] == static_cast<int>(c) ? 1.0 : 0.0);
      for (std::size_t f = 0; f < d; ++f) grad.at(c, f) += delta * row[f];
      grad.at(c, d) += delta;
    }
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < k; ++c) {
    for (std::size_t f = 0; f < d; ++f)
      grad.at(c, f) = grad.at(c, f) * inv_n + l2_penalty * weights.at(c, f);
    grad.at(c, d) *= inv_n;
  }
  return grad;
}

std::unique_ptr<Model> fit_logistic(const ModelSpec& spec, const Matrix& x,
                                    const std::vector<int>& bins,
                                    std::optional<BinSpec> bin_spec) {
  if (x.rows() == 0 || x.rows() != bins.size())
    throw std::invalid_argument("fit_logistic: empty data or size mismatch");
  std::set<int> distinct(bins.begin(), bins.end());
  if (distinct.size() < 2)
    throw DataError("fit_logistic: training data has a single class");

  std::vector<int> classes(distinct.begin(), distinct.end());
  std::vector<int> class_index(bins.size());
  for (std::size_t i = 0; i < bins.size(); ++i) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), bins[i]);
    class_index[i] = static_cast<int>(it - classes.begin());
  }

  Matrix weights(classes.size(), x.cols() + 1);  // zero init
  for (int epoch = 0; epoch < spec.max_epochs; ++epoch) {
    const Matrix grad = LogisticModel::gradient(weights, x, class_index, spec.l2_penalty);
    for (std::size_t i = 0; i < weights.values().size(); ++i)
      weights.values()[i] -= spec.step_size * grad.values()[i];
  }

  return std::make_unique<LogisticModel>(spec, std::move(weights),
                                         std::move(classes), bin_spec, x.cols());
}

}  // namespace qsage
