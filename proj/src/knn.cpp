#include "qsage/knn.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace qsage {

KnnModel::KnnModel(ModelSpec spec, Matrix train_x, std::vector<double> train_y,
                   std::vector<int> train_bins, std::vector<int> classes,
                   std::optional<BinSpec> bins)
    : Model(spec, train_x.cols()),
      train_x_(std::move(train_x)),
      train_y_(std::move(train_y)),
      train_bins_(std::move(train_bins)) {
  classes_ = std::move(classes);
  bin_spec_ = bins;
}

std::vector<std::size_t> KnnModel::neighbors(std::span<const double> row) const {
  const std::size_t n = train_x_.rows();
  std::vector<std::pair<double, std::size_t>> dist(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto t = train_x_.row(i);
    double d2 = 0.0;
    for (std::size_t f = 0; f < row.size(); ++f) {
      const double diff = row[f] - t[f];
      d2 += diff * diff;
    }
    dist[i] = {d2, i};
  }
  const std::size_t k = static_cast<std::size_t>(spec_.k);
  // (distance, row index) ordering implements the tie-break by training-row
  // order.
  std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
  std::vector<std::size_t> idx(k);
  for (std::size_t i = 0; i < k; ++i) idx[i] = dist[i].second;
  return idx;
}

double KnnModel::predict_row(std::span<const double> row) const {
  const auto idx = neighbors(row);
  double sum = 0.0;
  for (std::size_t i : idx) sum += train_y_[i];
  return sum / static_cast<double>(idx.size());
}

std::vector<double> KnnModel::proba_row(std::span<const double> row) const {
  const auto idx = neighbors(row);
  std::vector<double> votes(classes_.size(), 0.0);
  for (std::size_t i : idx) {
    const int bin = train_bins_[i];
    const auto it = std::lower_bound(classes_.begin(), classes_.end(), bin);
    votes[static_cast<std::size_t>(it - classes_.begin())] += 1.0;
  }
  for (double& v : votes) v /= static_cast<double>(idx.size());
  return votes;
}

namespace {

void check_knn_inputs(const ModelSpec& spec, std::size_t n) {
  if (n == 0) throw std::invalid_argument("fit_knn: empty training data");
  if (static_cast<std::size_t>(spec.k) > n)
    throw std::invalid_argument("fit_knn: k exceeds training size");
}

}  // namespace

std::unique_ptr<Model> fit_knn_regressor(const ModelSpec& spec, const Matrix& x,
                                         const std::vector<double>& y) {
  check_knn_inputs(spec, x.rows());
  return std::make_unique<KnnModel>(spec, x, y, std::vector<int>{},
                                    std::vector<int>{}, std::nullopt);
}

std::unique_ptr<Model> fit_knn_classifier(const ModelSpec& spec, const Matrix& x,
                                          const std::vector<int>& bins,
                                          std::optional<BinSpec> bin_spec) {
  check_knn_inputs(spec, x.rows());
  std::set<int> distinct(bins.begin(), bins.end());
  std::vector<int> classes(distinct.begin(), distinct.end());
  return std::make_unique<KnnModel>(spec, x, std::vector<double>{}, bins,
                                    std::move(classes), bin_spec);
}

}  // namespace qsage
