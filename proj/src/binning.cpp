#include "qsage/binning.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qsage {

int assign_bin(double minutes, const BinSpec& spec) {
  if (minutes < 0.0) throw std::invalid_argument("assign_bin: negative label");
  const int raw = static_cast<int>(std::floor(minutes / spec.bin_size_minutes)) + 1;
  return std::min(raw, spec.n_bins);
}

std::vector<int> assign_bins(const std::vector<double>& minutes,
                             const BinSpec& spec) {
  std::vector<int> bins(minutes.size());
  for (std::size_t i = 0; i < minutes.size(); ++i) bins[i] = assign_bin(minutes[i], spec);
  return bins;
}

QuantileBinner QuantileBinner::fit(const Matrix& x, int max_bins) {
  if (max_bins < 2 || max_bins > 255)
    throw std::invalid_argument("QuantileBinner: max_bins must be in [2, 255]");
  QuantileBinner binner;
  binner.thresholds_.resize(x.cols());
  const std::size_t n = x.rows();
  std::vector<double> column(n);
  for (std::size_t f = 0; f < x.cols(); ++f) {
    for (std::size_t i = 0; i < n; ++i) column[i] = x.at(i, f);
    std::sort(column.begin(), column.end());

    std::vector<double> distinct;
    for (double v : column)
      if (distinct.empty() || v != distinct.back()) distinct.push_back(v);

    auto& thr = binner.thresholds_[f];
    if (distinct.size() <= static_cast<std::size_t>(max_bins)) {
      // One bin per distinct value, split at midpoints.
      for (std::size_t i = 0; i + 1 < distinct.size(); ++i)
        thr.push_back(0.5 * (distinct[i] + distinct[i + 1]));
    } else {
      for (int k = 1; k < max_bins; ++k) {
        const std::size_t idx = k * n / static_cast<std::size_t>(max_bins);
        const double cut = 0.5 * (column[idx - 1] + column[idx]);
        if (thr.empty() || cut > thr.back()) thr.push_back(cut);
      }
    }
  }
  return binner;
}

QuantileBinner QuantileBinner::from_thresholds(
    std::vector<std::vector<double>> thresholds) {
  QuantileBinner binner;
  binner.thresholds_ = std::move(thresholds);
  return binner;
}

std::uint8_t QuantileBinner::bin_of(std::size_t feature, double value) const {
  const auto& thr = thresholds_[feature];
  const auto it = std::upper_bound(thr.begin(), thr.end(), value);
  return static_cast<std::uint8_t>(it - thr.begin());
}

std::vector<std::vector<std::uint8_t>> QuantileBinner::transform(
    const Matrix& x) const {
  if (x.cols() != thresholds_.size())
    throw std::invalid_argument("QuantileBinner: feature count mismatch");
  std::vector<std::vector<std::uint8_t>> binned(x.cols());
  for (std::size_t f = 0; f < x.cols(); ++f) {
    binned[f].resize(x.rows());
    for (std::size_t i = 0; i < x.rows(); ++i) binned[f][i] = bin_of(f, x.at(i, f));
  }
  return binned;
}

}  // namespace qsage
