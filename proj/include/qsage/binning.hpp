#pragma once

#include <cstdint>
#include <vector>

#include "qsage/matrix.hpp"

namespace qsage {

// Queue-time bins: [0,s), [s,2s), ... with an unbounded last bin.
// Indices are 1-based so "bin two or higher" reads literally.
struct BinSpec {
  double bin_size_minutes = 60.0;
  int n_bins = 4;

  bool operator==(const BinSpec&) const = default;
};

// bin(q) = min(floor(q / size) + 1, n_bins). Negative labels throw.
int assign_bin(double minutes, const BinSpec& spec);
std::vector<int> assign_bins(const std::vector<double>& minutes,
                             const BinSpec& spec);

// Quantile discretization of feature columns for histogram tree growth.
// Thresholds come from training data; bin(v) for feature f is the number of
// thresholds <= v, so out-of-range values clamp to the boundary bins.
class QuantileBinner {
 public:
  QuantileBinner() = default;

  static QuantileBinner fit(const Matrix& x, int max_bins);
  static QuantileBinner from_thresholds(std::vector<std::vector<double>> thresholds);

  std::uint8_t bin_of(std::size_t feature, double value) const;
  // Column-major binned copy of x: result[f][i].
  std::vector<std::vector<std::uint8_t>> transform(const Matrix& x) const;

  std::size_t feature_count() const { return thresholds_.size(); }
  int bin_count(std::size_t feature) const {
    return static_cast<int>(thresholds_[feature].size()) + 1;
  }
  // Raw value such that "bin <= b" is exactly "value < threshold(f, b)".
  double threshold(std::size_t feature, int bin) const {
    return thresholds_[feature][static_cast<std::size_t>(bin)];
  }
  const std::vector<std::vector<double>>& thresholds() const { return thresholds_; }

 private:
  std::vector<std::vector<double>> thresholds_;
};

}  // namespace qsage
