#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qsage/model.hpp"

namespace qsage {

// Brute-force k-nearest-neighbor predictor over Euclidean distance.
// Callers are expected to standardize features first. Distance ties break
// by training-row order; vote ties break to the smallest bin index.
class KnnModel final : public Model {
 public:
  KnnModel(ModelSpec spec, Matrix train_x, std::vector<double> train_y,
           std::vector<int> train_bins, std::vector<int> classes,
           std::optional<BinSpec> bins);

  const Matrix& train_x() const { return train_x_; }
  const std::vector<double>& train_y() const { return train_y_; }
  const std::vector<int>& train_bins() const { return train_bins_; }

 protected:
  double predict_row(std::span<const double> row) const override;
  std::vector<double> proba_row(std::span<const double> row) const override;

 private:
  std::vector<std::size_t> neighbors(std::span<const double> row) const;

  Matrix train_x_;
  std::vector<double> train_y_;   // regression labels
  std::vector<int> train_bins_;   // classification labels
};

std::unique_ptr<Model> fit_knn_regressor(const ModelSpec& spec, const Matrix& x,
                                         const std::vector<double>& y);
std::unique_ptr<Model> fit_knn_classifier(const ModelSpec& spec, const Matrix& x,
                                          const std::vector<int>& bins,
                                          std::optional<BinSpec> bin_spec);

}  // namespace qsage
