#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qsage/model.hpp"
#include "qsage/tree.hpp"

namespace qsage {

// Histogram-based gradient boosting. Features are discretized into at most
// max_bins quantile bins; each boosting step grows one depth-bounded tree
// (regression) or one tree per class (classification) on the histogram of
// gradient/hessian sums, best-first by split gain. Leaf values carry the
// learning rate already applied.
class HgbRegressor final : public Model {
 public:
  HgbRegressor(ModelSpec spec, double baseline, std::vector<Tree> trees,
               std::vector<std::vector<double>> bin_thresholds,
               std::size_t feature_count);

  double baseline() const { return baseline_; }
  const std::vector<Tree>& trees() const { return trees_; }
  const std::vector<std::vector<double>>& bin_thresholds() const {
    return bin_thresholds_;
  }

  // Prefix of the boosting sequence: the model as it was after `iterations`
  // steps.
  std::unique_ptr<HgbRegressor> truncated(std::size_t iterations) const;

 protected:
  double predict_row(std::span<const double> row) const override;

 private:
  double baseline_ = 0.0;
  std::vector<Tree> trees_;
  std::vector<std::vector<double>> bin_thresholds_;
};

class HgbClassifier final : public Model {
 public:
  // trees_per_class[c][m] is class c's tree from boosting step m.
  HgbClassifier(ModelSpec spec, std::vector<double> log_priors,
                std::vector<std::vector<Tree>> trees_per_class,
                std::vector<int> classes, std::optional<BinSpec> bins,
                std::vector<std::vector<double>> bin_thresholds,
                std::size_t feature_count);

  const std::vector<double>& log_priors() const { return log_priors_; }
  const std::vector<std::vector<Tree>>& trees_per_class() const {
    return trees_per_class_;
  }
  const std::vector<std::vector<double>>& bin_thresholds() const {
    return bin_thresholds_;
  }

  std::unique_ptr<HgbClassifier> truncated(std::size_t iterations) const;

 protected:
  std::vector<double> proba_row(std::span<const double> row) const override;

 private:
  std::vector<double> log_priors_;
  std::vector<std::vector<Tree>> trees_per_class_;
  std::vector<std::vector<double>> bin_thresholds_;
};

std::unique_ptr<Model> fit_hgb_regressor(const ModelSpec& spec, const Matrix& x,
                                         const std::vector<double>& y);
std::unique_ptr<Model> fit_hgb_classifier(const ModelSpec& spec, const Matrix& x,
                                          const std::vector<int>& bins,
                                          std::optional<BinSpec> bin_spec);

}  // namespace qsage
