#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qsage/model.hpp"

namespace qsage {

// Multinomial logistic regression fitted by full-batch gradient descent on
// L2-regularized cross-entropy.
class LogisticModel final : public Model {
 public:
  // weights is row-major (n_classes x (n_features + 1)), bias last.
  LogisticModel(ModelSpec spec, Matrix weights, std::vector<int> classes,
                std::optional<BinSpec> bins, std::size_t feature_count);

  const Matrix& weights() const { return weights_; }

  // Mean cross-entropy plus (l2/2)*sum(w^2) over non-bias weights.
  // class_index holds positions into the class list, not bin values.
  // Exposed so the analytic gradient can be checked against finite
  // differences of the same objective.
  static double loss(const Matrix& weights, const Matrix& x,
                     const std::vector<int>& class_index, double l2_penalty);
  static Matrix gradient(const Matrix& weights, const Matrix& x,
                         const std::vector<int>& class_index, double l2_penalty);

 protected:
  std::vector<double> proba_row(std::span<const double> row) const override;

 private:
  Matrix weights_;
};

std::unique_ptr<Model> fit_logistic(const ModelSpec& spec, const Matrix& x,
                                    const std::vector<int>& bins,
                                    std::optional<BinSpec> bin_spec);

}  // namespace qsage
