#pragma once

#include <memory>
#include <vector>

#include "qsage/model.hpp"

namespace qsage {

class LinearModel final : public Model {
 public:
  LinearModel(ModelSpec spec, std::vector<double> coefficients, double intercept,
              std::size_t feature_count);

  const std::vector<double>& coefficients() const { return coefficients_; }
  double intercept() const { return intercept_; }

 protected:
  double predict_row(std::span<const double> row) const override;

 private:
  std::vector<double> coefficients_;
  double intercept_ = 0.0;
};

// Ordinary least squares via the normal equations. A singular system falls
// back to a 1e-8 ridge term.
std::unique_ptr<Model> fit_linear(const ModelSpec& spec, const Matrix& x,
                                  const std::vector<double>& y);

}  // namespace qsage
