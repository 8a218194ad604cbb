#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "qsage/model.hpp"
#include "qsage/tree.hpp"

namespace qsage {

// Bootstrap-bagged classification trees over histogram bins with per-split
// feature subsampling. Leaf values hold class positions; prediction is the
// plurality vote, ties to the smallest bin index.
class ForestModel final : public Model {
 public:
  ForestModel(ModelSpec spec, std::vector<Tree> trees, std::vector<int> classes,
              std::optional<BinSpec> bins, std::size_t feature_count);

  const std::vector<Tree>& trees() const { return trees_; }

 protected:
  std::vector<double> proba_row(std::span<const double> row) const override;

 private:
  std::vector<Tree> trees_;
};

std::unique_ptr<Model> fit_random_forest(const ModelSpec& spec, const Matrix& x,
                                         const std::vector<int>& bins,
                                         std::optional<BinSpec> bin_spec);

}  // namespace qsage
