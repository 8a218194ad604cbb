#pragma once

#include <span>
#include <vector>

namespace qsage {

// Binary decision tree over raw feature values. Internal nodes route
// left when value < threshold; thresholds come from histogram bin edges,
// so raw-value traversal reproduces the binned training-time split exactly.
struct TreeNode {
  int feature = -1;  // -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double value = 0.0;  // leaf payload
  int split_bin = -1;  // training-time bin boundary; unused at inference

  bool is_leaf() const { return feature < 0; }
};

struct Tree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  double predict(std::span<const double> row) const {
    int at = 0;
    while (!nodes[at].is_leaf())
      at = row[nodes[at].feature] < nodes[at].threshold ? nodes[at].left
                                                        : nodes[at].right;
    return nodes[at].value;
  }
};

}  // namespace qsage
