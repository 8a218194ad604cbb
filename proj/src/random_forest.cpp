#include "qsage/random_forest.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

#include "qsage/binning.hpp"
#include "qsage/rng.hpp"

namespace qsage {

namespace {

struct ForestGrowContext {
  const std::vector<std::vector<std::uint8_t>>& binned;
  const QuantileBinner& binner;
  const std::vector<int>& class_index;
  std::size_t n_classes;
  int max_depth;
  std::size_t features_per_split;
  Rng* rng;
};

double gini_impurity(const std::vector<std::uint32_t>& counts, double total) {
  double sum_sq = 0.0;
  for (std::uint32_t c : counts) {
    const double p = static_cast<double>(c) / total;
    sum_sq += p * p;
  }
  return 1.0 - sum_sq;
}

int majority_class(const std::vector<std::uint32_t>& counts) {
  std::size_t best = 0;
  for (std::size_t c = 1; c < counts.size(); ++c)
    if (counts[c] > counts[best]) best = c;  // ties keep the smaller class
  return static_cast<int>(best);
}

// Recursive depth-first growth; the rng is consumed in pre-order, which
// makes the tree a pure function of (data, seed).
int grow_node(Tree& tree, ForestGrowContext& ctx,
              std::vector<std::uint32_t>& samples, std::uint32_t begin,
              std::uint32_t end, int depth) {
  const std::uint32_t count = end - begin;
  std::vector<std::uint32_t> class_counts(ctx.n_classes, 0);
  for (std::uint32_t at = begin; at < end; ++at)
    class_counts[static_cast<std::size_t>(ctx.class_index[samples[at]])] += 1;

  const int node_id = static_cast<int>(tree.nodes.size());
  TreeNode node;
  node.value = majority_class(class_counts);
  tree.nodes.push_back(node);

  const double parent_gini = gini_impurity(class_counts, count);
  if (depth >= ctx.max_depth || count < 2 || parent_gini == 0.0) return node_id;

  // Feature subset for this split.
  const std::size_t d = ctx.binned.size();
  std::vector<std::size_t> features(d);
  for (std::size_t f = 0; f < d; ++f) features[f] = f;
  if (ctx.features_per_split < d) {
    ctx.rng->shuffle(features);
    features.resize(ctx.features_per_split);
    std::sort(features.begin(), features.end());
  }

  double best_score = parent_gini;  // weighted child impurity must improve
  int best_feature = -1, best_bin = -1;
  for (std::size_t f : features) {
    const auto& col = ctx.binned[f];
    const int n_bins = ctx.binner.bin_count(f);
    // class-count histogram per bin
    std::vector<std::vector<std::uint32_t>> hist(
        static_cast<std::size_t>(n_bins),
        std::vector<std::uint32_t>(ctx.n_classes, 0));
    for (std::uint32_t at = begin; at < end; ++at) {
      const std::uint32_t i = samples[at];
      hist[col[i]][static_cast<std::size_t>(ctx.class_index[i])] += 1;
    }
    std::vector<std::uint32_t> left(ctx.n_classes, 0);
    std::uint32_t left_total = 0;
    for (int b = 0; b + 1 < n_bins; ++b) {
      for (std::size_t c = 0; c < ctx.n_classes; ++c) {
        left[c] += hist[static_cast<std::size_t>(b)][c];
        left_total += hist[static_cast<std::size_t>(b)][c];
      }
      const std::uint32_t right_total = count - left_total;
      if (left_total == 0 || right_total == 0) continue;
      std::vector<std::uint32_t> right(ctx.n_classes);
      for (std::size_t c = 0; c < ctx.n_classes; ++c)
        right[c] = class_counts[c] - left[c];
      const double score =
          (left_total * gini_impurity(left, left_total) +
           right_total * gini_impurity(right, right_total)) /
          static_cast<double>(count);
      if (score < best_score - 1e-12) {
        best_score = score;
        best_feature = static_cast<int>(f);
        best_bin = b;
      }
    }
  }
  if (best_feature < 0) return node_id;

  const auto& col = ctx.binned[static_cast<std::size_t>(best_feature)];
  auto mid_it = std::stable_partition(
      samples.begin() + begin, samples.begin() + end,
      [&](std::uint32_t i) { return col[i] <= best_bin; });
  const std::uint32_t mid = static_cast<std::uint32_t>(mid_it - samples.begin());

  tree.nodes[static_cast<std::size_t>(node_id)].feature = best_feature;
  tree.nodes[static_cast<std::size_t>(node_id)].split_bin = best_bin;
  tree.nodes[static_cast<std::size_t>(node_id)].threshold =
      ctx.binner.threshold(static_cast<std::size_t>(best_feature), best_bin);

  const int left_id = grow_node(tree, ctx, samples, begin, mid, depth + 1);
  const int right_id = grow_node(tree, ctx, samples, mid, end, depth + 1);
  tree.nodes[static_cast<std::size_t>(node_id)].left = left_id;
  tree.nodes[static_cast<std::size_t>(node_id)].right = right_id;
  return node_id;
}

}  // namespace

ForestModel::ForestModel(ModelSpec spec, std::vector<Tree> trees,
                         std::vector<int> classes, std::optional<BinSpec> bins,
                         std::size_t feature_count)
    : Model(spec, feature_count), trees_(std::move(trees)) {
  classes_ = std::move(classes);
  bin_spec_ = bins;
}

std::vector<double> ForestModel::proba_row(std::span<const double> row) const {
  std::vector<double> votes(classes_.size(), 0.0);
  for (const Tree& tree : trees_)
    votes[static_cast<std::size_t>(tree.predict(row))] += 1.0;
  for (double& v : votes) v /= static_cast<double>(trees_.size());
  return votes;
}

std::unique_ptr<Model> fit_random_forest(const ModelSpec& spec, const Matrix& x,
                                         const std::vector<int>& bins,
                                         std::optional<BinSpec> bin_spec) {
  if (x.rows() == 0 || x.rows() != bins.size())
    throw std::invalid_argument("fit_random_forest: empty data or size mismatch");

  const std::size_t n = x.rows();
  std::set<int> distinct(bins.begin(), bins.end());
  std::vector<int> classes(distinct.begin(), distinct.end());

  std::vector<int> class_index(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), bins[i]);
    class_index[i] = static_cast<int>(it - classes.begin());
  }

  const QuantileBinner binner = QuantileBinner::fit(x, spec.max_bins);
  const auto binned = binner.transform(x);

  const std::size_t d = x.cols();
  const std::size_t features_per_split = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::floor(spec.feature_subsample *
                                             static_cast<double>(d))));

  std::vector<Tree> trees;
  trees.reserve(static_cast<std::size_t>(spec.n_trees));
  for (int t = 0; t < spec.n_trees; ++t) {
    Rng rng(mix_seed(spec.seed, static_cast<std::uint64_t>(t)));
    std::vector<std::uint32_t> sample(n);
    for (std::size_t i = 0; i < n; ++i)
      sample[i] = static_cast<std::uint32_t>(rng.uniform_int(0, n - 1));

    ForestGrowContext ctx{binned,          binner,
                          class_index,     classes.size(),
                          spec.max_depth,  features_per_split,
                          &rng};
    Tree tree;
    grow_node(tree, ctx, sample, 0, static_cast<std::uint32_t>(n), 0);
    trees.push_back(std::move(tree));
  }

  return std::make_unique<ForestModel>(spec, std::move(trees), std::move(classes),
                                       bin_spec, d);
}

}  // namespace qsage
