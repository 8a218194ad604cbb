#include "qsage/hgb.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <stdexcept>

#include "qsage/errors.hpp"

namespace qsage {

namespace {

struct HistBin {
  double grad = 0.0;
  double hess = 0.0;
  std::uint32_t count = 0;
};

using Histogram = std::vector<std::vector<HistBin>>;  // [feature][bin]

struct GrowParams {
  int max_depth = 9;
  int min_samples_leaf = 20;
  double hessian_guard = 0.0;  // added to denominators; 0 when hess = count
};

double leaf_weight(double grad, double hess, const GrowParams& p) {
  const double denom = hess + p.hessian_guard;
  return denom > 0.0 ? -grad / denom : 0.0;
}

double gain_term(double grad, double hess, const GrowParams& p) {
  const double denom = hess + p.hessian_guard;
  return denom > 0.0 ? grad * grad / denom : 0.0;
}

struct BestSplit {
  double gain = 0.0;
  int feature = -1;
  int split_bin = -1;
  double left_grad = 0.0;
  double left_hess = 0.0;
  std::uint32_t left_count = 0;
};

// Scans every bin boundary of every feature in ascending order; a candidate
// replaces the incumbent only on strictly greater gain.
BestSplit find_best_split(const Histogram& hist, double g_sum, double h_sum,
                          std::uint32_t count, const GrowParams& p) {
  BestSplit best;
  const double parent_term = gain_term(g_sum, h_sum, p);
  for (std::size_t f = 0; f < hist.size(); ++f) {
    double gl = 0.0, hl = 0.0;
    std::uint32_t cl = 0;
    const std::size_t n_bins = hist[f].size();
    for (std::size_t b = 0; b + 1 < n_bins; ++b) {
      gl += hist[f][b].grad;
      hl += hist[f][b].hess;
      cl += hist[f][b].count;
      const std::uint32_t cr = count - cl;
      if (cl < static_cast<std::uint32_t>(p.min_samples_leaf) ||
          cr < static_cast<std::uint32_t>(p.min_samples_leaf))
        continue;
      const double gain = gain_term(gl, hl, p) +
                          gain_term(g_sum - gl, h_sum - hl, p) - parent_term;
      if (gain > best.gain) {
        best = {gain, static_cast<int>(f), static_cast<int>(b), gl, hl, cl};
      }
    }
  }
  return best;
}

struct Candidate {
  double gain;
  int node_id;
  int depth;
  std::uint32_t begin, end;  // range in the sample partition
  double g_sum, h_sum;
  BestSplit split;
  Histogram hist;
};

Histogram build_histogram(const std::vector<std::vector<std::uint8_t>>& binned,
                          const QuantileBinner& binner,
                          const std::vector<double>& grad,
                          const std::vector<double>& hess,
                          std::span<const std::uint32_t> samples) {
  Histogram hist(binned.size());
  for (std::size_t f = 0; f < binned.size(); ++f) {
    hist[f].assign(static_cast<std::size_t>(binner.bin_count(f)), HistBin{});
    const auto& col = binned[f];
    for (std::uint32_t i : samples) {
      HistBin& hb = hist[f][col[i]];
      hb.grad += grad[i];
      hb.hess += hess[i];
      hb.count += 1;
    }
  }
  return hist;
}

Histogram subtract_histogram(const Histogram& parent, const Histogram& child) {
  Histogram out = parent;
  for (std::size_t f = 0; f < out.size(); ++f)
    for (std::size_t b = 0; b < out[f].size(); ++b) {
      out[f][b].grad -= child[f][b].grad;
      out[f][b].hess -= child[f][b].hess;
      out[f][b].count -= child[f][b].count;
    }
  return out;
}

// Grows one tree on precomputed gradients/hessians, best-first by gain.
Tree grow_tree(const std::vector<std::vector<std::uint8_t>>& binned,
               const QuantileBinner& binner, const std::vector<double>& grad,
               const std::vector<double>& hess,
               std::vector<std::uint32_t>& partition, const GrowParams& params) {
  Tree tree;
  double g_root = 0.0, h_root = 0.0;
  for (std::uint32_t i : partition) {
    g_root += grad[i];
    h_root += hess[i];
  }

  TreeNode root;
  root.value = leaf_weight(g_root, h_root, params);
  tree.nodes.push_back(root);

  // Expansion frontier, scanned for the best gain each round. Tree sizes
  // stay small enough that a linear scan beats maintaining a heap of
  // histogram-carrying candidates.
  std::vector<Candidate> frontier;
  const auto consider = [&](int node_id, int depth, std::uint32_t begin,
                            std::uint32_t end, double g_sum, double h_sum,
                            Histogram hist) {
    if (depth >= params.max_depth) return;
    const std::uint32_t count = end - begin;
    if (count < 2 * static_cast<std::uint32_t>(params.min_samples_leaf)) return;
    BestSplit split = find_best_split(hist, g_sum, h_sum, count, params);
    if (split.gain <= 0.0) return;
    frontier.push_back({split.gain, node_id, depth, begin, end, g_sum, h_sum,
                        split, std::move(hist)});
  };

  consider(0, 0, 0, static_cast<std::uint32_t>(partition.size()), g_root, h_root,
           build_histogram(binned, binner, grad, hess, partition));

  while (!frontier.empty()) {
    // Best gain wins; equal gains resolve to the earliest-created node.
    std::size_t best_at = 0;
    for (std::size_t i = 1; i < frontier.size(); ++i) {
      if (frontier[i].gain > frontier[best_at].gain ||
          (frontier[i].gain == frontier[best_at].gain &&
           frontier[i].node_id < frontier[best_at].node_id))
        best_at = i;
    }
    Candidate cand = std::move(frontier[best_at]);
    frontier.erase(frontier.begin() + static_cast<std::ptrdiff_t>(best_at));

    const int f = cand.split.feature;
    const int split_bin = cand.split.split_bin;
    const auto& col = binned[static_cast<std::size_t>(f)];
    auto mid_it = std::stable_partition(
        partition.begin() + cand.begin, partition.begin() + cand.end,
        [&](std::uint32_t i) { return col[i] <= split_bin; });
    const std::uint32_t mid =
        static_cast<std::uint32_t>(mid_it - partition.begin());

    TreeNode& node = tree.nodes[static_cast<std::size_t>(cand.node_id)];
    node.feature = f;
    node.split_bin = split_bin;
    node.threshold = binner.threshold(static_cast<std::size_t>(f), split_bin);

    const double gl = cand.split.left_grad, hl = cand.split.left_hess;
    const double gr = cand.g_sum - gl, hr = cand.h_sum - hl;

    TreeNode left_leaf, right_leaf;
    left_leaf.value = leaf_weight(gl, hl, params);
    right_leaf.value = leaf_weight(gr, hr, params);
    const int left_id = static_cast<int>(tree.nodes.size());
    const int right_id = left_id + 1;
    tree.nodes[static_cast<std::size_t>(cand.node_id)].left = left_id;
    tree.nodes[static_cast<std::size_t>(cand.node_id)].right = right_id;
    tree.nodes.push_back(left_leaf);
    tree.nodes.push_back(right_leaf);

    // Histogram for the smaller child is built directly, the sibling by
    // subtraction from the parent.
    const std::uint32_t left_count = mid - cand.begin;
    const std::uint32_t right_count = cand.end - mid;
    std::span<const std::uint32_t> left_span{partition.data() + cand.begin,
                                             left_count};
    std::span<const std::uint32_t> right_span{partition.data() + mid, right_count};
    if (left_count <= right_count) {
      Histogram left_hist = build_histogram(binned, binner, grad, hess, left_span);
      Histogram right_hist = subtract_histogram(cand.hist, left_hist);
      consider(left_id, cand.depth + 1, cand.begin, mid, gl, hl, std::move(left_hist));
      consider(right_id, cand.depth + 1, mid, cand.end, gr, hr, std::move(right_hist));
    } else {
      Histogram right_hist = build_histogram(binned, binner, grad, hess, right_span);
      Histogram left_hist = subtract_histogram(cand.hist, right_hist);
      consider(left_id, cand.depth + 1, cand.begin, mid, gl, hl, std::move(left_hist));
      consider(right_id, cand.depth + 1, mid, cand.end, gr, hr, std::move(right_hist));
    }
  }
  return tree;
}

void scale_leaves(Tree& tree, double factor) {
  for (TreeNode& node : tree.nodes)
    if (node.is_leaf()) node.value *= factor;
}

void check_labels_finite(const std::vector<double>& y) {
  for (double v : y)
    if (!std::isfinite(v)) throw DataError("fit_hgb: non-finite label");
}

}  // namespace

HgbRegressor::HgbRegressor(ModelSpec spec, double baseline, std::vector<Tree> trees,
                           std::vector<std::vector<double>> bin_thresholds,
                           std::size_t feature_count)
    : Model(spec, feature_count),
      baseline_(baseline),
      trees_(std::move(trees)),
      bin_thresholds_(std::move(bin_thresholds)) {}

double HgbRegressor::predict_row(std::span<const double> row) const {
  double score = baseline_;
  for (const Tree& tree : trees_) score += tree.predict(row);
  return score;
}

std::unique_ptr<HgbRegressor> HgbRegressor::truncated(std::size_t iterations) const {
  std::vector<Tree> prefix(trees_.begin(),
                           trees_.begin() + std::min(iterations, trees_.size()));
  return std::make_unique<HgbRegressor>(spec_, baseline_, std::move(prefix),
                                        bin_thresholds_, feature_count_);
}

HgbClassifier::HgbClassifier(ModelSpec spec, std::vector<double> log_priors,
                             std::vector<std::vector<Tree>> trees_per_class,
                             std::vector<int> classes, std::optional<BinSpec> bins,
                             std::vector<std::vector<double>> bin_thresholds,
                             std::size_t feature_count)
    : Model(spec, feature_count),
      log_priors_(std::move(log_priors)),
      trees_per_class_(std::move(trees_per_class)),
      bin_thresholds_(std::move(bin_thresholds)) {
  classes_ = std::move(classes);
  bin_spec_ = bins;
}

std::vector<double> HgbClassifier::proba_row(std::span<const double> row) const {
  std::vector<double> scores(log_priors_);
  for (std::size_t c = 0; c < trees_per_class_.size(); ++c)
    for (const Tree& tree : trees_per_class_[c]) scores[c] += tree.predict(row);
  double hi = scores[0];
  for (double s : scores) hi = std::max(hi, s);
  double total = 0.0;
  for (double& s : scores) {
    s = std::exp(s - hi);
    total += s;
  }
  for (double& s : scores) s /= total;
  return scores;
}

std::unique_ptr<HgbClassifier> HgbClassifier::truncated(std::size_t iterations) const {
  std::vector<std::vector<Tree>> prefix(trees_per_class_.size());
  for (std::size_t c = 0; c < trees_per_class_.size(); ++c) {
    const std::size_t keep = std::min(iterations, trees_per_class_[c].size());
    prefix[c].assign(trees_per_class_[c].begin(),
                     trees_per_class_[c].begin() + keep);
  }
  return std::make_unique<HgbClassifier>(spec_, log_priors_, std::move(prefix),
                                         classes_, bin_spec_, bin_thresholds_,
                                         feature_count_);
}

std::unique_ptr<Model> fit_hgb_regressor(const ModelSpec& spec, const Matrix& x,
                                         const std::vector<double>& y) {
  if (x.rows() != y.size()) throw std::invalid_argument("fit_hgb: size mismatch");
  if (x.rows() < 2 * static_cast<std::size_t>(spec.min_samples_leaf))
    throw DataError("fit_hgb: needs at least 2*min_samples_leaf rows");
  check_labels_finite(y);

  const QuantileBinner binner = QuantileBinner::fit(x, spec.max_bins);
  const auto binned = binner.transform(x);
  const std::size_t n = x.rows();

  double baseline = 0.0;
  for (double v : y) baseline += v;
  baseline /= static_cast<double>(n);

  GrowParams params{spec.max_depth, spec.min_samples_leaf, 0.0};

  std::vector<double> scores(n, baseline);
  std::vector<double> grad(n), hess(n, 1.0);
  std::vector<std::uint32_t> partition(n);
  std::vector<Tree> trees;
  trees.reserve(static_cast<std::size_t>(spec.max_iterations));

  for (int iter = 0; iter < spec.max_iterations; ++iter) {
    for (std::size_t i = 0; i < n; ++i) grad[i] = scores[i] - y[i];
    for (std::size_t i = 0; i < n; ++i) partition[i] = static_cast<std::uint32_t>(i);
    Tree tree = grow_tree(binned, binner, grad, hess, partition, params);
    scale_leaves(tree, spec.learning_rate);
    for (std::size_t i = 0; i < n; ++i) {
      // Traverse via bins: equivalent to raw-value traversal by construction.
      int at = 0;
      while (!tree.nodes[at].is_leaf()) {
        const TreeNode& nd = tree.nodes[at];
        at = binned[nd.feature][i] <= nd.split_bin ? nd.left : nd.right;
      }
      scores[i] += tree.nodes[at].value;
    }
    trees.push_back(std::move(tree));
  }

  return std::make_unique<HgbRegressor>(spec, baseline, std::move(trees),
                                        binner.thresholds(), x.cols());
}

std::unique_ptr<Model> fit_hgb_classifier(const ModelSpec& spec, const Matrix& x,
                                          const std::vector<int>& bins,
                                          std::optional<BinSpec> bin_spec) {
  if (x.rows() != bins.size()) throw std::invalid_argument("fit_hgb: size mismatch");
  if (x.rows() < 2 * static_cast<std::size_t>(spec.min_samples_leaf))
    throw DataError("fit_hgb: needs at least 2*min_samples_leaf rows");

  const std::size_t n = x.rows();
  std::set<int> distinct(bins.begin(), bins.end());
  std::vector<int> classes(distinct.begin(), distinct.end());
  const std::size_t n_classes = classes.size();

  std::vector<int> class_index(n);
  std::vector<double> counts(n_classes, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto it = std::lower_bound(classes.begin(), classes.end(), bins[i]);
    class_index[i] = static_cast<int>(it - classes.begin());
    counts[static_cast<std::size_t>(class_index[i])] += 1.0;
  }

  std::vector<double> log_priors(n_classes);
  for (std::size_t c = 0; c < n_classes; ++c)
    log_priors[c] = std::log(counts[c] / static_cast<double>(n));

  const QuantileBinner binner = QuantileBinner::fit(x, spec.max_bins);
  const auto binned = binner.transform(x);
  GrowParams params{spec.max_depth, spec.min_samples_leaf, 1e-12};

  std::vector<std::vector<Tree>> trees_per_class(n_classes);
  if (n_classes > 1) {
    // scores[c][i]
    std::vector<std::vector<double>> scores(n_classes,
                                            std::vector<double>(n, 0.0));
    for (std::size_t c = 0; c < n_classes; ++c)
      std::fill(scores[c].begin(), scores[c].end(), log_priors[c]);

    std::vector<std::vector<double>> probs(n_classes, std::vector<double>(n));
    std::vector<double> grad(n), hess(n);
    std::vector<std::uint32_t> partition(n);

    for (int iter = 0; iter < spec.max_iterations; ++iter) {
      for (std::size_t i = 0; i < n; ++i) {
        double hi = scores[0][i];
        for (std::size_t c = 1; c < n_classes; ++c) hi = std::max(hi, scores[c][i]);
        double total = 0.0;
        for (std::size_t c = 0; c < n_classes; ++c) {
          probs[c][i] = std::exp(scores[c][i] - hi);
          total += probs[c][i];
        }
        for (std::size_t c = 0; c < n_classes; ++c) probs[c][i] /= total;
      }
      for (std::size_t c = 0; c < n_classes; ++c) {
        for (std::size_t i = 0; i < n; ++i) {
          const double p = probs[c][i];
          grad[i] = p - (class_index[i] == static_cast<int>(c) ? 1.0 : 0.0);
          hess[i] = p * (1.0 - p);
        }
        for (std::size_t i = 0; i < n; ++i)
          partition[i] = static_cast<std::uint32_t>(i);
        Tree tree = grow_tree(binned, binner, grad, hess, partition, params);
        scale_leaves(tree, spec.learning_rate);
        for (std::size_t i = 0; i < n; ++i) {
          int at = 0;
          while (!tree.nodes[at].is_leaf()) {
            const TreeNode& nd = tree.nodes[at];
            at = binned[nd.feature][i] <= nd.split_bin ? nd.left : nd.right;
          }
          scores[c][i] += tree.nodes[at].value;
        }
        trees_per_class[c].push_back(std::move(tree));
      }
    }
  }

  return std::make_unique<HgbClassifier>(spec, std::move(log_priors),
                                         std::move(trees_per_class),
                                         std::move(classes), bin_spec,
                                         binner.thresholds(), x.cols());
}

}  // namespace qsage
