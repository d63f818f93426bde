#pragma once

#include <optional>
#include <string>
#include <vector>

#include "softsense/common.hpp"
#include "softsense/rng.hpp"

namespace softsense {

/// Stopping and pruning parameters. Defaults follow the usual recursive
/// partitioning settings: min_split 20, min_leaf 7, cp 0.01, max_depth 30.
struct GrowParams {
  int min_split = 20;
  int min_leaf = 7;
  double complexity = 0.01;  // cp used by prune_tree
  int max_depth = 30;
  std::optional<int> feature_subsample;  // forest mode: candidates per node

  void validate() const;
};

/// Axis-aligned split; rows with x <= threshold go left. The threshold is
/// always a midpoint between two consecutive distinct training values.
struct SplitSpec {
  FeatureId feature;
  double threshold;
  double delta_sse;  // SSE(parent) - SSE(left) - SSE(right)
};

struct TreeNode {
  int feature = -1;  // canonical column index; -1 marks a leaf
  double threshold = 0.0;
  int left = -1;
  int right = -1;
  double prediction = 0.0;  // mean target of the rows routed here
  double fraction = 0.0;    // share of training rows in this node
  int n_rows = 0;
  double sse = 0.0;        // training SSE at this node
  double delta_sse = 0.0;  // improvement of the split (internal nodes)

  bool is_leaf() const { return feature < 0; }
};

/// Binary regression tree, nodes in pre-order (root at index 0).
struct Tree {
  std::vector<TreeNode> nodes;
  GrowParams params;

  const TreeNode& root() const { return nodes.front(); }
  int leaf_count() const;
  int internal_count() const;
};

/// Best SSE-reducing split over the candidate features, subject to both
/// children holding at least min_leaf rows. Ties break toward the smaller
/// FeatureId, then the smaller threshold. Empty when no split has
/// delta_sse > 0.
std::optional<SplitSpec> best_split(const std::vector<int>& rows,
                                    const Matrix& X, const Vector& y,
                                    const std::vector<FeatureId>& candidates,
                                    const GrowParams& params);

/// Recursive growth. A node becomes a leaf when it has fewer than min_split
/// rows, the target is constant, depth reaches max_depth, or no split
/// improves. With feature_subsample set, each split draws that many
/// candidate features from `features` through `rng`.
Tree grow_tree(const std::vector<int>& rows, const Matrix& X, const Vector& y,
               const std::vector<FeatureId>& features, const GrowParams& params,
               Rng* rng = nullptr);

/// Weakest-link cost-complexity pruning: repeatedly collapse the internal
/// node whose subtree improves training SSE by less than cp per split,
/// relative to the root SSE. The result shares the root with the input.
Tree prune_tree(const Tree& tree, double cp);

double predict_tree(const Tree& tree, const Eigen::Ref<const RowVector>& x);

Vector predict_tree(const Tree& tree, const Matrix& X);

/// Features appearing in internal nodes, ascending; empty for a single leaf.
std::vector<FeatureId> used_features(const Tree& tree);

/// Graphviz DOT text; every node shows its prediction (3 decimals) and
/// sample percent (1 decimal), internal nodes also their split rule.
std::string export_dot(const Tree& tree);

}  // namespace softsense
