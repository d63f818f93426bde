#include "softsense/cart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>

namespace softsense {

void GrowParams::validate() const {
  if (min_leaf < 1) throw DataError("GrowParams: min_leaf must be >= 1");
  if (2 * min_leaf > min_split) {
    throw DataError("GrowParams: min_split must be >= 2 * min_leaf");
  }
  if (complexity < 0.0) throw DataError("GrowParams: complexity must be >= 0");
  if (max_depth < 0) throw DataError("GrowParams: max_depth must be >= 0");
  if (feature_subsample && *feature_subsample < 1) {
    throw DataError("GrowParams: feature_subsample must be >= 1");
  }
}

int Tree::leaf_count() const {
  int count = 0;
  for (const auto& node : nodes) count += node.is_leaf() ? 1 : 0;
  return count;
}

int Tree::internal_count() const {
  return static_cast<int>(nodes.size()) - leaf_count();
}

namespace {

struct NodeStats {
  double mean = 0.0;
  double sse = 0.0;
  double y_min = 0.0;
  double y_max = 0.0;
};

// Plain sequential loops in row-list order keep node statistics
// reproducible independent of vectorization.
NodeStats node_stats(const std::vector<int>& rows, const Vector& y) {
  NodeStats stats;
  double sum = 0.0;
  stats.y_min = std::numeric_limits<double>::infinity();
  stats.y_max = -std::numeric_limits<double>::infinity();
  for (int r : rows) {
    const double v = y[r];
    sum += v;
    stats.y_min = std::min(stats.y_min, v);
    stats.y_max = std::max(stats.y_max, v);
  }
  stats.mean = sum / static_cast<double>(rows.size());
  double ss = 0.0;
  for (int r : rows) {
    const double d = y[r] - stats.mean;
    ss += d * d;
  }
  stats.sse = ss;
  return stats;
}

}  // namespace

std::optional<SplitSpec> best_split(const std::vector<int>& rows,
                                    const Matrix& X, const Vector& y,
                                    const std::vector<FeatureId>& candidates,
                                    const GrowParams& params) {
  const int k = static_cast<int>(rows.size());
  if (k < params.min_split || k < 2 * params.min_leaf) return std::nullopt;

  const NodeStats stats = node_stats(rows, y);
  if (stats.y_min == stats.y_max) return std::nullopt;  // pure node

  std::vector<FeatureId> ordered = candidates;
  std::sort(ordered.begin(), ordered.end());

  // Scan on mean-centered targets for numerical headroom.
  std::vector<std::pair<double, double>> points(static_cast<size_t>(k));
  std::optional<SplitSpec> best;
  double best_delta = 0.0;

  for (FeatureId fid : ordered) {
    const int col = feature_index(fid);
    for (int i = 0; i < k; ++i) {
      points[static_cast<size_t>(i)] = {X(rows[static_cast<size_t>(i)], col),
                                        y[rows[static_cast<size_t>(i)]] - stats.mean};
    }
    std::stable_sort(points.begin(), points.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });

    double total_z = 0.0;
    double total_zz = 0.0;
    for (const auto& [x, z] : points) {
      total_z += z;
      total_zz += z * z;
    }
    const double parent_sse =
        total_zz - total_z * total_z / static_cast<double>(k);

    double left_z = 0.0;
    double left_zz = 0.0;
    for (int i = 1; i < k; ++i) {
      const auto& [x_prev, z_prev] = points[static_cast<size_t>(i - 1)];
      left_z += z_prev;
      left_zz += z_prev * z_prev;
      const double x_next = points[static_cast<size_t>(i)].first;
      if (x_prev == x_next) continue;
      if (i < params.min_leaf || k - i < params.min_leaf) continue;
      const double nl = static_cast<double>(i);
      const double nr = static_cast<double>(k - i);
      const double sse_left = left_zz - left_z * left_z / nl;
      const double right_z = total_z - left_z;
      const double right_zz = total_zz - left_zz;
      const double sse_right = right_zz - right_z * right_z / nr;
      const double delta = parent_sse - sse_left - sse_right;
      if (delta > best_delta) {
        best_delta = delta;
        best = SplitSpec{fid, (x_prev + x_next) / 2.0, delta};
      }
    }
  }
  return best;
}

namespace {

struct Grower {
  const Matrix& X;
  const Vector& y;
  const std::vector<FeatureId>& features;
  const GrowParams& params;
  Rng* rng;
  std::vector<TreeNode> nodes;
  double n_root = 0.0;

  int build(const std::vector<int>& rows, int depth) {
    const int id = static_cast<int>(nodes.size());
    nodes.emplace_back();
    const NodeStats stats = node_stats(rows, y);
    nodes[static_cast<size_t>(id)].prediction = stats.mean;
    nodes[static_cast<size_t>(id)].sse = stats.sse;
    nodes[static_cast<size_t>(id)].n_rows = static_cast<int>(rows.size());
    nodes[static_cast<size_t>(id)].fraction =
        static_cast<double>(rows.size()) / n_root;

    if (static_cast<int>(rows.size()) < params.min_split ||
        depth >= params.max_depth || stats.y_min == stats.y_max) {
      return id;
    }

    std::vector<FeatureId> candidates;
    if (params.feature_subsample) {
      const int p = static_cast<int>(features.size());
      const int m = std::min(*params.feature_subsample, p);
      for (int idx : rng->sample_without_replacement(p, m)) {
        candidates.push_back(features[static_cast<size_t>(idx)]);
      }
    } else {
      candidates = features;
    }

    const std::optional<SplitSpec> split =
        best_split(rows, X, y, candidates, params);
    if (!split) return id;

    std::vector<int> left_rows;
    std::vector<int> right_rows;
    left_rows.reserve(rows.size());
    right_rows.reserve(rows.size());
    const int col = feature_index(split->feature);
    for (int r : rows) {
      (X(r, col) <= split->threshold ? left_rows : right_rows).push_back(r);
    }

    nodes[static_cast<size_t>(id)].feature = col;
    nodes[static_cast<size_t>(id)].threshold = split->threshold;
    nodes[static_cast<size_t>(id)].delta_sse = split->delta_sse;
    const int left_id = build(left_rows, depth + 1);
    nodes[static_cast<size_t>(id)].left = left_id;
    const int right_id = build(right_rows, depth + 1);
    nodes[static_cast<size_t>(id)].right = right_id;
    return id;
  }
};

}  // namespace

Tree grow_tree(const std::vector<int>& rows, const Matrix& X, const Vector& y,
               const std::vector<FeatureId>& features, const GrowParams& params,
               Rng* rng) {
  params.validate();
  if (rows.empty()) throw DataError("grow_tree: empty row set");
  if (params.feature_subsample && rng == nullptr) {
    throw DataError("grow_tree: feature_subsample requires an rng");
  }
  for (FeatureId id : features) {
    if (feature_index(id) >= X.cols()) {
      throw ModelError("grow_tree: missing feature column " + feature_code(id));
    }
  }
  Grower grower{X, y, features, params, rng, {}, static_cast<double>(rows.size())};
  grower.build(rows, 0);
  Tree tree;
  tree.nodes = std::move(grower.nodes);
  tree.params = params;
  return tree;
}

namespace {

struct SubtreeAggregate {
  double leaf_sse = 0.0;
  int n_leaves = 0;
};

SubtreeAggregate aggregate(const std::vector<TreeNode>& nodes,
                           const std::vector<bool>& collapsed, int id,
                           std::vector<SubtreeAggregate>& out) {
  const TreeNode& node = nodes[static_cast<size_t>(id)];
  if (node.is_leaf() || collapsed[static_cast<size_t>(id)]) {
    out[static_cast<size_t>(id)] = {node.sse, 1};
  } else {
    const SubtreeAggregate l = aggregate(nodes, collapsed, node.left, out);
    const SubtreeAggregate r = aggregate(nodes, collapsed, node.right, out);
    out[static_cast<size_t>(id)] = {l.leaf_sse + r.leaf_sse,
                                    l.n_leaves + r.n_leaves};
  }
  return out[static_cast<size_t>(id)];
}

int copy_pruned(const Tree& source, const std::vector<bool>& collapsed, int id,
                Tree& target) {
  const int new_id = static_cast<int>(target.nodes.size());
  target.nodes.push_back(source.nodes[static_cast<size_t>(id)]);
  TreeNode& node = target.nodes[static_cast<size_t>(new_id)];
  if (collapsed[static_cast<size_t>(id)] || node.is_leaf()) {
    node.feature = -1;
    node.threshold = 0.0;
    node.left = node.right = -1;
    node.delta_sse = 0.0;
    return new_id;
  }
  const int left_id =
      copy_pruned(source, collapsed, source.nodes[static_cast<size_t>(id)].left, target);
  target.nodes[static_cast<size_t>(new_id)].left = left_id;
  const int right_id =
      copy_pruned(source, collapsed, source.nodes[static_cast<size_t>(id)].right, target);
  target.nodes[static_cast<size_t>(new_id)].right = right_id;
  return new_id;
}

}  // namespace

Tree prune_tree(const Tree& tree, double cp) {
  const double root_sse = tree.root().sse;
  const size_t n = tree.nodes.size();
  std::vector<bool> collapsed(n, false);
  if (root_sse > 0.0) {
    std::vector<SubtreeAggregate> agg(n);
    for (;;) {
      aggregate(tree.nodes, collapsed, 0, agg);
      int weakest = -1;
      double weakest_g = std::numeric_limits<double>::infinity();
      for (size_t id = 0; id < n; ++id) {
        const TreeNode& node = tree.nodes[id];
        if (node.is_leaf() || collapsed[id]) continue;
        const SubtreeAggregate& a = agg[id];
        const double g = (node.sse - a.leaf_sse) /
                         (static_cast<double>(a.n_leaves - 1) * root_sse);
        if (g < weakest_g) {
          weakest_g = g;
          weakest = static_cast<int>(id);
        }
      }
      if (weakest < 0 || weakest_g >= cp) break;
      collapsed[static_cast<size_t>(weakest)] = true;
    }
  }
  Tree pruned;
  pruned.params = tree.params;
  copy_pruned(tree, collapsed, 0, pruned);
  return pruned;
}

double predict_tree(const Tree& tree, const Eigen::Ref<const RowVector>& x) {
  int id = 0;
  for (;;) {
    const TreeNode& node = tree.nodes[static_cast<size_t>(id)];
    if (node.is_leaf()) return node.prediction;
    if (node.feature >= x.size()) {
      throw ModelError("predict_tree: missing feature column " +
                       feature_code(static_cast<FeatureId>(node.feature)));
    }
    id = (x[node.feature] <= node.threshold) ? node.left : node.right;
  }
}

Vector predict_tree(const Tree& tree, const Matrix& X) {
  Vector out(X.rows());
  for (Index i = 0; i < X.rows(); ++i) out[i] = predict_tree(tree, X.row(i));
  return out;
}

std::vector<FeatureId> used_features(const Tree& tree) {
  std::vector<FeatureId> used;
  for (const auto& node : tree.nodes) {
    if (!node.is_leaf()) used.push_back(static_cast<FeatureId>(node.feature));
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());
  return used;
}

std::string export_dot(const Tree& tree) {
  std::string out = "digraph tree {\n  node [shape=box];\n";
  char buf[128];
  for (size_t id = 0; id < tree.nodes.size(); ++id) {
    const TreeNode& node = tree.nodes[id];
    if (node.is_leaf()) {
      std::snprintf(buf, sizeof(buf), "  n%zu [label=\"%.3f\\n%.1f%%\"];\n", id,
                    node.prediction, 100.0 * node.fraction);
    } else {
      std::snprintf(buf, sizeof(buf),
                    "  n%zu [label=\"%s <= %g\\n%.3f\\n%.1f%%\"];\n", id,
                    feature_code(static_cast<FeatureId>(node.feature)).c_str(),
                    node.threshold, node.prediction, 100.0 * node.fraction);
    }
    out += buf;
    if (!node.is_leaf()) {
      std::snprintf(buf, sizeof(buf), "  n%zu -> n%d;\n  n%zu -> n%d;\n", id,
                    node.left, id, node.right);
      out += buf;
    }
  }
  out += "}\n";
  return out;
}

}  // namespace softsense
