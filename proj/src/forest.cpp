#include "softsense/forest.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <thread>

#include "softsense/rng.hpp"

namespace softsense {

namespace {

constexpr std::uint64_t kTreeStream = 0x7265657274ULL;  // per-tree substreams

void run_indexed(int count, int n_threads, const std::function<void(int)>& work) {
  if (n_threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) work(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  const int workers = std::min(n_threads, count);
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) work(i);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

int ForestParams::resolved_mtry(int p) const {
  if (mtry) return *mtry;
  return std::max(1, p / 3);
}

void ForestParams::validate(int p) const {
  if (n_trees < 1) throw DataError("ForestParams: n_trees must be >= 1");
  const int m = resolved_mtry(p);
  if (m < 1 || m > p) {
    throw DataError("ForestParams: mtry must be in [1, " + std::to_string(p) + "]");
  }
}

Forest fit_forest(const Matrix& X, const Vector& y,
                  const std::vector<FeatureId>& features,
                  const ForestParams& params, int n_threads) {
  if (X.rows() != y.size()) throw DataError("fit_forest: X and y row counts differ");
  if (X.rows() < 2) throw DataError("fit_forest: need at least 2 rows");
  if (features.empty()) throw DataError("fit_forest: empty feature list");
  const int p = static_cast<int>(features.size());
  params.validate(p);

  const Index n = X.rows();
  GrowParams grow;
  grow.min_split = 10;
  grow.min_leaf = 5;
  grow.complexity = 0.0;
  grow.max_depth = 30;
  grow.feature_subsample = params.resolved_mtry(p);

  Forest forest;
  forest.features = features;
  forest.params = params;
  forest.n_train = n;
  forest.trees.resize(static_cast<size_t>(params.n_trees));
  forest.bootstrap_rows.resize(static_cast<size_t>(params.n_trees));
  forest.oob_rows.resize(static_cast<size_t>(params.n_trees));

  run_indexed(params.n_trees, n_threads, [&](int t) {
    Rng rng(derive_seed(params.seed, kTreeStream, static_cast<std::uint64_t>(t)));
    std::vector<int> rows;
    rows.reserve(static_cast<size_t>(n));
    std::vector<bool> in_bag(static_cast<size_t>(n), false);
    if (params.bootstrap) {
      for (Index i = 0; i < n; ++i) {
        const int r = static_cast<int>(rng.uniform_index(static_cast<std::uint64_t>(n)));
        rows.push_back(r);
        in_bag[static_cast<size_t>(r)] = true;
      }
      std::vector<int> oob;
      for (Index i = 0; i < n; ++i) {
        if (!in_bag[static_cast<size_t>(i)]) oob.push_back(static_cast<int>(i));
      }
      forest.oob_rows[static_cast<size_t>(t)] = std::move(oob);
    } else {
      for (Index i = 0; i < n; ++i) rows.push_back(static_cast<int>(i));
    }
    forest.trees[static_cast<size_t>(t)] = grow_tree(rows, X, y, features, grow, &rng);
    forest.bootstrap_rows[static_cast<size_t>(t)] = std::move(rows);
  });
  return forest;
}

Vector predict_forest(const Forest& forest, const Matrix& X) {
  Vector acc = Vector::Zero(X.rows());
  for (const Tree& tree : forest.trees) acc += predict_tree(tree, X);
  return acc / static_cast<double>(forest.trees.size());
}

double predict_forest(const Forest& forest, const Eigen::Ref<const RowVector>& x) {
  double acc = 0.0;
  for (const Tree& tree : forest.trees) acc += predict_tree(tree, x);
  return acc / static_cast<double>(forest.trees.size());
}

OobError oob_error(const Forest& forest, const Matrix& X, const Vector& y) {
  if (!forest.params.bootstrap) {
    throw ModelError("oob_error: forest was fitted without bootstrap");
  }
  if (X.rows() != forest.n_train || y.size() != forest.n_train) {
    throw DataError("oob_error: expected the forest's training data");
  }
  const Index n = forest.n_train;
  Vector sum = Vector::Zero(n);
  std::vector<int> count(static_cast<size_t>(n), 0);
  for (size_t t = 0; t < forest.trees.size(); ++t) {
    for (int r : forest.oob_rows[t]) {
      sum[r] += predict_tree(forest.trees[t], X.row(r));
      ++count[static_cast<size_t>(r)];
    }
  }
  OobError result;
  result.predictions = Vector::Constant(n, std::numeric_limits<double>::quiet_NaN());
  double acc = 0.0;
  Index covered = 0;
  for (Index i = 0; i < n; ++i) {
    if (count[static_cast<size_t>(i)] == 0) {
      result.uncovered_rows.push_back(static_cast<int>(i));
      continue;
    }
    const double pred = sum[i] / static_cast<double>(count[static_cast<size_t>(i)]);
    result.predictions[i] = pred;
    acc += (pred - y[i]) * (pred - y[i]);
    ++covered;
  }
  if (covered == 0) throw ModelError("oob_error: no row is out-of-bag for any tree");
  result.mse = acc / static_cast<double>(covered);
  return result;
}

ImportanceReport permutation_importance(const Forest& forest, const Matrix& X,
                                        const Vector& y, std::uint64_t perm_seed,
                                        int n_threads) {
  if (!forest.params.bootstrap) {
    throw ModelError("permutation_importance: forest was fitted without bootstrap");
  }
  const int n_trees = static_cast<int>(forest.trees.size());
  const int p = static_cast<int>(forest.features.size());

  // diffs(t, j) = OOB MSE of tree t with feature j permuted, minus baseline.
  Matrix diffs = Matrix::Zero(n_trees, p);
  std::vector<bool> has_oob(static_cast<size_t>(n_trees), false);

  run_indexed(n_trees, n_threads, [&](int t) {
    const std::vector<int>& oob = forest.oob_rows[static_cast<size_t>(t)];
    if (oob.empty()) return;
    has_oob[static_cast<size_t>(t)] = true;
    const Tree& tree = forest.trees[static_cast<size_t>(t)];
    Matrix x_oob = gather_rows(X, oob);
    const Vector y_oob = gather(y, oob);
    double base = 0.0;
    for (Index i = 0; i < x_oob.rows(); ++i) {
      const double d = predict_tree(tree, x_oob.row(i)) - y_oob[i];
      base += d * d;
    }
    base /= static_cast<double>(oob.size());

    std::vector<double> column(oob.size());
    for (int j = 0; j < p; ++j) {
      const int col = feature_index(forest.features[static_cast<size_t>(j)]);
      for (size_t i = 0; i < oob.size(); ++i) {
        column[i] = x_oob(static_cast<Index>(i), col);
      }
      std::vector<double> permuted = column;
      Rng rng(derive_seed(perm_seed, static_cast<std::uint64_t>(t),
                          static_cast<std::uint64_t>(col)));
      rng.shuffle(permuted);
      for (size_t i = 0; i < oob.size(); ++i) {
        x_oob(static_cast<Index>(i), col) = permuted[i];
      }
      double mse = 0.0;
      for (Index i = 0; i < x_oob.rows(); ++i) {
        const double d = predict_tree(tree, x_oob.row(i)) - y_oob[i];
        mse += d * d;
      }
      mse /= static_cast<double>(oob.size());
      diffs(t, j) = mse - base;
      for (size_t i = 0; i < oob.size(); ++i) {
        x_oob(static_cast<Index>(i), col) = column[i];
      }
    }
  });

  int used_trees = 0;
  for (bool b : has_oob) used_trees += b ? 1 : 0;
  if (used_trees == 0) {
    throw ModelError("permutation_importance: no tree has out-of-bag rows");
  }
  const double overall_mse = oob_error(forest, X, y).mse;

  ImportanceReport report;
  report.features = forest.features;
  report.raw_increase.resize(p);
  report.normalized.resize(p);
  report.percent_inc_mse.resize(p);
  for (int j = 0; j < p; ++j) {
    double sum = 0.0;
    for (int t = 0; t < n_trees; ++t) {
      if (has_oob[static_cast<size_t>(t)]) sum += diffs(t, j);
    }
    const double mean = sum / static_cast<double>(used_trees);
    double ss = 0.0;
    for (int t = 0; t < n_trees; ++t) {
      if (!has_oob[static_cast<size_t>(t)]) continue;
      const double d = diffs(t, j) - mean;
      ss += d * d;
    }
    const double sd = (used_trees > 1)
                          ? std::sqrt(ss / static_cast<double>(used_trees - 1))
                          : 0.0;
    report.raw_increase[j] = mean;
    report.normalized[j] = (sd > 0.0) ? mean / sd : 0.0;
    report.percent_inc_mse[j] = (overall_mse > 0.0) ? 100.0 * mean / overall_mse : 0.0;
  }

  report.ranking.reserve(static_cast<size_t>(p));
  for (int j = 0; j < p; ++j) {
    report.ranking.emplace_back(forest.features[static_cast<size_t>(j)],
                                report.normalized[j]);
  }
  std::stable_sort(report.ranking.begin(), report.ranking.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  return report;
}

std::string importance_to_csv(const ImportanceReport& report) {
  std::string out = "feature,normalized\n";
  char buf[64];
  for (const auto& [feature, score] : report.ranking) {
    std::snprintf(buf, sizeof(buf), "%s,%.5f\n", feature_code(feature).c_str(), score);
    out += buf;
  }
  return out;
}

}  // namespace softsense
