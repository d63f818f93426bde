#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "softsense/cart.hpp"
#include "softsense/common.hpp"

namespace softsense {

struct ForestParams {
  int n_trees = 100;
  std::optional<int> mtry;  // default max(1, floor(p / 3))
  bool bootstrap = true;
  std::uint64_t seed = 0;

  int resolved_mtry(int p) const;
  void validate(int p) const;
};

/// Bagged ensemble of unpruned forest-mode trees (min_split 10, min_leaf 5).
struct Forest {
  std::vector<Tree> trees;
  std::vector<std::vector<int>> bootstrap_rows;  // per tree, n draws
  std::vector<std::vector<int>> oob_rows;        // ascending complement
  std::vector<FeatureId> features;
  ForestParams params;
  Index n_train = 0;
};

/// Per-feature out-of-bag permutation importance. raw_increase is the mean
/// over trees of (permuted OOB MSE - OOB MSE); normalized divides by the
/// standard deviation of those differences (0 when the sd is 0);
/// percent_inc_mse rescales by the forest's overall OOB MSE. The ranking
/// sorts by normalized score, ties by FeatureId.
struct ImportanceReport {
  std::vector<FeatureId> features;
  Vector raw_increase;
  Vector normalized;
  Vector percent_inc_mse;
  std::vector<std::pair<FeatureId, double>> ranking;
};

/// Tree t draws its bootstrap sample and grows from a stream seeded by
/// (params.seed, t), so serial and parallel builds produce identical
/// forests.
Forest fit_forest(const Matrix& X, const Vector& y,
                  const std::vector<FeatureId>& features,
                  const ForestParams& params, int n_threads = 1);

/// Unweighted mean of per-tree predictions.
Vector predict_forest(const Forest& forest, const Matrix& X);

double predict_forest(const Forest& forest, const Eigen::Ref<const RowVector>& x);

struct OobError {
  double mse = 0.0;
  Vector predictions;               // NaN where no tree has the row OOB
  std::vector<int> uncovered_rows;  // excluded from mse
};

/// Per row, average only the trees for which the row is out-of-bag, then
/// MSE against y. Requires bootstrap; rows OOB for no tree are excluded
/// and reported.
OobError oob_error(const Forest& forest, const Matrix& X, const Vector& y);

/// X and y must be the training data the forest was fitted on. The
/// permutation of feature j within tree t's OOB rows draws from a stream
/// seeded by (perm_seed, t, j), independent of execution order.
ImportanceReport permutation_importance(const Forest& forest, const Matrix& X,
                                        const Vector& y, std::uint64_t perm_seed,
                                        int n_threads = 1);

/// Two-column CSV (feature, normalized score) in ranking order.
std::string importance_to_csv(const ImportanceReport& report);

}  // namespace softsense
