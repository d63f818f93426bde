#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "softsense/cart.hpp"
#include "softsense/common.hpp"
#include "softsense/dataset.hpp"
#include "softsense/filters.hpp"
#include "softsense/forest.hpp"
#include "softsense/linreg.hpp"
#include "softsense/metrics.hpp"

namespace softsense {

enum class ModelFamily { linear, tree, forest };

const std::string& model_family_name(ModelFamily family);
ModelFamily parse_model_family(const std::string& name);

/// Which model to train and with what parameters. The seed drives forest
/// randomness; refits on different feature subsets reuse it so subset
/// comparisons are not confounded by RNG.
struct ModelSpec {
  ModelFamily family = ModelFamily::forest;
  GrowParams tree;       // tree family: grown with these, pruned at complexity
  ForestParams forest;   // forest family
  std::uint64_t seed = 0;
};

using TrainedModel = std::variant<LinearModel, Tree, Forest>;

TrainedModel fit_model(const ModelSpec& spec, const Matrix& X_train,
                       const Vector& y_train, const std::vector<FeatureId>& features,
                       int n_threads = 1);

Vector predict_model(const TrainedModel& model, const Matrix& X);

double predict_model(const TrainedModel& model, const Eigen::Ref<const RowVector>& x);

struct SelectionRow {
  std::vector<FeatureId> subset;     // nested prefix of the ranking
  std::optional<MetricsRow> metrics; // empty when the fit failed
  std::string error;                 // failure reason, if any
};

/// One row per nested prefix of the ranking, scored on the validation rows.
struct SelectionReport {
  std::vector<SelectionRow> rows;
  FeatureRanking ranking_used;
  ModelSpec model;
  std::uint64_t split_seed = 0;
};

/// Fits the spec on the training rows restricted to the first i ranked
/// features, for i = 1..p, and scores each fit on the validation rows.
/// A failed subset fit is recorded in its row; the sweep continues.
SelectionReport forward_selection(const Dataset& data, const SplitIndices& split,
                                  const FeatureRanking& ranking,
                                  const ModelSpec& spec, int n_threads = 1);

/// Fit on train rows with the given features, score on the held-out test rows.
MetricsRow evaluate_on_test(const Dataset& data, const SplitIndices& split,
                            const std::vector<FeatureId>& features,
                            const ModelSpec& spec, int n_threads = 1);

/// Models for every nested prefix of one ranking: models[i] was trained on
/// the first i + 1 ranked features.
struct PrefixModels {
  std::vector<FeatureId> ranking;
  std::vector<TrainedModel> models;
};

PrefixModels train_prefix_models(const Dataset& data, const std::vector<int>& rows,
                                 const std::vector<FeatureId>& ranking,
                                 const ModelSpec& spec, int n_threads = 1);

struct FallbackPrediction {
  double value = 0.0;
  std::vector<FeatureId> used_subset;
};

/// Routes to the largest ranking prefix wholly contained in `available`.
/// Throws ModelError when not even the top-ranked feature is available.
FallbackPrediction fallback_predict(const PrefixModels& models,
                                    const std::set<FeatureId>& available,
                                    const Eigen::Ref<const RowVector>& x);

/// CSV with columns rank,rmse,mae,corr,features (5 decimals, corr n/a when
/// undefined).
std::string selection_to_csv(const SelectionReport& report);

}  // namespace softsense
