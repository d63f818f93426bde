#include "softsense/selection.hpp"

#include <algorithm>
#include <cstdio>

namespace softsense {

const std::string& model_family_name(ModelFamily family) {
  static const std::string names[] = {"linear", "tree", "forest"};
  return names[static_cast<size_t>(family)];
}

ModelFamily parse_model_family(const std::string& name) {
  if (name == "linear") return ModelFamily::linear;
  if (name == "tree") return ModelFamily::tree;
  if (name == "forest") return ModelFamily::forest;
  throw DataError("unknown model family: '" + name + "'");
}

TrainedModel fit_model(const ModelSpec& spec, const Matrix& X_train,
                       const Vector& y_train, const std::vector<FeatureId>& features,
                       int n_threads) {
  switch (spec.family) {
    case ModelFamily::linear:
      return fit_ols(X_train, y_train, features);
    case ModelFamily::tree: {
      std::vector<int> rows(static_cast<size_t>(X_train.rows()));
      for (Index i = 0; i < X_train.rows(); ++i) {
        rows[static_cast<size_t>(i)] = static_cast<int>(i);
      }
      const Tree grown = grow_tree(rows, X_train, y_train, features, spec.tree);
      return prune_tree(grown, spec.tree.complexity);
    }
    case ModelFamily::forest: {
      ForestParams params = spec.forest;
      params.seed = spec.seed;
      const int p = static_cast<int>(features.size());
      if (params.mtry && *params.mtry > p) params.mtry = p;
      return fit_forest(X_train, y_train, features, params, n_threads);
    }
  }
  throw ModelError("fit_model: unknown family");
}

Vector predict_model(const TrainedModel& model, const Matrix& X) {
  return std::visit(
      [&](const auto& m) -> Vector {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) return predict_linear(m, X);
        if constexpr (std::is_same_v<T, Tree>) return predict_tree(m, X);
        if constexpr (std::is_same_v<T, Forest>) return predict_forest(m, X);
      },
      model);
}

double predict_model(const TrainedModel& model, const Eigen::Ref<const RowVector>& x) {
  return std::visit(
      [&](const auto& m) -> double {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) return predict_linear(m, x);
        if constexpr (std::is_same_v<T, Tree>) return predict_tree(m, x);
        if constexpr (std::is_same_v<T, Forest>) return predict_forest(m, x);
      },
      model);
}

SelectionReport forward_selection(const Dataset& data, const SplitIndices& split,
                                  const FeatureRanking& ranking,
                                  const ModelSpec& spec, int n_threads) {
  if (ranking.entries.empty()) {
    throw DataError("forward_selection: empty ranking");
  }
  const Matrix X_train = gather_rows(data.features, split.train);
  const Vector y_train = gather(data.target, split.train);
  const Matrix X_val = gather_rows(data.features, split.validation);
  const Vector y_val = gather(data.target, split.validation);

  SelectionReport report;
  report.ranking_used = ranking;
  report.model = spec;
  report.split_seed = split.seed;

  const std::vector<FeatureId> order = ranking.feature_order();
  for (size_t i = 1; i <= order.size(); ++i) {
    SelectionRow row;
    row.subset.assign(order.begin(), order.begin() + static_cast<long>(i));
    try {
      const TrainedModel model =
          fit_model(spec, X_train, y_train, row.subset, n_threads);
      row.metrics = evaluate_predictions(y_val, predict_model(model, X_val));
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

MetricsRow evaluate_on_test(const Dataset& data, const SplitIndices& split,
                            const std::vector<FeatureId>& features,
                            const ModelSpec& spec, int n_threads) {
  if (features.empty()) throw DataError("evaluate_on_test: empty feature list");
  const Matrix X_train = gather_rows(data.features, split.train);
  const Vector y_train = gather(data.target, split.train);
  const TrainedModel model = fit_model(spec, X_train, y_train, features, n_threads);
  const Matrix X_test = gather_rows(data.features, split.test);
  const Vector y_test = gather(data.target, split.test);
  return evaluate_predictions(y_test, predict_model(model, X_test));
}

PrefixModels train_prefix_models(const Dataset& data, const std::vector<int>& rows,
                                 const std::vector<FeatureId>& ranking,
                                 const ModelSpec& spec, int n_threads) {
  if (ranking.empty()) throw DataError("train_prefix_models: empty ranking");
  const Matrix X_train = gather_rows(data.features, rows);
  const Vector y_train = gather(data.target, rows);
  PrefixModels out;
  out.ranking = ranking;
  for (size_t i = 1; i <= ranking.size(); ++i) {
    const std::vector<FeatureId> subset(ranking.begin(),
                                        ranking.begin() + static_cast<long>(i));
    out.models.push_back(fit_model(spec, X_train, y_train, subset, n_threads));
  }
  return out;
}

FallbackPrediction fallback_predict(const PrefixModels& models,
                                    const std::set<FeatureId>& available,
                                    const Eigen::Ref<const RowVector>& x) {
  size_t usable = 0;
  for (size_t i = 0; i < models.ranking.size() && i < models.models.size(); ++i) {
    if (available.count(models.ranking[i]) == 0) break;
    usable = i + 1;
  }
  if (usable == 0) {
    throw ModelError(
        "fallback_predict: no model applies; the top-ranked feature " +
        feature_code(models.ranking.front()) + " is unavailable");
  }
  FallbackPrediction out;
  out.used_subset.assign(models.ranking.begin(),
                         models.ranking.begin() + static_cast<long>(usable));
  out.value = predict_model(models.models[usable - 1], x);
  return out;
}

std::string selection_to_csv(const SelectionReport& report) {
  std::string out = "rank,rmse,mae,corr,features\n";
  char buf[128];
  for (size_t i = 0; i < report.rows.size(); ++i) {
    const SelectionRow& row = report.rows[i];
    if (row.metrics) {
      std::string corr = "n/a";
      if (row.metrics->corr) {
        std::snprintf(buf, sizeof(buf), "%.5f", *row.metrics->corr);
        corr = buf;
      }
      std::snprintf(buf, sizeof(buf), "%zu,%.5f,%.5f,%s,\"%s\"\n", i + 1,
                    row.metrics->rmse, row.metrics->mae, corr.c_str(),
                    join_feature_codes(row.subset).c_str());
      out += buf;
    } else {
      std::snprintf(buf, sizeof(buf), "%zu,error,error,error,\"%s\"\n", i + 1,
                    join_feature_codes(row.subset).c_str());
      out += buf;
    }
  }
  return out;
}

}  // namespace softsense
