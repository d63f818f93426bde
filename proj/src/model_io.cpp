#include "softsense/model_io.hpp"

#include <cstdio>
#include <fstream>

#include <nlohmann/json.hpp>

namespace softsense {

using nlohmann::json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

namespace {

json features_to_json(const std::vector<FeatureId>& features) {
  json arr = json::array();
  for (FeatureId id : features) arr.push_back(feature_code(id));
  return arr;
}

std::vector<FeatureId> features_from_json(const json& arr) {
  std::vector<FeatureId> out;
  for (const auto& code : arr) {
    out.push_back(parse_feature_code(code.get<std::string>()));
  }
  return out;
}

json vector_to_json(const Vector& v) {
  json arr = json::array();
  for (Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Vector vector_from_json(const json& arr) {
  Vector v(static_cast<Index>(arr.size()));
  Index i = 0;
  for (const auto& x : arr) v[i++] = x.get<double>();
  return v;
}

json grow_params_to_json(const GrowParams& p) {
  json j{{"min_split", p.min_split},
         {"min_leaf", p.min_leaf},
         {"complexity", p.complexity},
         {"max_depth", p.max_depth}};
  if (p.feature_subsample) j["feature_subsample"] = *p.feature_subsample;
  return j;
}

GrowParams grow_params_from_json(const json& j) {
  GrowParams p;
  p.min_split = j.at("min_split").get<int>();
  p.min_leaf = j.at("min_leaf").get<int>();
  p.complexity = j.at("complexity").get<double>();
  p.max_depth = j.at("max_depth").get<int>();
  if (j.contains("feature_subsample")) {
    p.feature_subsample = j.at("feature_subsample").get<int>();
  }
  return p;
}

json forest_params_to_json(const ForestParams& p) {
  json j{{"n_trees", p.n_trees}, {"bootstrap", p.bootstrap}, {"seed", p.seed}};
  if (p.mtry) j["mtry"] = *p.mtry;
  return j;
}

ForestParams forest_params_from_json(const json& j) {
  ForestParams p;
  p.n_trees = j.at("n_trees").get<int>();
  p.bootstrap = j.at("bootstrap").get<bool>();
  p.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("mtry")) p.mtry = j.at("mtry").get<int>();
  return p;
}

}  // namespace

json linear_to_json(const LinearModel& model) {
  return json{{"kind", "linear"},
              {"intercept", model.intercept},
              {"coefficients", vector_to_json(model.coefficients)},
              {"features", features_to_json(model.features)},
              {"training_n", model.training_n}};
}

LinearModel linear_from_json(const json& j) {
  LinearModel model;
  model.intercept = j.at("intercept").get<double>();
  model.coefficients = vector_from_json(j.at("coefficients"));
  model.features = features_from_json(j.at("features"));
  model.training_n = j.at("training_n").get<Index>();
  return model;
}

json tree_to_json(const Tree& tree) {
  // Column layout keeps tree payloads compact.
  json f = json::array(), t = json::array(), l = json::array(), r = json::array();
  json p = json::array(), frac = json::array(), n = json::array();
  json sse = json::array(), dsse = json::array();
  for (const TreeNode& node : tree.nodes) {
    f.push_back(node.feature);
    t.push_back(node.threshold);
    l.push_back(node.left);
    r.push_back(node.right);
    p.push_back(node.prediction);
    frac.push_back(node.fraction);
    n.push_back(node.n_rows);
    sse.push_back(node.sse);
    dsse.push_back(node.delta_sse);
  }
  return json{{"kind", "tree"},
              {"params", grow_params_to_json(tree.params)},
              {"feature", std::move(f)},
              {"threshold", std::move(t)},
              {"left", std::move(l)},
              {"right", std::move(r)},
              {"prediction", std::move(p)},
              {"fraction", std::move(frac)},
              {"n_rows", std::move(n)},
              {"sse", std::move(sse)},
              {"delta_sse", std::move(dsse)}};
}

Tree tree_from_json(const json& j) {
  Tree tree;
  tree.params = grow_params_from_json(j.at("params"));
  const auto& f = j.at("feature");
  const size_t count = f.size();
  tree.nodes.resize(count);
  for (size_t i = 0; i < count; ++i) {
    TreeNode& node = tree.nodes[i];
    node.feature = j.at("feature")[i].get<int>();
    node.threshold = j.at("threshold")[i].get<double>();
    node.left = j.at("left")[i].get<int>();
    node.right = j.at("right")[i].get<int>();
    node.prediction = j.at("prediction")[i].get<double>();
    node.fraction = j.at("fraction")[i].get<double>();
    node.n_rows = j.at("n_rows")[i].get<int>();
    node.sse = j.at("sse")[i].get<double>();
    node.delta_sse = j.at("delta_sse")[i].get<double>();
  }
  if (tree.nodes.empty()) throw ModelError("tree payload has no nodes");
  return tree;
}

json forest_to_json(const Forest& forest, bool include_bag) {
  json trees = json::array();
  for (const Tree& tree : forest.trees) trees.push_back(tree_to_json(tree));
  json j{{"kind", "forest"},
         {"params", forest_params_to_json(forest.params)},
         {"features", features_to_json(forest.features)},
         {"n_train", forest.n_train},
         {"trees", std::move(trees)}};
  if (include_bag) {
    json bag = json::array();
    for (const auto& rows : forest.bootstrap_rows) bag.push_back(rows);
    j["bootstrap_rows"] = std::move(bag);
  }
  return j;
}

Forest forest_from_json(const json& j) {
  Forest forest;
  forest.params = forest_params_from_json(j.at("params"));
  forest.features = features_from_json(j.at("features"));
  forest.n_train = j.at("n_train").get<Index>();
  for (const auto& tj : j.at("trees")) forest.trees.push_back(tree_from_json(tj));
  if (forest.trees.empty()) throw ModelError("forest payload has no trees");
  if (j.contains("bootstrap_rows")) {
    for (const auto& rows : j.at("bootstrap_rows")) {
      forest.bootstrap_rows.push_back(rows.get<std::vector<int>>());
    }
    forest.oob_rows.resize(forest.bootstrap_rows.size());
    for (size_t t = 0; t < forest.bootstrap_rows.size(); ++t) {
      std::vector<bool> in_bag(static_cast<size_t>(forest.n_train), false);
      for (int r : forest.bootstrap_rows[t]) in_bag[static_cast<size_t>(r)] = true;
      for (Index i = 0; i < forest.n_train; ++i) {
        if (!in_bag[static_cast<size_t>(i)]) {
          forest.oob_rows[t].push_back(static_cast<int>(i));
        }
      }
    }
  }
  return forest;
}

namespace {

json model_to_json(const TrainedModel& model) {
  return std::visit(
      [](const auto& m) -> json {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, LinearModel>) return linear_to_json(m);
        if constexpr (std::is_same_v<T, Tree>) return tree_to_json(m);
        if constexpr (std::is_same_v<T, Forest>) return forest_to_json(m);
      },
      model);
}

TrainedModel model_from_json(const json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "linear") return linear_from_json(j);
  if (kind == "tree") return tree_from_json(j);
  if (kind == "forest") return forest_from_json(j);
  throw ModelError("unknown model kind: '" + kind + "'");
}

json bundle_body(const ModelBundle& bundle) {
  json models = json::array();
  for (const TrainedModel& model : bundle.models.models) {
    models.push_back(model_to_json(model));
  }
  return json{{"format_version", bundle.format_version},
              {"family", model_family_name(bundle.spec.family)},
              {"seed", bundle.spec.seed},
              {"tree_params", grow_params_to_json(bundle.spec.tree)},
              {"forest_params", forest_params_to_json(bundle.spec.forest)},
              {"normalization",
               json{{"mean", vector_to_json(bundle.normalization.mean)},
                    {"sd", vector_to_json(bundle.normalization.sd)},
                    {"fitted_on", bundle.normalization.fitted_on}}},
              {"ranking", features_to_json(bundle.models.ranking)},
              {"models", std::move(models)}};
}

std::string digest_string(const json& body) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "fnv1a:%016llx",
                static_cast<unsigned long long>(fnv1a64(body.dump())));
  return buf;
}

}  // namespace

void save_model(const ModelBundle& bundle, const std::filesystem::path& path) {
  json body = bundle_body(bundle);
  const std::string digest = digest_string(body);
  body["digest"] = digest;
  std::ofstream out(path);
  if (!out) throw DataError("cannot open file for writing: " + path.string());
  out << body.dump(1) << "\n";
  if (!out) throw DataError("write failed: " + path.string());
}

ModelBundle load_model(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open file: " + path.string());
  json body;
  try {
    in >> body;
  } catch (const json::exception& e) {
    throw ModelError("corrupt model bundle (" + path.string() +
                     "): " + e.what());
  }
  try {
    const std::string stored_digest = body.at("digest").get<std::string>();
    body.erase("digest");
    if (digest_string(body) != stored_digest) {
      throw ModelError("corrupt model bundle (" + path.string() +
                       "): digest mismatch");
    }
    const int version = body.at("format_version").get<int>();
    if (version != kModelFormatVersion) {
      throw ModelError("unsupported model format_version " +
                       std::to_string(version) + "; supported versions: " +
                       std::to_string(kModelFormatVersion));
    }
    ModelBundle bundle;
    bundle.format_version = version;
    bundle.spec.family = parse_model_family(body.at("family").get<std::string>());
    bundle.spec.seed = body.at("seed").get<std::uint64_t>();
    bundle.spec.tree = grow_params_from_json(body.at("tree_params"));
    bundle.spec.forest = forest_params_from_json(body.at("forest_params"));
    const json& norm = body.at("normalization");
    bundle.normalization.mean = vector_from_json(norm.at("mean"));
    bundle.normalization.sd = vector_from_json(norm.at("sd"));
    bundle.normalization.fitted_on = norm.at("fitted_on").get<Index>();
    bundle.models.ranking = features_from_json(body.at("ranking"));
    for (const auto& mj : body.at("models")) {
      bundle.models.models.push_back(model_from_json(mj));
    }
    if (bundle.models.models.size() > bundle.models.ranking.size()) {
      throw ModelError("model bundle has more models than ranked features");
    }
    return bundle;
  } catch (const json::exception& e) {
    throw ModelError("corrupt model bundle (" + path.string() +
                     "): " + e.what());
  }
}

}  // namespace softsense
