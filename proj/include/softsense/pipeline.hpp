#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

#include <nlohmann/json_fwd.hpp>

#include "softsense/synth.hpp"

namespace softsense {

/// Full-protocol configuration. All randomness funnels through `seed`;
/// per-stage seeds are derived from it and recorded in the manifest.
struct PipelineConfig {
  std::optional<std::filesystem::path> input_csv;  // absent: generate
  GeneratorConfig generator;
  std::filesystem::path out_dir;
  std::uint64_t seed = 0;
  int n_trees = 100;
  std::optional<int> mtry;
  double cp = 0.01;
  int bins = 5;
  int top_k = 3;
  int n_threads = 0;  // 0 = hardware concurrency
};

struct PipelineResult {
  int exit_code = 0;            // 0 ok, 3 data error, 4 model error
  std::string failed_stage;     // empty on success
  std::string message;
};

/// load -> outlier removal -> split -> normalize -> RF permutation
/// importance -> correlation matrix -> filter rankings -> forward selection
/// for all three families -> top-k test evaluation. Writes importance.csv,
/// rankings.csv, corrmatrix.csv, selection_<family>.csv, test_results.csv,
/// tree.dot and manifest.json into out_dir; partial outputs are kept when a
/// stage fails and the manifest records the failure.
PipelineResult run_pipeline(const PipelineConfig& config);

nlohmann::json generator_config_to_json(const GeneratorConfig& config);
GeneratorConfig generator_config_from_json(const nlohmann::json& j);

}  // namespace softsense
