#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <nlohmann/json_fwd.hpp>

#include "softsense/dataset.hpp"
#include "softsense/selection.hpp"

namespace softsense {

inline constexpr int kModelFormatVersion = 1;

/// Persisted soft sensor: the model spec, the normalization fitted on the
/// training rows, and one trained model per nested prefix of the ranking.
/// A content digest over the canonical JSON body guards integrity.
struct ModelBundle {
  int format_version = kModelFormatVersion;
  ModelSpec spec;
  NormStats normalization;
  PrefixModels models;
};

std::uint64_t fnv1a64(std::string_view bytes);

nlohmann::json linear_to_json(const LinearModel& model);
LinearModel linear_from_json(const nlohmann::json& j);

nlohmann::json tree_to_json(const Tree& tree);
Tree tree_from_json(const nlohmann::json& j);

/// include_bag additionally stores the per-tree bootstrap rows; prediction
/// does not need them, determinism checks do.
nlohmann::json forest_to_json(const Forest& forest, bool include_bag = false);
Forest forest_from_json(const nlohmann::json& j);

void save_model(const ModelBundle& bundle, const std::filesystem::path& path);

/// Throws ModelError on digest mismatch, unsupported format_version, or a
/// file that does not parse as a bundle.
ModelBundle load_model(const std::filesystem::path& path);

}  // namespace softsense
