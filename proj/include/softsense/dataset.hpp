#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "softsense/common.hpp"

namespace softsense {

/// Tabular process data: one column per feature (canonical order A..H),
/// the NT target, and a per-row outlier flag.
struct Dataset {
  Matrix features;                         // n x 8
  Vector target;                           // NT
  std::vector<std::uint8_t> outlier_flag;  // one per row

  Index n_rows() const { return features.rows(); }
  Eigen::Ref<const Vector> column(FeatureId id) const {
    return features.col(feature_index(id));
  }
};

/// Per-column mean/sd, target last (index 8). sd = 0 is recorded as-is.
struct NormStats {
  Vector mean;  // size 9: A..H, NT
  Vector sd;    // size 9, sample sd (divisor n-1)
  Index fitted_on = 0;
};

struct Standardized {
  Dataset data;
  std::vector<std::string> degenerate_columns;  // sd = 0, mapped to zero
};

/// Disjoint train/validation/test row indices from a seeded shuffle.
struct SplitIndices {
  std::vector<int> train;
  std::vector<int> validation;
  std::vector<int> test;
  std::uint64_t seed = 0;
};

/// Loads the CSV schema `A,B,C,D,E,F,G,H,NT[,OUTLIER]` (any column order,
/// header mandatory, UTF-8, LF or CRLF). Throws DataError on schema or
/// parse problems, naming the offending column or cell.
Dataset load_csv(const std::filesystem::path& path);

/// Writes the same schema back, OUTLIER column included, at round-trip
/// precision.
void write_csv(const Dataset& data, const std::filesystem::path& path);

/// Keeps only rows with outlier_flag == false, order preserved.
Dataset drop_flagged_outliers(const Dataset& data);

/// Gathers a row subset into a new Dataset, order as given.
Dataset select_rows(const Dataset& data, const std::vector<int>& rows);

/// Sample mean/sd per column over the given rows only.
NormStats zscore_fit(const Dataset& data, const std::vector<int>& rows);

/// x -> (x - mean)/sd per cell; sd = 0 columns map to 0 and are reported.
Standardized zscore_apply(const Dataset& data, const NormStats& stats);

/// Seeded Fisher-Yates shuffle of 0..n-1, then partition:
/// |test| = round(0.20 n), |validation| = round(0.20 (n - |test|)),
/// remainder to train. Same seed gives the same sets on every platform.
SplitIndices split_dataset(Index n, std::uint64_t seed);

}  // namespace softsense
