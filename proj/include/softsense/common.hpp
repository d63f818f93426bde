#pragma once

#include <Eigen/Dense>

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace softsense {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

/// Raised for malformed input data: files, schemas, shapes, empty sets.
class DataError : public std::runtime_error {
 public:
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Raised for model-level failures: degenerate fits, bad bundles, missing features.
class ModelError : public std::runtime_error {
 public:
  explicit ModelError(const std::string& what) : std::runtime_error(what) {}
};

/// The eight process variables. The enum order A < B < ... < H is the
/// canonical column order and the tie-break order everywhere.
enum class FeatureId : int { A = 0, B, C, D, E, F, G, H };

inline constexpr int kFeatureCount = 8;

inline constexpr std::array<FeatureId, kFeatureCount> kAllFeatures = {
    FeatureId::A, FeatureId::B, FeatureId::C, FeatureId::D,
    FeatureId::E, FeatureId::F, FeatureId::G, FeatureId::H};

constexpr int feature_index(FeatureId id) { return static_cast<int>(id); }

inline const std::string& feature_code(FeatureId id) {
  static const std::array<std::string, kFeatureCount> codes = {
      "A", "B", "C", "D", "E", "F", "G", "H"};
  return codes[static_cast<size_t>(id)];
}

inline const std::string& feature_long_name(FeatureId id) {
  static const std::array<std::string, kFeatureCount> names = {
      "Raw-material", "Sulfur",         "Dew-point", "Air-sulfur-oven",
      "Air-converter", "Air-SO3-filter", "Molar",     "Molar-stp"};
  return names[static_cast<size_t>(id)];
}

/// Parses a single-letter feature code; throws DataError on anything else.
inline FeatureId parse_feature_code(const std::string& code) {
  if (code.size() == 1 && code[0] >= 'A' && code[0] <= 'H') {
    return static_cast<FeatureId>(code[0] - 'A');
  }
  throw DataError("unknown feature code: '" + code + "'");
}

inline std::string join_feature_codes(const std::vector<FeatureId>& features,
                                      const std::string& sep = ",") {
  std::string out;
  for (size_t i = 0; i < features.size(); ++i) {
    if (i > 0) out += sep;
    out += feature_code(features[i]);
  }
  return out;
}

/// Gathers the given rows of a matrix into a new dense matrix.
inline Matrix gather_rows(const Matrix& source, const std::vector<int>& rows) {
  Matrix out(static_cast<Index>(rows.size()), source.cols());
  for (size_t i = 0; i < rows.size(); ++i) {
    out.row(static_cast<Index>(i)) = source.row(rows[i]);
  }
  return out;
}

inline Vector gather(const Vector& source, const std::vector<int>& rows) {
  Vector out(static_cast<Index>(rows.size()));
  for (size_t i = 0; i < rows.size(); ++i) {
    out[static_cast<Index>(i)] = source[rows[i]];
  }
  return out;
}

}  // namespace softsense
