#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "softsense/common.hpp"
#include "softsense/dataset.hpp"

namespace softsense {

enum class RankMethod { chi_squared, gain_ratio, correlation, rf_permutation };

const std::string& rank_method_name(RankMethod method);

/// Features ordered by descending score; ties break by FeatureId.
struct FeatureRanking {
  RankMethod method;
  std::vector<std::pair<FeatureId, double>> entries;

  std::vector<FeatureId> feature_order() const;
  std::vector<FeatureId> top(size_t k) const;
};

/// Pairwise Pearson coefficients over {A..H, NT}; zero-variance columns
/// yield 0 entries and are listed in `degenerate`.
struct CorrelationMatrix {
  Matrix values;  // 9 x 9, diagonal 1
  std::vector<std::string> labels;
  std::vector<std::string> degenerate;
};

CorrelationMatrix correlation_matrix(const Dataset& data);

struct BinLabels {
  std::vector<int> labels;  // 0..k-1
  int k = 0;
  bool degenerate = false;  // fewer than 2 occupied bins
};

/// Bin boundaries at the i/k quantiles; values equal to a boundary go to
/// the lower bin. With distinct values, bin populations differ by at most 1.
BinLabels discretize_equal_frequency(const Eigen::Ref<const Vector>& values, int k);

struct FilterScore {
  double value = 0.0;
  bool degenerate = false;
};

/// Pearson chi-squared statistic of the k x k table of binned x vs binned
/// target; 0 with the degenerate flag if either side fails to spread.
FilterScore chi_squared_score(const Eigen::Ref<const Vector>& x,
                              const Eigen::Ref<const Vector>& target, int k);

/// Information gain of the binned pair divided by the binned feature's
/// entropy (bits); 0 when H(x) = 0.
FilterScore gain_ratio_score(const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& target, int k);

/// Absolute Pearson correlation; 0 with the flag when undefined.
FilterScore correlation_filter_score(const Eigen::Ref<const Vector>& x,
                                     const Eigen::Ref<const Vector>& target);

FeatureRanking rank_features(const std::map<FeatureId, double>& scores,
                             RankMethod method);

/// Table-shaped CSV: one row per method, features in descending importance.
std::string rankings_to_csv(const std::vector<FeatureRanking>& rankings);

std::string correlation_matrix_to_csv(const CorrelationMatrix& matrix);

}  // namespace softsense
