#include "softsense/filters.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "softsense/metrics.hpp"

namespace softsense {

const std::string& rank_method_name(RankMethod method) {
  static const std::string names[] = {"chi_squared", "gain_ratio", "correlation",
                                      "rf_permutation"};
  return names[static_cast<size_t>(method)];
}

std::vector<FeatureId> FeatureRanking::feature_order() const {
  std::vector<FeatureId> order;
  order.reserve(entries.size());
  for (const auto& [feature, score] : entries) order.push_back(feature);
  return order;
}

std::vector<FeatureId> FeatureRanking::top(size_t k) const {
  std::vector<FeatureId> order = feature_order();
  if (order.size() > k) order.resize(k);
  return order;
}

CorrelationMatrix correlation_matrix(const Dataset& data) {
  if (data.n_rows() < 2) {
    throw DataError("correlation_matrix needs at least 2 rows");
  }
  const int d = kFeatureCount + 1;
  CorrelationMatrix out;
  out.values = Matrix::Identity(d, d);
  for (int j = 0; j < kFeatureCount; ++j) {
    out.labels.push_back(feature_code(static_cast<FeatureId>(j)));
  }
  out.labels.emplace_back("NT");

  auto column = [&](int j) {
    return (j < kFeatureCount) ? Eigen::Ref<const Vector>(data.features.col(j))
                               : Eigen::Ref<const Vector>(data.target);
  };
  std::vector<bool> degenerate(static_cast<size_t>(d), false);
  for (int i = 0; i < d; ++i) {
    for (int j = i + 1; j < d; ++j) {
      const std::optional<double> r = pearson(column(i), column(j));
      if (r) {
        out.values(i, j) = out.values(j, i) = *r;
      } else {
        out.values(i, j) = out.values(j, i) = 0.0;
        const Vector ci = column(i);
        if ((ci.array() == ci[0]).all()) degenerate[static_cast<size_t>(i)] = true;
        const Vector cj = column(j);
        if ((cj.array() == cj[0]).all()) degenerate[static_cast<size_t>(j)] = true;
      }
    }
  }
  for (int j = 0; j < d; ++j) {
    if (degenerate[static_cast<size_t>(j)]) {
      out.degenerate.push_back(out.labels[static_cast<size_t>(j)]);
    }
  }
  return out;
}

BinLabels discretize_equal_frequency(const Eigen::Ref<const Vector>& values, int k) {
  if (k < 2) throw DataError("discretize: need k >= 2 bins");
  const Index n = values.size();
  if (n < k) {
    throw DataError("discretize: need at least k values, got " + std::to_string(n));
  }
  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end());
  std::vector<double> boundaries;  // cut ranks floor(i*n/k), i = 1..k-1
  boundaries.reserve(static_cast<size_t>(k - 1));
  for (int i = 1; i < k; ++i) {
    const auto rank = static_cast<size_t>((static_cast<long long>(i) * n) / k);
    boundaries.push_back(sorted[rank - 1]);
  }

  BinLabels out;
  out.k = k;
  out.labels.resize(static_cast<size_t>(n));
  std::vector<bool> occupied(static_cast<size_t>(k), false);
  for (Index i = 0; i < n; ++i) {
    int bin = 0;
    for (double b : boundaries) {
      if (b < values[i]) ++bin;  // equal-to-boundary stays in the lower bin
    }
    out.labels[static_cast<size_t>(i)] = bin;
    occupied[static_cast<size_t>(bin)] = true;
  }
  int filled = 0;
  for (bool b : occupied) filled += b ? 1 : 0;
  out.degenerate = filled < 2;
  return out;
}

namespace {

/// Joint counts of two label vectors as a k x k table.
Matrix contingency(const BinLabels& a, const BinLabels& b) {
  Matrix table = Matrix::Zero(a.k, b.k);
  for (size_t i = 0; i < a.labels.size(); ++i) {
    table(a.labels[i], b.labels[i]) += 1.0;
  }
  return table;
}

double entropy_bits(const Vector& counts, double total) {
  double h = 0.0;
  for (Index i = 0; i < counts.size(); ++i) {
    if (counts[i] > 0.0) {
      const double p = counts[i] / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

}  // namespace

FilterScore chi_squared_score(const Eigen::Ref<const Vector>& x,
                              const Eigen::Ref<const Vector>& target, int k) {
  if (x.size() != target.size()) throw DataError("chi_squared: length mismatch");
  const BinLabels bx = discretize_equal_frequency(x, k);
  const BinLabels bt = discretize_equal_frequency(target, k);
  if (bx.degenerate || bt.degenerate) return {0.0, true};
  const Matrix table = contingency(bx, bt);
  const double n = table.sum();
  const Vector row_sum = table.rowwise().sum();
  const Vector col_sum = table.colwise().sum();
  double stat = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      const double expected = row_sum[i] * col_sum[j] / n;
      if (expected > 0.0) {
        const double d = table(i, j) - expected;
        stat += d * d / expected;
      }
    }
  }
  return {stat, false};
}

FilterScore gain_ratio_score(const Eigen::Ref<const Vector>& x,
                             const Eigen::Ref<const Vector>& target, int k) {
  if (x.size() != target.size()) throw DataError("gain_ratio: length mismatch");
  const BinLabels bx = discretize_equal_frequency(x, k);
  const BinLabels bt = discretize_equal_frequency(target, k);
  if (bx.degenerate || bt.degenerate) return {0.0, true};
  const Matrix table = contingency(bx, bt);
  const double n = table.sum();
  const double h_x = entropy_bits(table.rowwise().sum(), n);
  if (h_x == 0.0) return {0.0, true};
  const double h_t = entropy_bits(table.colwise().sum(), n);
  double h_joint = 0.0;
  for (int i = 0; i < k; ++i) {
    for (int j = 0; j < k; ++j) {
      if (table(i, j) > 0.0) {
        const double p = table(i, j) / n;
        h_joint -= p * std::log2(p);
      }
    }
  }
  const double info_gain = h_x + h_t - h_joint;
  return {info_gain / h_x, false};
}

FilterScore correlation_filter_score(const Eigen::Ref<const Vector>& x,
                                     const Eigen::Ref<const Vector>& target) {
  const std::optional<double> r = pearson(x, target);
  if (!r) return {0.0, true};
  return {std::abs(*r), false};
}

FeatureRanking rank_features(const std::map<FeatureId, double>& scores,
                             RankMethod method) {
  if (scores.empty()) throw DataError("rank_features: empty score map");
  FeatureRanking ranking;
  ranking.method = method;
  ranking.entries.assign(scores.begin(), scores.end());
  std::stable_sort(ranking.entries.begin(), ranking.entries.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  return ranking;
}

std::string rankings_to_csv(const std::vector<FeatureRanking>& rankings) {
  std::string out = "method,importance\n";
  for (const auto& ranking : rankings) {
    out += rank_method_name(ranking.method) + ",\"" +
           join_feature_codes(ranking.feature_order()) + "\"\n";
  }
  return out;
}

std::string correlation_matrix_to_csv(const CorrelationMatrix& matrix) {
  std::string out;
  for (const auto& label : matrix.labels) out += "," + label;
  out += "\n";
  char buf[32];
  for (Index i = 0; i < matrix.values.rows(); ++i) {
    out += matrix.labels[static_cast<size_t>(i)];
    for (Index j = 0; j < matrix.values.cols(); ++j) {
      std::snprintf(buf, sizeof(buf), ",%.5f", matrix.values(i, j));
      out += buf;
    }
    out += "\n";
  }
  return out;
}

}  // namespace softsense
