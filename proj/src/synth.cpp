#include "softsense/synth.hpp"

#include <cmath>
#include <string>

#include "softsense/rng.hpp"

namespace softsense {

namespace {

void validate(const GeneratorConfig& config) {
  if (config.n_rows < 1) throw DataError("generator: n_rows must be >= 1");
  if (config.noise_sd < 0.0) throw DataError("generator: noise_sd must be >= 0");
  if (config.outlier_count < 0 || config.outlier_count >= config.n_rows) {
    throw DataError("generator: outlier_count must be in [0, n_rows)");
  }
  std::array<bool, kFeatureCount> used{};
  for (const auto& cc : config.cross_correlations) {
    if (cc.loading < 0.0 || cc.loading >= 1.0) {
      throw DataError("generator: cross-correlation loading must be in [0, 1)");
    }
    if (cc.a == cc.b) {
      throw DataError("generator: cross-correlation pair must be distinct");
    }
    for (FeatureId id : {cc.a, cc.b}) {
      auto& slot = used[static_cast<size_t>(feature_index(id))];
      if (slot) {
        throw DataError("generator: feature " + feature_code(id) +
                        " appears in more than one cross-correlation");
      }
      slot = true;
    }
  }
}

Vector normal_vector(Rng& rng, Index n) {
  Vector v(n);
  for (Index i = 0; i < n; ++i) v[i] = rng.normal();
  return v;
}

}  // namespace

Dataset generate(const GeneratorConfig& config) {
  validate(config);
  const Index n = config.n_rows;

  // Features: unit-variance Gaussians; paired features share a latent factor
  // with per-variable loading sqrt(rho), which yields corr(a, b) = rho.
  Rng feature_rng(derive_seed(config.seed, 1));
  std::array<int, kFeatureCount> pair_of;  // index into cross_correlations, -1 none
  pair_of.fill(-1);
  std::vector<Vector> factors;
  factors.reserve(config.cross_correlations.size());
  for (size_t p = 0; p < config.cross_correlations.size(); ++p) {
    const auto& cc = config.cross_correlations[p];
    pair_of[static_cast<size_t>(feature_index(cc.a))] = static_cast<int>(p);
    pair_of[static_cast<size_t>(feature_index(cc.b))] = static_cast<int>(p);
    factors.push_back(normal_vector(feature_rng, n));
  }

  Dataset data;
  data.features.resize(n, kFeatureCount);
  for (int j = 0; j < kFeatureCount; ++j) {
    const Vector eps = normal_vector(feature_rng, n);
    const int p = pair_of[static_cast<size_t>(j)];
    if (p < 0) {
      data.features.col(j) = eps;
    } else {
      const double rho = config.cross_correlations[static_cast<size_t>(p)].loading;
      data.features.col(j) = std::sqrt(rho) * factors[static_cast<size_t>(p)] +
                             std::sqrt(1.0 - rho) * eps;
    }
  }

  // Target from the uncorrupted features.
  Rng noise_rng(derive_seed(config.seed, 2));
  Vector coef(kFeatureCount);
  for (int j = 0; j < kFeatureCount; ++j) {
    coef[j] = config.coefficients[static_cast<size_t>(j)];
  }
  data.target = data.features * coef;
  if (config.interaction != 0.0) {
    const auto a = data.features.col(feature_index(FeatureId::A)).array();
    const auto b = data.features.col(feature_index(FeatureId::B)).array();
    data.target.array() += config.interaction * a.max(0.0) * b;
  }
  if (config.noise_sd > 0.0) {
    data.target += config.noise_sd * normal_vector(noise_rng, n);
  }

  // Spike outliers: one corrupted feature cell per flagged row.
  data.outlier_flag.assign(static_cast<size_t>(n), 0);
  Rng outlier_rng(derive_seed(config.seed, 3));
  const std::vector<int> spiked = outlier_rng.sample_without_replacement(
      static_cast<int>(n), static_cast<int>(config.outlier_count));
  for (int row : spiked) {
    const auto j = static_cast<int>(outlier_rng.uniform_index(kFeatureCount));
    const double sign = (outlier_rng.next() & 1u) ? 1.0 : -1.0;
    data.features(row, j) = sign * 8.0;
    data.outlier_flag[static_cast<size_t>(row)] = 1;
  }
  return data;
}

}  // namespace softsense
