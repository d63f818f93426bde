#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "softsense/common.hpp"
#include "softsense/dataset.hpp"

namespace softsense {

/// Shared latent factor between two features; loading is the resulting
/// pairwise Pearson correlation.
struct CrossCorrelation {
  FeatureId a;
  FeatureId b;
  double loading;
};

/// Synthetic sulphonation-like data: unit-variance Gaussian features with
/// configurable cross-correlations, a linear target with one ReLU-style
/// interaction, Gaussian noise, and a handful of flagged spike outliers.
struct GeneratorConfig {
  Index n_rows = 14252;
  // NT equation weights, canonical order A..H.
  std::array<double, kFeatureCount> coefficients = {
      -0.9,   // A
      +1.2,   // B
      0.0,    // C
      +0.1,   // D
      +0.08,  // E
      +0.05,  // F
      +0.15,  // G
      -0.7,   // H
  };
  std::vector<CrossCorrelation> cross_correlations = {
      {FeatureId::A, FeatureId::H, 0.6},
      {FeatureId::B, FeatureId::D, 0.4},
  };
  double interaction = 0.8;  // weight of the max(0, A) * B term
  double noise_sd = 0.2;
  Index outlier_count = 23;
  std::uint64_t seed = 0;
};

/// Deterministic per seed: identical config gives a bit-identical Dataset.
/// Outlier rows get exactly one feature cell replaced by a +-8 sd spike
/// (the target is computed from the uncorrupted value) and flag = true.
Dataset generate(const GeneratorConfig& config);

}  // namespace softsense
