#pragma once

#include <vector>

#include "softsense/common.hpp"

namespace softsense {

/// Ordinary least squares fit with intercept.
struct LinearModel {
  double intercept = 0.0;
  Vector coefficients;              // aligned with features
  std::vector<FeatureId> features;  // subset the model was fitted on
  Index training_n = 0;
};

/// Least-squares fit of target on X columns `features` plus an intercept,
/// solved by Householder QR. A column whose norm after orthogonalization
/// against the columns before it falls below 1e-10 of its original norm is
/// declared collinear; the error names all such columns.
LinearModel fit_ols(const Matrix& X, const Vector& y,
                    const std::vector<FeatureId>& features);

Vector predict_linear(const LinearModel& model, const Matrix& X);

double predict_linear(const LinearModel& model,
                      const Eigen::Ref<const RowVector>& x);

}  // namespace softsense
