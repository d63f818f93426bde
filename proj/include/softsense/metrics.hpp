#pragma once

#include <optional>

#include "softsense/common.hpp"

namespace softsense {

/// One evaluation row: RMSE, MAE and Pearson correlation. corr is empty
/// when either vector has zero variance.
struct MetricsRow {
  double rmse = 0.0;
  double mae = 0.0;
  std::optional<double> corr;
  Index n = 0;
};

double rmse(const Eigen::Ref<const Vector>& y_true,
            const Eigen::Ref<const Vector>& y_pred);

double mae(const Eigen::Ref<const Vector>& y_true,
           const Eigen::Ref<const Vector>& y_pred);

/// Sample Pearson coefficient (n-1 convention); empty if either sd is zero.
std::optional<double> pearson(const Eigen::Ref<const Vector>& x,
                              const Eigen::Ref<const Vector>& y);

MetricsRow evaluate_predictions(const Eigen::Ref<const Vector>& y_true,
                                const Eigen::Ref<const Vector>& y_pred);

}  // namespace softsense
