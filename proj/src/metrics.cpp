#include "softsense/metrics.hpp"

#include <cmath>
#include <string>

namespace softsense {

namespace {

void check_pair(const Eigen::Ref<const Vector>& a,
                const Eigen::Ref<const Vector>& b) {
  if (a.size() != b.size()) {
    throw DataError("vector length mismatch: " + std::to_string(a.size()) +
                    " vs " + std::to_string(b.size()));
  }
  if (a.size() == 0) throw DataError("empty vectors");
}

}  // namespace

double rmse(const Eigen::Ref<const Vector>& y_true,
            const Eigen::Ref<const Vector>& y_pred) {
  check_pair(y_true, y_pred);
  const double mse =
      (y_true - y_pred).squaredNorm() / static_cast<double>(y_true.size());
  return std::sqrt(mse);
}

double mae(const Eigen::Ref<const Vector>& y_true,
           const Eigen::Ref<const Vector>& y_pred) {
  check_pair(y_true, y_pred);
  return (y_true - y_pred).cwiseAbs().sum() / static_cast<double>(y_true.size());
}

std::optional<double> pearson(const Eigen::Ref<const Vector>& x,
                              const Eigen::Ref<const Vector>& y) {
  check_pair(x, y);
  if (x.size() < 2) throw DataError("pearson needs at least 2 points");
  const double n = static_cast<double>(x.size());
  const Vector xc = x.array() - x.mean();
  const Vector yc = y.array() - y.mean();
  const double sx = std::sqrt(xc.squaredNorm() / (n - 1.0));
  const double sy = std::sqrt(yc.squaredNorm() / (n - 1.0));
  if (sx == 0.0 || sy == 0.0) return std::nullopt;
  const double cov = xc.dot(yc) / (n - 1.0);
  return cov / (sx * sy);
}

MetricsRow evaluate_predictions(const Eigen::Ref<const Vector>& y_true,
                                const Eigen::Ref<const Vector>& y_pred) {
  MetricsRow row;
  row.rmse = rmse(y_true, y_pred);
  row.mae = mae(y_true, y_pred);
  row.corr = (y_true.size() >= 2) ? pearson(y_true, y_pred) : std::nullopt;
  row.n = y_true.size();
  return row;
}

}  // namespace softsense
