#include "softsense/linreg.hpp"

#include <string>

namespace softsense {

namespace {

constexpr double kRankTolerance = 1e-10;

void check_columns(const Matrix& X, const std::vector<FeatureId>& features,
                   const char* what) {
  for (FeatureId id : features) {
    if (feature_index(id) >= X.cols()) {
      throw ModelError(std::string(what) + ": missing feature column " +
                       feature_code(id));
    }
  }
}

/// Modified Gram-Schmidt pass that reports columns collinear with the ones
/// before them (intercept column first, then the features in given order).
std::vector<std::string> collinear_columns(const Matrix& design,
                                           const std::vector<FeatureId>& features) {
  Matrix q = design;
  std::vector<std::string> collinear;
  std::vector<Index> kept;
  for (Index j = 0; j < q.cols(); ++j) {
    const double original_norm = design.col(j).norm();
    for (Index i : kept) {
      q.col(j) -= q.col(i).dot(q.col(j)) * q.col(i);
    }
    const double residual_norm = q.col(j).norm();
    if (residual_norm <= kRankTolerance * original_norm) {
      collinear.push_back(j == 0 ? std::string("intercept")
                                 : feature_code(features[static_cast<size_t>(j - 1)]));
    } else {
      q.col(j) /= residual_norm;
      kept.push_back(j);
    }
  }
  return collinear;
}

}  // namespace

LinearModel fit_ols(const Matrix& X, const Vector& y,
                    const std::vector<FeatureId>& features) {
  if (X.rows() != y.size()) {
    throw DataError("fit_ols: X and y row counts differ");
  }
  check_columns(X, features, "fit_ols");
  const Index n = X.rows();
  const Index p = static_cast<Index>(features.size());
  if (n <= p) {
    throw ModelError("fit_ols: need more rows than features (" +
                     std::to_string(n) + " rows, " + std::to_string(p) +
                     " features)");
  }

  Matrix design(n, p + 1);
  design.col(0).setOnes();
  for (Index j = 0; j < p; ++j) {
    design.col(j + 1) = X.col(feature_index(features[static_cast<size_t>(j)]));
  }

  const std::vector<std::string> collinear = collinear_columns(design, features);
  if (!collinear.empty()) {
    std::string msg = "fit_ols: collinear columns:";
    for (const auto& name : collinear) msg += " " + name;
    throw ModelError(msg);
  }

  const Vector beta = design.householderQr().solve(y);

  LinearModel model;
  model.intercept = beta[0];
  model.coefficients = beta.tail(p);
  model.features = features;
  model.training_n = n;
  return model;
}

Vector predict_linear(const LinearModel& model, const Matrix& X) {
  check_columns(X, model.features, "predict_linear");
  Vector out = Vector::Constant(X.rows(), model.intercept);
  for (size_t j = 0; j < model.features.size(); ++j) {
    out += model.coefficients[static_cast<Index>(j)] *
           X.col(feature_index(model.features[j]));
  }
  return out;
}

double predict_linear(const LinearModel& model,
                      const Eigen::Ref<const RowVector>& x) {
  for (FeatureId id : model.features) {
    if (feature_index(id) >= x.size()) {
      throw ModelError("predict_linear: missing feature column " +
                       feature_code(id));
    }
  }
  double out = model.intercept;
  for (size_t j = 0; j < model.features.size(); ++j) {
    out += model.coefficients[static_cast<Index>(j)] *
           x[feature_index(model.features[j])];
  }
  return out;
}

}  // namespace softsense
