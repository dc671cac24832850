//
// Copyright 2026 The PrivGP Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "privgp/gp.h"

#include <cmath>
#include <numbers>

#include "absl/strings/str_cat.h"
#include "privgp/status.h"

namespace privgp {

absl::StatusOr<IntrinsicNoise> IntrinsicNoise::Scalar(double variance) {
  if (!std::isfinite(variance) || variance < 0.0) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("noise variance must be >= 0, got ", variance));
  }
  IntrinsicNoise noise;
  noise.value_ = variance;
  return noise;
}

absl::StatusOr<IntrinsicNoise> IntrinsicNoise::Diagonal(
    const Eigen::VectorXd& variances) {
  if (!variances.allFinite() || (variances.array() < 0.0).any()) {
    return MakeError(ErrorKind::kInvalidInput,
                     "noise variances must be finite and >= 0");
  }
  IntrinsicNoise noise;
  noise.value_ = variances;
  return noise;
}

absl::StatusOr<IntrinsicNoise> IntrinsicNoise::Full(
    const SymMatrix& covariance) {
  PRIVGP_ASSIGN_OR_RETURN(double min_eigenvalue, MinEigenvalue(covariance));
  if (min_eigenvalue < -1e-10 * std::max(1.0, covariance.MaxAbs())) {
    return MakeError(ErrorKind::kNotPsd,
                     absl::StrCat("noise covariance has eigenvalue ",
                                  min_eigenvalue));
  }
  IntrinsicNoise noise;
  noise.value_ = covariance;
  return noise;
}

IntrinsicNoise::Kind IntrinsicNoise::kind() const {
  switch (value_.index()) {
    case 0:
      return Kind::kScalar;
    case 1:
      return Kind::kDiagonal;
    default:
      return Kind::kFull;
  }
}

absl::StatusOr<SymMatrix> IntrinsicNoise::Materialize(int n) const {
  switch (kind()) {
    case Kind::kScalar:
      return SymMatrix::Identity(n) * scalar();
    case Kind::kDiagonal:
      if (diagonal().size() != n) {
        return MakeError(ErrorKind::kDimensionMismatch,
                         absl::StrCat("noise has ", diagonal().size(),
                                      " variances for ", n, " points"));
      }
      return SymMatrix::Diagonal(diagonal());
    case Kind::kFull:
      if (full().order() != n) {
        return MakeError(ErrorKind::kDimensionMismatch,
                         absl::StrCat("noise covariance has order ",
                                      full().order(), " for ", n, " points"));
      }
      return full();
  }
  return MakeError(ErrorKind::kInvalidInput, "unknown noise kind");
}

IntrinsicNoise IntrinsicNoise::Scaled(double factor) const {
  IntrinsicNoise out;
  switch (kind()) {
    case Kind::kScalar:
      out.value_ = scalar() * factor;
      break;
    case Kind::kDiagonal:
      out.value_ = Eigen::VectorXd(diagonal() * factor);
      break;
    case Kind::kFull:
      out.value_ = full() * factor;
      break;
  }
  return out;
}

bool operator==(const IntrinsicNoise& a, const IntrinsicNoise& b) {
  if (a.kind() != b.kind()) return false;
  switch (a.kind()) {
    case IntrinsicNoise::Kind::kScalar:
      return a.scalar() == b.scalar();
    case IntrinsicNoise::Kind::kDiagonal:
      return a.diagonal().size() == b.diagonal().size() &&
             a.diagonal() == b.diagonal();
    case IntrinsicNoise::Kind::kFull:
      return a.full() == b.full();
  }
  return false;
}

absl::Status ValidateDataset(const Dataset& data) {
  if (data.x.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "dataset is empty");
  }
  if (static_cast<int>(data.y.size()) != data.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("dataset has ", data.size(), " inputs and ",
                                  data.y.size(), " responses"));
  }
  const int d = data.dimension();
  for (const Point& p : data.x) {
    if (p.size() != d || d == 0) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       "dataset inputs have inconsistent dimension");
    }
    if (!p.allFinite()) {
      return MakeError(ErrorKind::kInvalidInput, "non-finite input point");
    }
  }
  if (!data.y.allFinite()) {
    return MakeError(ErrorKind::kInvalidInput, "non-finite response");
  }
  return absl::OkStatus();
}

namespace {

// K_{X,X} + V (+ Sigma).
absl::StatusOr<SymMatrix> TotalCovariance(const GpModel& model,
                                          const Dataset& data,
                                          const SymMatrix* extra_noise) {
  PRIVGP_RETURN_IF_ERROR(ValidateDataset(data));
  if (data.dimension() != model.kernel.dimension()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("data dimension ", data.dimension(),
                                  " vs kernel dimension ",
                                  model.kernel.dimension()));
  }
  const int n = data.size();
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix total, Gram(model.kernel, data.x));
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix v, model.noise.Materialize(n));
  total += v;
  if (extra_noise != nullptr) {
    if (extra_noise->order() != n) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat("synthetic noise has order ",
                                    extra_noise->order(), " for ", n,
                                    " points"));
    }
    total += *extra_noise;
  }
  return total;
}

}  // namespace

absl::StatusOr<PredictiveDistribution> Posterior(
    const GpModel& model, const Dataset& data, const SymMatrix* extra_noise,
    const PointList& query) {
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix total,
                          TotalCovariance(model, data, extra_noise));
  PRIVGP_ASSIGN_OR_RETURN(SpdFactor factor, SpdFactor::Compute(total));
  PRIVGP_ASSIGN_OR_RETURN(Eigen::MatrixXd k_xq, Gram(model.kernel, data.x, query));
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix k_qq, Gram(model.kernel, query));

  const Eigen::VectorXd residual =
      data.y - Eigen::VectorXd::Constant(data.size(), model.mean);
  const Eigen::VectorXd weights = factor.Solve(residual);
  const Eigen::MatrixXd whitened = factor.SolveLower(k_xq);

  PredictiveDistribution out;
  out.mean = Eigen::VectorXd::Constant(static_cast<int>(query.size()),
                                       model.mean) +
             k_xq.transpose() * weights;
  out.covariance = SymMatrix::Symmetrize(k_qq.dense() -
                                         whitened.transpose() * whitened);
  return out;
}

absl::StatusOr<double> LogMarginalLikelihood(const GpModel& model,
                                             const Dataset& data) {
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix total, TotalCovariance(model, data, nullptr));
  PRIVGP_ASSIGN_OR_RETURN(SpdFactor factor, SpdFactor::Compute(total));
  const Eigen::VectorXd residual =
      data.y - Eigen::VectorXd::Constant(data.size(), model.mean);
  const Eigen::VectorXd whitened = factor.SolveLower(residual);
  const double n = data.size();
  return -0.5 * whitened.squaredNorm() - 0.5 * factor.LogDeterminant() -
         0.5 * n * std::log(2.0 * std::numbers::pi);
}

absl::StatusOr<ConstantMeanFit> FitConstantMeanAndVariance(
    const PointList& x, const Eigen::VectorXd& y,
    const KernelSpec& correlation, const SymMatrix* noise_shape) {
  Dataset data{x, y};
  PRIVGP_RETURN_IF_ERROR(ValidateDataset(data));
  const int n = data.size();
  if (n < 2) {
    return MakeError(ErrorKind::kInvalidInput,
                     "fitting mean and variance needs at least 2 points");
  }
  if (correlation.amplitude() != 1.0) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("correlation must have unit amplitude, got ",
                                  correlation.amplitude()));
  }
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix r, Gram(correlation, x));
  if (noise_shape != nullptr) {
    if (noise_shape->order() != n) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       "noise shape order does not match the data");
    }
    r += *noise_shape;
  }
  PRIVGP_ASSIGN_OR_RETURN(SpdFactor factor, SpdFactor::Compute(r));

  const Eigen::VectorXd ones = Eigen::VectorXd::Ones(n);
  const Eigen::VectorXd r_inv_ones = factor.Solve(ones);
  const double mean = r_inv_ones.dot(y) / r_inv_ones.dot(ones);
  const Eigen::VectorXd residual = y - mean * ones;
  double variance = residual.dot(factor.Solve(residual)) / n;

  ConstantMeanFit fit;
  const double scale = std::max(1.0, y.cwiseAbs().maxCoeff());
  if (!(variance > 1e-28 * scale * scale)) {
    variance = 0.0;
    fit.degenerate = true;
  }
  fit.mean = mean;
  fit.variance = variance;

  absl::StatusOr<KernelSpec> kernel = KernelSpec::SquaredExponential(
      variance, correlation.theta(), correlation.dimension());
  if (!kernel.ok()) return kernel.status();
  fit.model.mean = mean;
  fit.model.kernel = *kernel;
  if (noise_shape != nullptr) {
    PRIVGP_ASSIGN_OR_RETURN(IntrinsicNoise noise,
                            IntrinsicNoise::Full(*noise_shape * variance));
    fit.model.noise = noise;
  }
  return fit;
}

}  // namespace privgp
