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

// Gaussian-process regression with a constant mean and correlated additive
// noise. With covariance K, intrinsic noise V and an optional synthetic noise
// covariance Sigma, the predictive distribution at X* is
//
//   mean = mu + K_{X*,X} (K_{X,X} + V + Sigma)^{-1} (Y - mu)
//   cov  = K_{X*,X*} - K_{X*,X} (K_{X,X} + V + Sigma)^{-1} K_{X,X*}
//
// Inversions go through a Cholesky factor; no explicit inverse is formed.

#ifndef PRIVGP_GP_H_
#define PRIVGP_GP_H_

#include <variant>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privgp/kernels.h"
#include "privgp/linalg.h"

namespace privgp {

// Intrinsic noise covariance V: a shared variance, per-point variances, or a
// full PSD matrix. The first two resolve to a matrix once n is known.
class IntrinsicNoise {
 public:
  enum class Kind { kScalar, kDiagonal, kFull };

  IntrinsicNoise() = default;
  static IntrinsicNoise None() { return IntrinsicNoise(); }
  static absl::StatusOr<IntrinsicNoise> Scalar(double variance);
  static absl::StatusOr<IntrinsicNoise> Diagonal(const Eigen::VectorXd& variances);
  static absl::StatusOr<IntrinsicNoise> Full(const SymMatrix& covariance);

  Kind kind() const;
  double scalar() const { return std::get<double>(value_); }
  const Eigen::VectorXd& diagonal() const {
    return std::get<Eigen::VectorXd>(value_);
  }
  const SymMatrix& full() const { return std::get<SymMatrix>(value_); }

  absl::StatusOr<SymMatrix> Materialize(int n) const;
  IntrinsicNoise Scaled(double factor) const;

  friend bool operator==(const IntrinsicNoise& a, const IntrinsicNoise& b);

 private:
  std::variant<double, Eigen::VectorXd, SymMatrix> value_ = 0.0;
};

struct GpModel {
  double mean = 0.0;
  KernelSpec kernel;
  IntrinsicNoise noise;
};

struct Dataset {
  PointList x;
  Eigen::VectorXd y;

  int size() const { return static_cast<int>(x.size()); }
  int dimension() const { return x.empty() ? 0 : static_cast<int>(x[0].size()); }
};

absl::Status ValidateDataset(const Dataset& data);

struct PredictiveDistribution {
  Eigen::VectorXd mean;
  SymMatrix covariance;

  Eigen::VectorXd Variances() const { return covariance.dense().diagonal(); }
};

// Posterior at `query`. When `extra_noise` is given, data.y is read as the
// obfuscated responses W and Sigma = *extra_noise enters the inverse.
absl::StatusOr<PredictiveDistribution> Posterior(
    const GpModel& model, const Dataset& data, const SymMatrix* extra_noise,
    const PointList& query);

// log N(Y; mu 1, K_{X,X} + V).
absl::StatusOr<double> LogMarginalLikelihood(const GpModel& model,
                                             const Dataset& data);

struct ConstantMeanFit {
  GpModel model;
  double mean = 0.0;
  double variance = 0.0;
  // Set when all responses coincide, in which case variance is 0.
  bool degenerate = false;
};

// Profile maximum likelihood of a constant mean and a signal variance with
// the correlation shape held fixed:
//   mu  = 1^T R^{-1} Y / 1^T R^{-1} 1
//   s^2 = (Y - mu 1)^T R^{-1} (Y - mu 1) / n
// with R = correlation Gram (+ noise_shape). `correlation` must have unit
// amplitude. When `noise_shape` is given it scales with s^2, so the fitted
// model carries V = s^2 * noise_shape.
absl::StatusOr<ConstantMeanFit> FitConstantMeanAndVariance(
    const PointList& x, const Eigen::VectorXd& y,
    const KernelSpec& correlation, const SymMatrix* noise_shape = nullptr);

}  // namespace privgp

#endif  // PRIVGP_GP_H_
