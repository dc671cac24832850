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

#ifndef PRIVGP_KERNELS_H_
#define PRIVGP_KERNELS_H_

#include <memory>
#include <string>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "privgp/linalg.h"

namespace privgp {

enum class KernelFamily { kSquaredExponential, kScaledCopy };

// A stationary covariance function. Two families ship:
//   kSquaredExponential: K(x, y) = c * exp(-theta * ||x - y||^2)
//   kScaledCopy:         K(x, y) = alpha * base(x, y), 0 <= alpha < 1
// KernelSpec is an immutable value; copies share the wrapped base.
class KernelSpec {
 public:
  // Unit squared-exponential kernel on the real line.
  KernelSpec() = default;

  static absl::StatusOr<KernelSpec> SquaredExponential(double amplitude,
                                                       double theta,
                                                       int dimension);
  static absl::StatusOr<KernelSpec> ScaledCopy(double alpha,
                                               const KernelSpec& base);

  KernelFamily family() const { return family_; }
  int dimension() const { return dimension_; }
  // Multiplier on the base kernel (ScaledCopy only; 1 otherwise).
  double alpha() const { return alpha_; }
  const KernelSpec* base() const { return base_.get(); }

  // Effective squared-exponential parameters after unwrapping scaled copies.
  double amplitude() const;
  double theta() const;

  // Unchecked evaluation; x and y must have dimension().
  double operator()(const Point& x, const Point& y) const;
  // Stationary profile R(r) as a function of the lag norm.
  double Profile(double lag_norm) const;
  // Fourier transform of the profile as a function of ||omega||, with the
  // convention f~(w) = (2 pi)^{-d/2} int f(x) exp(-i w^T x) dx.
  double SpectralDensity(double omega_norm) const;

  friend bool operator==(const KernelSpec& a, const KernelSpec& b);

 private:
  KernelFamily family_ = KernelFamily::kSquaredExponential;
  double amplitude_ = 1.0;
  double theta_ = 1.0;
  int dimension_ = 1;
  double alpha_ = 1.0;
  std::shared_ptr<const KernelSpec> base_;
};

// Checked single evaluation.
absl::StatusOr<double> Eval(const KernelSpec& spec, const Point& x,
                            const Point& y);

// K_{P,Q} with (i, j) entry K(p_i, q_j).
absl::StatusOr<Eigen::MatrixXd> Gram(const KernelSpec& spec,
                                     const PointList& p, const PointList& q);
absl::StatusOr<SymMatrix> Gram(const KernelSpec& spec, const PointList& p);

absl::StatusOr<double> Fourier(const KernelSpec& spec, const Point& omega);

struct Validity {
  bool valid = false;
  std::string reason;
};

// Decides whether K - H is positive definite for a base kernel K and a
// privacy kernel H, using the closed-form Gaussian region
//   0 <= c < 1,  c^{2/d} theta0 <= theta <= theta0
// where c is H's amplitude relative to K's. A scaled copy alpha * K is valid
// iff 0 <= alpha < 1.
Validity ValidatePair(const KernelSpec& k, const KernelSpec& h);

// Sampled sufficient check that the spectral density of K dominates that of
// H on a radial grid of `samples` points over [0, omega_max], with strict
// domination somewhere. Passing does not prove validity between samples;
// intended for kernel families without a closed-form region.
bool FourierDominates(const KernelSpec& k, const KernelSpec& h,
                      double omega_max, int samples);

}  // namespace privgp

#endif  // PRIVGP_KERNELS_H_
