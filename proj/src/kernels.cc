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

#include "privgp/kernels.h"

#include <cmath>
#include <memory>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privgp/status.h"

namespace privgp {
namespace {

absl::Status CheckDimension(const KernelSpec& spec, const Point& x) {
  if (x.size() != spec.dimension()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("point has dimension ", x.size(),
                                  ", kernel expects ", spec.dimension()));
  }
  if (!x.allFinite()) {
    return MakeError(ErrorKind::kInvalidInput, "point has non-finite entries");
  }
  return absl::OkStatus();
}

absl::Status CheckPoints(const KernelSpec& spec, const PointList& points) {
  for (const Point& p : points) {
    PRIVGP_RETURN_IF_ERROR(CheckDimension(spec, p));
  }
  return absl::OkStatus();
}

bool SameBase(const KernelSpec& k, const KernelSpec& h) {
  return h.family() == KernelFamily::kScaledCopy && h.base() != nullptr &&
         *h.base() == k;
}

}  // namespace

absl::StatusOr<KernelSpec> KernelSpec::SquaredExponential(double amplitude,
                                                          double theta,
                                                          int dimension) {
  if (!std::isfinite(amplitude) || amplitude < 0.0) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("amplitude must be >= 0, got ", amplitude));
  }
  if (!std::isfinite(theta) || theta <= 0.0) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("theta must be > 0, got ", theta));
  }
  if (dimension < 1) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("dimension must be >= 1, got ", dimension));
  }
  KernelSpec spec;
  spec.family_ = KernelFamily::kSquaredExponential;
  spec.amplitude_ = amplitude;
  spec.theta_ = theta;
  spec.dimension_ = dimension;
  return spec;
}

absl::StatusOr<KernelSpec> KernelSpec::ScaledCopy(double alpha,
                                                  const KernelSpec& base) {
  if (!std::isfinite(alpha) || alpha < 0.0 || alpha >= 1.0) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("scaled copy needs 0 <= alpha < 1, got ",
                                  alpha));
  }
  KernelSpec spec;
  spec.family_ = KernelFamily::kScaledCopy;
  spec.alpha_ = alpha;
  spec.dimension_ = base.dimension();
  spec.base_ = std::make_shared<const KernelSpec>(base);
  return spec;
}

double KernelSpec::amplitude() const {
  if (family_ == KernelFamily::kScaledCopy) return alpha_ * base_->amplitude();
  return amplitude_;
}

double KernelSpec::theta() const {
  if (family_ == KernelFamily::kScaledCopy) return base_->theta();
  return theta_;
}

double KernelSpec::Profile(double lag_norm) const {
  if (family_ == KernelFamily::kScaledCopy) {
    return alpha_ * base_->Profile(lag_norm);
  }
  return amplitude_ * std::exp(-theta_ * lag_norm * lag_norm);
}

double KernelSpec::operator()(const Point& x, const Point& y) const {
  if (family_ == KernelFamily::kScaledCopy) return alpha_ * (*base_)(x, y);
  return amplitude_ * std::exp(-theta_ * (x - y).squaredNorm());
}

double KernelSpec::SpectralDensity(double omega_norm) const {
  if (family_ == KernelFamily::kScaledCopy) {
    return alpha_ * base_->SpectralDensity(omega_norm);
  }
  return amplitude_ * std::pow(2.0 * theta_, -0.5 * dimension_) *
         std::exp(-omega_norm * omega_norm / (4.0 * theta_));
}

bool operator==(const KernelSpec& a, const KernelSpec& b) {
  if (a.family_ != b.family_ || a.dimension_ != b.dimension_) return false;
  if (a.family_ == KernelFamily::kScaledCopy) {
    return a.alpha_ == b.alpha_ && *a.base_ == *b.base_;
  }
  return a.amplitude_ == b.amplitude_ && a.theta_ == b.theta_;
}

absl::StatusOr<double> Eval(const KernelSpec& spec, const Point& x,
                            const Point& y) {
  PRIVGP_RETURN_IF_ERROR(CheckDimension(spec, x));
  PRIVGP_RETURN_IF_ERROR(CheckDimension(spec, y));
  return spec(x, y);
}

absl::StatusOr<Eigen::MatrixXd> Gram(const KernelSpec& spec,
                                     const PointList& p, const PointList& q) {
  PRIVGP_RETURN_IF_ERROR(CheckPoints(spec, p));
  PRIVGP_RETURN_IF_ERROR(CheckPoints(spec, q));
  Eigen::MatrixXd out(p.size(), q.size());
  for (size_t i = 0; i < p.size(); ++i) {
    for (size_t j = 0; j < q.size(); ++j) out(i, j) = spec(p[i], q[j]);
  }
  return out;
}

absl::StatusOr<SymMatrix> Gram(const KernelSpec& spec, const PointList& p) {
  PRIVGP_RETURN_IF_ERROR(CheckPoints(spec, p));
  const int n = static_cast<int>(p.size());
  Eigen::MatrixXd out(n, n);
  for (int i = 0; i < n; ++i) {
    out(i, i) = spec(p[i], p[i]);
    for (int j = i + 1; j < n; ++j) out(i, j) = out(j, i) = spec(p[i], p[j]);
  }
  return SymMatrix::Symmetrize(out);
}

absl::StatusOr<double> Fourier(const KernelSpec& spec, const Point& omega) {
  PRIVGP_RETURN_IF_ERROR(CheckDimension(spec, omega));
  return spec.SpectralDensity(omega.norm());
}

Validity ValidatePair(const KernelSpec& k, const KernelSpec& h) {
  if (k.dimension() != h.dimension()) {
    return {false, absl::StrCat("dimension mismatch: K has d=", k.dimension(),
                                ", H has d=", h.dimension())};
  }
  if (SameBase(k, h)) {
    if (h.alpha() >= 0.0 && h.alpha() < 1.0) return {true, ""};
    return {false, absl::StrCat("scale alpha=", h.alpha(), " not in [0, 1)")};
  }
  const double base_amplitude = k.amplitude();
  if (base_amplitude <= 0.0) {
    return {false, "base kernel has zero amplitude"};
  }
  const double c = h.amplitude() / base_amplitude;
  const double theta0 = k.theta();
  const double theta = h.theta();
  const int d = k.dimension();
  if (c >= 1.0) {
    return {false,
            absl::StrFormat("relative amplitude c=%g must be < 1 (c=1 makes "
                            "K - H singular)",
                            c)};
  }
  if (theta > theta0) {
    return {false,
            absl::StrFormat("theta=%g exceeds theta0=%g", theta, theta0)};
  }
  const double lower = std::pow(c, 2.0 / d) * theta0;
  if (theta < lower) {
    return {false, absl::StrFormat("theta=%g below c^{2/d} theta0=%g", theta,
                                   lower)};
  }
  return {true, ""};
}

bool FourierDominates(const KernelSpec& k, const KernelSpec& h,
                      double omega_max, int samples) {
  if (samples < 2 || !(omega_max > 0.0)) return false;
  bool strict_somewhere = false;
  for (int i = 0; i < samples; ++i) {
    const double omega = omega_max * i / (samples - 1);
    const double gap = k.SpectralDensity(omega) - h.SpectralDensity(omega);
    if (gap < 0.0) return false;
    if (gap > 0.0) strict_somewhere = true;
  }
  return strict_somewhere;
}

}  // namespace privgp
