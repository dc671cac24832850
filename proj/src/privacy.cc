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

#include "privgp/privacy.h"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privgp/status.h"

namespace privgp {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

constexpr std::pair<NoiseProvenance, absl::string_view> kProvenanceNames[] = {
    {NoiseProvenance::kSingleClosedForm, "single_closed_form"},
    {NoiseProvenance::kWeakSdp, "weak_sdp"},
    {NoiseProvenance::kStrongClosedForm, "strong_closed_form"},
    {NoiseProvenance::kDiagonalSdp, "diagonal_sdp"},
    {NoiseProvenance::kKernelFinite, "kernel_finite"},
    {NoiseProvenance::kKernelGrid, "kernel_grid"},
    {NoiseProvenance::kKernelUniform, "kernel_uniform"},
};

// Condition-number ceiling for K_{S,S} - H_{S,S} before jitter engages.
constexpr double kRcondFloor = 1e-12;
constexpr double kRelativeJitter = 1e-10;

absl::Status CheckDistinct(const PointList& points, absl::string_view what) {
  for (size_t i = 0; i < points.size(); ++i) {
    for (size_t j = i + 1; j < points.size(); ++j) {
      if (points[i].size() == points[j].size() && points[i] == points[j]) {
        return MakeError(ErrorKind::kInvalidInput,
                         absl::StrCat(what, " contains duplicated point #", i,
                                      " and #", j));
      }
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<SymMatrix> PriorCovariance(const GpModel& model,
                                          const PointList& x) {
  if (x.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "no training inputs");
  }
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix k_xx, Gram(model.kernel, x));
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix v,
                          model.noise.Materialize(static_cast<int>(x.size())));
  return k_xx + v;
}

absl::Status CheckTolerances(const GpModel& model, const PointList& s,
                             const std::vector<double>& xi) {
  if (s.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "no sensitive inputs");
  }
  if (s.size() != xi.size()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat(s.size(), " sensitive inputs but ",
                                  xi.size(), " tolerances"));
  }
  PRIVGP_RETURN_IF_ERROR(CheckDistinct(s, "sensitive inputs"));
  for (size_t i = 0; i < s.size(); ++i) {
    PRIVGP_ASSIGN_OR_RETURN(double k_ss, Eval(model.kernel, s[i], s[i]));
    if (!(xi[i] > 0.0) || !(xi[i] < k_ss)) {
      return MakeError(ErrorKind::kInvalidTolerance,
                       absl::StrFormat("tolerance %g at sensitive input #%d "
                                       "must lie in (0, K_ss = %g)",
                                       xi[i], static_cast<int>(i), k_ss));
    }
  }
  return absl::OkStatus();
}

NoiseCovariance MakeNoise(SymMatrix sigma, NoiseProvenance provenance) {
  NoiseCovariance out;
  out.trace = sigma.Trace();
  out.sigma = std::move(sigma);
  out.provenance = provenance;
  return out;
}

absl::StatusOr<NoiseCovariance> SolvePerPoint(const GpModel& model,
                                              const PointList& x,
                                              const PointList& s,
                                              const std::vector<double>& xi,
                                              bool diagonal_only,
                                              const SdpOptions& options) {
  PRIVGP_RETURN_IF_ERROR(CheckTolerances(model, s, xi));
  const NoiseProvenance provenance = diagonal_only
                                         ? NoiseProvenance::kDiagonalSdp
                                         : NoiseProvenance::kWeakSdp;
  TraceMinProblem problem;
  problem.order = static_cast<int>(x.size());
  problem.diagonal_only = diagonal_only;
  bool all_inactive = true;
  for (size_t i = 0; i < s.size(); ++i) {
    PRIVGP_ASSIGN_OR_RETURN(SymMatrix b,
                            SingleConstraintMatrix(model, x, s[i], xi[i]));
    PRIVGP_ASSIGN_OR_RETURN(SpectralDecomposition spectrum, SymEigen(b));
    if (spectrum.eigenvalues(0) > ClipTolerance(spectrum.eigenvalues)) {
      all_inactive = false;
    }
    problem.dominated.push_back(std::move(b));
  }
  if (all_inactive) {
    // Every floor already holds without synthetic noise.
    NoiseCovariance out = MakeNoise(SymMatrix(problem.order), provenance);
    out.solver_status = SdpStatus::kOptimal;
    return out;
  }
  PRIVGP_ASSIGN_OR_RETURN(SdpSolution solution,
                          SolveTraceMin(problem, options));
  NoiseCovariance out = MakeNoise(solution.sigma, provenance);
  out.solver_status = solution.status;
  if (solution.status != SdpStatus::kOptimal) {
    out.warnings.push_back(absl::StrFormat(
        "SDP stopped with status %s after %d Newton steps (gap bound %g)",
        SdpStatusName(solution.status), solution.iterations,
        solution.duality_gap_estimate));
  }
  return out;
}

// True when h is a scaled copy alpha * k.
bool IsScaledCopyOf(const KernelSpec& k, const KernelSpec& h) {
  return h.family() == KernelFamily::kScaledCopy && h.base() != nullptr &&
         *h.base() == k;
}

bool ContainsAll(const PointList& haystack, const PointList& needles) {
  for (const Point& needle : needles) {
    const bool found = std::any_of(
        haystack.begin(), haystack.end(), [&needle](const Point& p) {
          return p.size() == needle.size() && p == needle;
        });
    if (!found) return false;
  }
  return true;
}

absl::StatusOr<GramG> ScaledCopyGram(const KernelSpec& k, double alpha,
                                     const PointList& x,
                                     absl::string_view region) {
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix k_xx, Gram(k, x));
  GramG out;
  out.matrix = k_xx * (1.0 / (1.0 - alpha));
  out.region = std::string(region);
  return out;
}

absl::Status CheckPair(const KernelSpec& k, const KernelSpec& h) {
  const Validity validity = ValidatePair(k, h);
  if (!validity.valid) {
    return MakeError(ErrorKind::kInvalidXi,
                     absl::StrCat("K - H is not positive definite: ",
                                  validity.reason));
  }
  return absl::OkStatus();
}

std::string DescribePoints(const PointList& s) {
  return absl::StrCat("finite(", s.size(), " points)");
}

}  // namespace

absl::string_view ProvenanceName(NoiseProvenance provenance) {
  for (const auto& [value, name] : kProvenanceNames) {
    if (value == provenance) return name;
  }
  return "unknown";
}

absl::StatusOr<NoiseProvenance> ProvenanceFromName(absl::string_view name) {
  for (const auto& [value, known] : kProvenanceNames) {
    if (known == name) return value;
  }
  return MakeError(ErrorKind::kInvalidInput,
                   absl::StrCat("unknown provenance '", name, "'"));
}

absl::StatusOr<KernelSpec> ResolvePrivacyKernel(
    const KernelBased& spec, const KernelSpec& model_kernel) {
  if (spec.h.has_value()) return *spec.h;
  return KernelSpec::ScaledCopy(spec.relative_scale, model_kernel);
}

absl::StatusOr<PointList> GridPoints(const GridRegion& region,
                                     int resolution) {
  if (region.boxes.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "grid region has no boxes");
  }
  if (resolution < 1) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("grid resolution must be >= 1, got ",
                                  resolution));
  }
  PointList out;
  for (const Box& box : region.boxes) {
    const int d = static_cast<int>(box.lo.size());
    if (d == 0 || box.hi.size() != d) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       "grid box bounds have inconsistent dimension");
    }
    if (!box.lo.allFinite() || !box.hi.allFinite() ||
        (box.hi.array() < box.lo.array()).any()) {
      return MakeError(ErrorKind::kInvalidInput,
                       "grid box needs finite bounds with lo <= hi");
    }
    // Per-axis sample counts; a degenerate axis contributes one value.
    std::vector<int> counts(d);
    for (int a = 0; a < d; ++a) {
      counts[a] = box.lo(a) == box.hi(a) ? 1 : resolution;
    }
    std::vector<int> index(d, 0);
    while (true) {
      Point p(d);
      for (int a = 0; a < d; ++a) {
        p(a) = counts[a] == 1
                   ? box.lo(a)
                   : box.lo(a) + (box.hi(a) - box.lo(a)) * index[a] /
                                     (counts[a] - 1);
      }
      if (!ContainsAll(out, {p})) out.push_back(std::move(p));
      int a = 0;
      while (a < d && ++index[a] == counts[a]) {
        index[a] = 0;
        ++a;
      }
      if (a == d) break;
    }
  }
  return out;
}

absl::StatusOr<SymMatrix> SingleConstraintMatrix(const GpModel& model,
                                                 const PointList& x,
                                                 const Point& s, double xi) {
  PRIVGP_RETURN_IF_ERROR(CheckTolerances(model, {s}, {xi}));
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix prior, PriorCovariance(model, x));
  PRIVGP_ASSIGN_OR_RETURN(Eigen::MatrixXd k_xs, Gram(model.kernel, x, {s}));
  const double k_ss = model.kernel(s, s);
  const Eigen::MatrixXd outer = k_xs * k_xs.transpose() / (k_ss - xi);
  return SymMatrix::Symmetrize(outer) - prior;
}

absl::StatusOr<NoiseCovariance> SingleSensitiveNoise(const GpModel& model,
                                                     const PointList& x,
                                                     const Point& s,
                                                     double xi) {
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix b, SingleConstraintMatrix(model, x, s, xi));
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix sigma, PsdPart(b));
  return MakeNoise(std::move(sigma), NoiseProvenance::kSingleClosedForm);
}

absl::StatusOr<NoiseCovariance> WeakNoise(const GpModel& model,
                                          const PointList& x,
                                          const PointList& s,
                                          const std::vector<double>& xi,
                                          const SdpOptions& options) {
  return SolvePerPoint(model, x, s, xi, /*diagonal_only=*/false, options);
}

absl::StatusOr<NoiseCovariance> DiagonalNoise(const GpModel& model,
                                              const PointList& x,
                                              const PointList& s,
                                              const std::vector<double>& xi,
                                              const SdpOptions& options) {
  return SolvePerPoint(model, x, s, xi, /*diagonal_only=*/true, options);
}

absl::StatusOr<NoiseCovariance> StrongNoise(const GpModel& model,
                                            const PointList& x,
                                            const PointList& s,
                                            const Eigen::MatrixXd& xi) {
  const int gamma = static_cast<int>(s.size());
  if (gamma == 0) {
    return MakeError(ErrorKind::kInvalidInput, "no sensitive inputs");
  }
  if (xi.rows() != gamma || xi.cols() != gamma) {
    return MakeError(ErrorKind::kInvalidXi,
                     absl::StrCat("Xi is ", xi.rows(), "x", xi.cols(),
                                  " for ", gamma, " sensitive inputs"));
  }
  if (!xi.allFinite()) {
    return MakeError(ErrorKind::kInvalidXi, "Xi has non-finite entries");
  }
  const double scale = std::max(1.0, xi.cwiseAbs().maxCoeff());
  if ((xi - xi.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
    return MakeError(ErrorKind::kInvalidXi, "Xi is not symmetric");
  }
  PRIVGP_RETURN_IF_ERROR(CheckDistinct(s, "sensitive inputs"));
  const SymMatrix xi_sym = SymMatrix::Symmetrize(xi);
  PRIVGP_ASSIGN_OR_RETURN(double xi_min, MinEigenvalue(xi_sym));
  if (xi_min < -1e-12 * scale) {
    return MakeError(ErrorKind::kInvalidXi,
                     absl::StrCat("Xi is not PSD (min eigenvalue ", xi_min,
                                  ")"));
  }
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix k_ss, Gram(model.kernel, s));
  const SymMatrix gap = k_ss - xi_sym;
  PRIVGP_ASSIGN_OR_RETURN(double gap_min, MinEigenvalue(gap));
  absl::StatusOr<SpdFactor> factor = SpdFactor::Compute(gap);
  if (!(gap_min > 0.0) || !factor.ok()) {
    return MakeError(ErrorKind::kInvalidXi,
                     absl::StrCat("K_SS - Xi is not positive definite (min "
                                  "eigenvalue ",
                                  gap_min, ")"));
  }
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix prior, PriorCovariance(model, x));
  PRIVGP_ASSIGN_OR_RETURN(Eigen::MatrixXd k_sx, Gram(model.kernel, s, x));
  const Eigen::MatrixXd whitened = factor->SolveLower(k_sx);
  const SymMatrix b =
      SymMatrix::Symmetrize(whitened.transpose() * whitened) - prior;
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix sigma, PsdPart(b));
  return MakeNoise(std::move(sigma), NoiseProvenance::kStrongClosedForm);
}

absl::StatusOr<GramG> GramGFinite(const KernelSpec& k, const KernelSpec& h,
                                  const PointList& s, const PointList& x) {
  PRIVGP_RETURN_IF_ERROR(CheckPair(k, h));
  if (s.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "sensitive set is empty");
  }
  PRIVGP_RETURN_IF_ERROR(CheckDistinct(s, "sensitive set"));
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix k_ss, Gram(k, s));
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix h_ss, Gram(h, s));
  PRIVGP_ASSIGN_OR_RETURN(Eigen::MatrixXd k_sx, Gram(k, s, x));
  PRIVGP_ASSIGN_OR_RETURN(
      SpdFactor factor,
      SpdFactor::ComputeWithFallback(k_ss - h_ss, kRelativeJitter, kRcondFloor));
  const Eigen::MatrixXd whitened = factor.SolveLower(k_sx);

  GramG out;
  out.matrix = SymMatrix::Symmetrize(whitened.transpose() * whitened);
  out.region = DescribePoints(s);
  out.jitter = factor.jitter();
  if (factor.jitter() > 0.0) {
    out.warnings.push_back(absl::StrFormat(
        "K_SS - H_SS on %d points is near singular (rcond estimate %.3g, "
        "condition above %.0e); added diagonal jitter %.3g",
        static_cast<int>(s.size()), factor.unjittered_rcond(),
        1.0 / kRcondFloor, factor.jitter()));
  }
  return out;
}

absl::StatusOr<GridGram> GramGGrid(const KernelSpec& k, const KernelSpec& h,
                                   const GridRegion& region,
                                   const PointList& x) {
  PRIVGP_RETURN_IF_ERROR(CheckPair(k, h));
  if (region.resolutions.empty()) {
    return MakeError(ErrorKind::kInvalidInput,
                     "grid region needs at least one resolution");
  }
  GridGram out;
  std::optional<SymMatrix> previous;
  for (int resolution : region.resolutions) {
    PRIVGP_ASSIGN_OR_RETURN(PointList points, GridPoints(region, resolution));
    const std::string label =
        absl::StrCat("grid(", region.boxes.size(), " boxes, ", resolution,
                     " per axis, ", points.size(), " points)");
    GramG level;
    if (IsScaledCopyOf(k, h) && ContainsAll(points, x)) {
      PRIVGP_ASSIGN_OR_RETURN(level, ScaledCopyGram(k, h.alpha(), x, label));
    } else {
      PRIVGP_ASSIGN_OR_RETURN(level, GramGFinite(k, h, points, x));
      level.region = label;
    }
    if (previous.has_value()) {
      out.successive_differences.push_back(
          (level.matrix - *previous).MaxAbs());
    }
    previous = level.matrix;
    out.gram = std::move(level);
  }
  return out;
}

namespace {

// Radial pieces of the Fourier-side inner product for a squared-exponential
// pair. With rho(r) = R~_H(r) / R~_K(r) = rho0 exp(-kappa r^2), the integrand
// R~_K^2 / (R~_K - R~_H) equals R~_K / (1 - rho).
struct RadialIntegrand {
  const KernelSpec* k;
  int d;
  double one_minus_rho0;
  double rho0;
  double kappa;

  double operator()(double r) const {
    const double one_minus_rho =
        one_minus_rho0 + rho0 * (-std::expm1(-kappa * r * r));
    return k->SpectralDensity(r) / one_minus_rho;
  }
};

// Integral of exp(i r u.delta) over the unit sphere, as a function of
// u = r |delta|.
double SphericalAverage(int d, double u) {
  if (d == 1) return 2.0 * std::cos(u);
  const double half = 0.5 * d;
  if (u == 0.0) {
    return 2.0 * std::pow(std::numbers::pi, half) / std::tgamma(half);
  }
  if (d == 3) return 4.0 * std::numbers::pi * std::sin(u) / u;
  return std::pow(2.0 * std::numbers::pi, half) * std::pow(u, 1.0 - half) *
         std::cyl_bessel_j(half - 1.0, u);
}

}  // namespace

absl::StatusOr<GramG> GramGUniformStationary(
    const KernelSpec& k, const KernelSpec& h, const PointList& x,
    const QuadratureSettings& settings) {
  PRIVGP_RETURN_IF_ERROR(CheckPair(k, h));
  if (x.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "no training inputs");
  }
  if (IsScaledCopyOf(k, h)) {
    return ScaledCopyGram(k, h.alpha(), x, "whole_space");
  }
  const double c = h.amplitude() / k.amplitude();
  const double theta0 = k.theta();
  const double theta = h.theta();
  const int d = k.dimension();
  if (theta == theta0) {
    // H = c K: the same closed form with alpha = c.
    return ScaledCopyGram(k, c, x, "whole_space");
  }
  RadialIntegrand integrand{&k, d, 1.0, 0.0, 0.0};
  if (c > 0.0) {
    integrand.rho0 = c * std::pow(theta0 / theta, 0.5 * d);
    integrand.kappa = 0.25 / theta - 0.25 / theta0;
    integrand.one_minus_rho0 = 1.0 - integrand.rho0;
    if (std::abs(integrand.one_minus_rho0) <= 1e-12) {
      if (d <= 2) {
        return MakeError(
            ErrorKind::kNotIntegrable,
            absl::StrFormat("R~_K - R~_H vanishes at the origin (theta = "
                            "c^{2/d} theta0 = %g); the integral diverges for "
                            "d = %d",
                            theta, d));
      }
      integrand.one_minus_rho0 = 0.0;
    }
  }

  // Truncate where the radial integrand is negligible.
  auto radial = [&](double r) {
    return integrand(r) * std::pow(r, d - 1);
  };
  double omega_max = std::sqrt(4.0 * theta0);
  double peak = 0.0;
  for (int iter = 0; iter < 60; ++iter) {
    for (int i = 1; i <= 256; ++i) {
      peak = std::max(peak, radial(omega_max * i / 256.0));
    }
    if (radial(omega_max) <= settings.tail_ratio * peak) break;
    omega_max *= 1.5;
  }
  if (!std::isfinite(peak) || !(peak > 0.0)) {
    return MakeError(ErrorKind::kNotIntegrable,
                     "spectral integrand is not finite");
  }

  double max_lag = 0.0;
  for (const Point& a : x) {
    for (const Point& b : x) max_lag = std::max(max_lag, (a - b).norm());
  }
  // Panels at most half an oscillation wide.
  const int panels =
      std::max(1, static_cast<int>(std::ceil(omega_max * max_lag /
                                             std::numbers::pi)));
  const double normalizer = std::pow(2.0 * std::numbers::pi, -0.5 * d);

  std::map<double, double> by_lag;
  auto entry = [&](double lag) {
    auto it = by_lag.find(lag);
    if (it != by_lag.end()) return it->second;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
      const double lo = omega_max * p / panels;
      const double hi = omega_max * (p + 1) / panels;
      total += boost::math::quadrature::gauss_kronrod<double, 15>::integrate(
          [&](double r) { return radial(r) * SphericalAverage(d, r * lag); },
          lo, hi, settings.max_depth, settings.relative_tolerance);
    }
    const double value = normalizer * total;
    by_lag.emplace(lag, value);
    return value;
  };

  const int n = static_cast<int>(x.size());
  Eigen::MatrixXd g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) g(i, j) = g(j, i) = entry((x[i] - x[j]).norm());
  }
  GramG out;
  out.matrix = SymMatrix::Symmetrize(g);
  out.region = "whole_space";
  return out;
}

absl::StatusOr<NoiseCovariance> NoiseFromGram(const GramG& g,
                                              const SymMatrix& k_xx,
                                              const SymMatrix& v,
                                              NoiseProvenance provenance) {
  if (g.matrix.order() != k_xx.order() || v.order() != k_xx.order()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("G has order ", g.matrix.order(), ", K_XX ",
                                  k_xx.order(), ", V ", v.order()));
  }
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix sigma, PsdPart(g.matrix - k_xx - v));
  NoiseCovariance out = MakeNoise(std::move(sigma), provenance);
  out.warnings = g.warnings;
  return out;
}

absl::StatusOr<NoiseCovariance> ComputeNoise(const GpModel& model,
                                             const PointList& x,
                                             const PrivacySpec& spec,
                                             const NoiseOptions& options) {
  return std::visit(
      Overloaded{
          [&](const SingleSensitive& single) {
            return SingleSensitiveNoise(model, x, single.s, single.xi);
          },
          [&](const WeakSensitive& weak) {
            return WeakNoise(model, x, weak.s, weak.xi, options.sdp);
          },
          [&](const DiagonalSensitive& diagonal) {
            return DiagonalNoise(model, x, diagonal.s, diagonal.xi,
                                 options.sdp);
          },
          [&](const StrongSensitive& strong) {
            return StrongNoise(model, x, strong.s, strong.xi);
          },
          [&](const KernelBased& kernel) -> absl::StatusOr<NoiseCovariance> {
            PRIVGP_ASSIGN_OR_RETURN(KernelSpec h,
                                    ResolvePrivacyKernel(kernel, model.kernel));
            PRIVGP_ASSIGN_OR_RETURN(SymMatrix k_xx, Gram(model.kernel, x));
            PRIVGP_ASSIGN_OR_RETURN(
                SymMatrix v, model.noise.Materialize(static_cast<int>(x.size())));
            GramG g;
            NoiseProvenance provenance;
            if (const auto* finite = std::get_if<FinitePoints>(&kernel.region)) {
              PRIVGP_ASSIGN_OR_RETURN(g,
                                      GramGFinite(model.kernel, h,
                                                  finite->points, x));
              provenance = NoiseProvenance::kKernelFinite;
            } else if (const auto* grid =
                           std::get_if<GridRegion>(&kernel.region)) {
              PRIVGP_ASSIGN_OR_RETURN(GridGram gg,
                                      GramGGrid(model.kernel, h, *grid, x));
              g = std::move(gg.gram);
              provenance = NoiseProvenance::kKernelGrid;
            } else {
              PRIVGP_ASSIGN_OR_RETURN(
                  g, GramGUniformStationary(model.kernel, h, x,
                                            options.quadrature));
              provenance = NoiseProvenance::kKernelUniform;
            }
            return NoiseFromGram(g, k_xx, v, provenance);
          },
      },
      spec);
}

namespace {

struct ProbeFloors {
  PointList probes;
  // Floor matrix; per-point specifications only use its diagonal.
  Eigen::MatrixXd floor;
  bool matrix_floor = false;
};

absl::StatusOr<ProbeFloors> FloorsFor(const GpModel& model, const PointList& x,
                                      const PrivacySpec& spec,
                                      const PointList& extra_probes) {
  auto per_point = [](const PointList& s, const std::vector<double>& xi) {
    ProbeFloors out;
    out.probes = s;
    out.floor = Eigen::VectorXd::Map(xi.data(), xi.size()).asDiagonal();
    return out;
  };
  return std::visit(
      Overloaded{
          [&](const SingleSensitive& single) -> absl::StatusOr<ProbeFloors> {
            return per_point({single.s}, {single.xi});
          },
          [&](const WeakSensitive& weak) -> absl::StatusOr<ProbeFloors> {
            return per_point(weak.s, weak.xi);
          },
          [&](const DiagonalSensitive& diag) -> absl::StatusOr<ProbeFloors> {
            return per_point(diag.s, diag.xi);
          },
          [&](const StrongSensitive& strong) -> absl::StatusOr<ProbeFloors> {
            ProbeFloors out;
            out.probes = strong.s;
            out.floor = strong.xi;
            out.matrix_floor = true;
            return out;
          },
          [&](const KernelBased& kernel) -> absl::StatusOr<ProbeFloors> {
            PRIVGP_ASSIGN_OR_RETURN(KernelSpec h,
                                    ResolvePrivacyKernel(kernel, model.kernel));
            ProbeFloors out;
            if (const auto* finite = std::get_if<FinitePoints>(&kernel.region)) {
              out.probes = finite->points;
            } else if (const auto* grid =
                           std::get_if<GridRegion>(&kernel.region)) {
              if (grid->resolutions.empty()) {
                return MakeError(ErrorKind::kInvalidInput,
                                 "grid region needs a resolution");
              }
              PRIVGP_ASSIGN_OR_RETURN(
                  out.probes, GridPoints(*grid, grid->resolutions.back()));
            } else {
              out.probes = x;
            }
            out.probes.insert(out.probes.end(), extra_probes.begin(),
                              extra_probes.end());
            PRIVGP_ASSIGN_OR_RETURN(SymMatrix h_pp, Gram(h, out.probes));
            out.floor = h_pp.dense();
            out.matrix_floor = true;
            return out;
          },
      },
      spec);
}

}  // namespace

absl::StatusOr<FloorCheck> CheckPrivacyFloor(const GpModel& model,
                                             const PointList& x,
                                             const SymMatrix& sigma,
                                             const PrivacySpec& spec,
                                             const PointList& extra_probes) {
  PRIVGP_ASSIGN_OR_RETURN(ProbeFloors floors,
                          FloorsFor(model, x, spec, extra_probes));
  Dataset data{x, Eigen::VectorXd::Constant(static_cast<int>(x.size()),
                                            model.mean)};
  PRIVGP_ASSIGN_OR_RETURN(PredictiveDistribution predictive,
                          Posterior(model, data, &sigma, floors.probes));
  FloorCheck out;
  out.probes = floors.probes;
  out.variances = predictive.Variances();
  out.floors = floors.floor.diagonal();
  if (floors.matrix_floor) {
    PRIVGP_ASSIGN_OR_RETURN(
        out.margin,
        MinEigenvalue(predictive.covariance - SymMatrix::Symmetrize(floors.floor)));
  } else {
    out.margin = (out.variances - out.floors).minCoeff();
  }
  return out;
}

}  // namespace privgp
