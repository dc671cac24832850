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

// Synthetic-noise covariances that keep the released model's predictive
// variance above a floor at sensitive inputs.
//
// Every formulation reduces to "minimize Tr(Sigma) subject to Sigma >= B_i,
// Sigma >= 0" with B_i = K_{X,S_i} (K_{S_i,S_i} - Xi_i)^{-1} K_{S_i,X}
// - K_{X,X} - V. A single constraint has the closed form Sigma = B^+; several
// per-point constraints need the SDP solver.

#ifndef PRIVGP_PRIVACY_H_
#define PRIVGP_PRIVACY_H_

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"
#include "absl/strings/string_view.h"
#include "privgp/gp.h"
#include "privgp/kernels.h"
#include "privgp/linalg.h"
#include "privgp/sdp.h"

namespace privgp {

enum class NoiseProvenance {
  kSingleClosedForm,
  kWeakSdp,
  kStrongClosedForm,
  kDiagonalSdp,
  kKernelFinite,
  kKernelGrid,
  kKernelUniform,
};

absl::string_view ProvenanceName(NoiseProvenance provenance);
absl::StatusOr<NoiseProvenance> ProvenanceFromName(absl::string_view name);

struct NoiseCovariance {
  SymMatrix sigma;
  NoiseProvenance provenance = NoiseProvenance::kSingleClosedForm;
  double trace = 0.0;
  // Set for the SDP-backed formulations.
  std::optional<SdpStatus> solver_status;
  std::vector<std::string> warnings;
};

// ---- Privacy specifications ----

struct SingleSensitive {
  Point s;
  double xi = 0.0;
};

// Per-point floors Var[f(s_i) | W] >= xi_i. Solved with the full (weak) or
// diagonal-restricted SDP.
struct WeakSensitive {
  PointList s;
  std::vector<double> xi;
};

struct DiagonalSensitive {
  PointList s;
  std::vector<double> xi;
};

// Matrix floor Cov[f(S) | W] >= Xi.
struct StrongSensitive {
  PointList s;
  Eigen::MatrixXd xi;
};

// Axis-aligned box sampled as a tensor grid.
struct Box {
  Point lo;
  Point hi;
};

// Union of boxes, each sampled with `resolutions[k]` points per axis at
// refinement level k. The last level is the one used for the noise.
struct GridRegion {
  std::vector<Box> boxes;
  std::vector<int> resolutions;
};

struct FinitePoints {
  PointList points;
};

struct WholeSpace {};

using SensitiveRegion = std::variant<FinitePoints, GridRegion, WholeSpace>;

struct KernelBased {
  // Privacy kernel H. When unset, H = relative_scale * K for the model's
  // kernel K (resolved once the model is known).
  std::optional<KernelSpec> h;
  double relative_scale = 0.0;
  SensitiveRegion region;
};

using PrivacySpec = std::variant<SingleSensitive, WeakSensitive,
                                 DiagonalSensitive, StrongSensitive,
                                 KernelBased>;

absl::StatusOr<KernelSpec> ResolvePrivacyKernel(const KernelBased& spec,
                                                const KernelSpec& model_kernel);

// Grid points of a region at one resolution, duplicates removed.
absl::StatusOr<PointList> GridPoints(const GridRegion& region, int resolution);

// ---- Closed-form and SDP formulations ----

// Sigma = ((K_ss - xi)^{-1} K_{X,s} K_{s,X} - K_{X,X} - V)^+. Requires
// 0 < xi < K_ss.
absl::StatusOr<NoiseCovariance> SingleSensitiveNoise(const GpModel& model,
                                                     const PointList& x,
                                                     const Point& s, double xi);

absl::StatusOr<NoiseCovariance> WeakNoise(const GpModel& model,
                                          const PointList& x,
                                          const PointList& s,
                                          const std::vector<double>& xi,
                                          const SdpOptions& options = {});

absl::StatusOr<NoiseCovariance> DiagonalNoise(const GpModel& model,
                                              const PointList& x,
                                              const PointList& s,
                                              const std::vector<double>& xi,
                                              const SdpOptions& options = {});

// Sigma = (K_{X,S} (K_{S,S} - Xi)^{-1} K_{S,X} - K_{X,X} - V)^+. Requires
// Xi >= 0 and K_{S,S} - Xi > 0.
absl::StatusOr<NoiseCovariance> StrongNoise(const GpModel& model,
                                            const PointList& x,
                                            const PointList& s,
                                            const Eigen::MatrixXd& xi);

// The dominated matrix B for a single per-point floor.
absl::StatusOr<SymMatrix> SingleConstraintMatrix(const GpModel& model,
                                                 const PointList& x,
                                                 const Point& s, double xi);

// ---- Kernel-based formulations ----

// G(S) with G_ij = <K(., x_i), K(., x_j)> in the native space of K - H on S.
struct GramG {
  SymMatrix matrix;
  std::string region;
  // Diagonal jitter applied to K_{S,S} - H_{S,S}; 0 when none was needed.
  double jitter = 0.0;
  std::vector<std::string> warnings;
};

// G(S) = K_{X,S} (K_{S,S} - H_{S,S})^{-1} K_{S,X} for finitely many distinct
// points S. Near-singular K_{S,S} - H_{S,S} (condition estimate above 1e12)
// gets jitter 1e-10 * mean(diag) and a warning.
absl::StatusOr<GramG> GramGFinite(const KernelSpec& k, const KernelSpec& h,
                                  const PointList& s, const PointList& x);

struct GridGram {
  GramG gram;
  // ||G(S_k) - G(S_{k-1})||_max for consecutive resolutions.
  std::vector<double> successive_differences;
};

// G on the grid of each resolution in turn. When H = alpha K and the grid
// contains every x_i, returns (1 - alpha)^{-1} K_{X,X} directly.
absl::StatusOr<GridGram> GramGGrid(const KernelSpec& k, const KernelSpec& h,
                                   const GridRegion& region,
                                   const PointList& x);

struct QuadratureSettings {
  double relative_tolerance = 1e-6;
  // Integration is truncated where the integrand falls below tail_ratio times
  // its peak.
  double tail_ratio = 1e-12;
  int max_depth = 20;
};

// G(R^d) through the Fourier representation
//   <K(., x), K(., x')> = (2 pi)^{-d/2} int cos(w^T (x - x')) R~_K^2 /
//                         (R~_K - R~_H) dw,
// reduced to a radial integral. H = alpha K short-circuits to
// (1 - alpha)^{-1} K_{X,X}. Fails with NotIntegrable when the integral
// diverges.
absl::StatusOr<GramG> GramGUniformStationary(
    const KernelSpec& k, const KernelSpec& h, const PointList& x,
    const QuadratureSettings& settings = {});

// Sigma = (G - K_{X,X} - V)^+.
absl::StatusOr<NoiseCovariance> NoiseFromGram(const GramG& g,
                                              const SymMatrix& k_xx,
                                              const SymMatrix& v,
                                              NoiseProvenance provenance);

struct NoiseOptions {
  SdpOptions sdp;
  QuadratureSettings quadrature;
};

// Dispatches on the specification variant.
absl::StatusOr<NoiseCovariance> ComputeNoise(const GpModel& model,
                                             const PointList& x,
                                             const PrivacySpec& spec,
                                             const NoiseOptions& options = {});

// ---- Verification ----

struct FloorCheck {
  PointList probes;
  // Posterior variances at the probes and the floors they must clear.
  Eigen::VectorXd variances;
  Eigen::VectorXd floors;
  // Smallest eigenvalue of Cov[f(probes) | W] - floor matrix. For per-point
  // specifications this is min_i (variance_i - floor_i).
  double margin = 0.0;
};

// Re-evaluates the released predictive covariance at the specification's
// probe points: the sensitive points themselves, the finest grid, or the
// training inputs for WholeSpace. `extra_probes` are added for kernel-based
// specifications.
absl::StatusOr<FloorCheck> CheckPrivacyFloor(
    const GpModel& model, const PointList& x, const SymMatrix& sigma,
    const PrivacySpec& spec, const PointList& extra_probes = {});

}  // namespace privgp

#endif  // PRIVGP_PRIVACY_H_
