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

// Trace minimization over the PSD cone:
//
//   minimize Tr(Sigma)  subject to  Sigma >= B_i (i = 1..k),  Sigma >= 0,
//
// optionally with Sigma restricted to diagonal matrices. Solved with a
// primal log-barrier path-following method.

#ifndef PRIVGP_SDP_H_
#define PRIVGP_SDP_H_

#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "privgp/linalg.h"

namespace privgp {

struct TraceMinProblem {
  int order = 0;
  std::vector<SymMatrix> dominated;
  bool diagonal_only = false;
};

struct SdpOptions {
  // Stop once the barrier duality-gap bound mu * (k + 1) * n is below tol.
  double tol = 1e-7;
  // Total Newton steps across all barrier stages.
  int max_iter = 500;
  // Geometric reduction of the barrier weight per stage.
  double mu_reduction = 5.0;
};

enum class SdpStatus { kOptimal, kMaxIterations, kInfeasible };

absl::string_view SdpStatusName(SdpStatus status);

struct SdpSolution {
  SymMatrix sigma;
  double trace = 0.0;
  int iterations = 0;
  double duality_gap_estimate = 0.0;
  SdpStatus status = SdpStatus::kMaxIterations;
};

// Minimizes
//   Tr(Sigma) - mu * [sum_i log det(Sigma - B_i) + log det(Sigma)]
// for a decreasing sequence of mu with damped Newton steps over the
// n(n+1)/2 free entries (n when diagonal_only). Starts from
// Sigma_0 = (max_i lambda_max(B_i))^+ I + I. Deterministic.
//
// Non-convergence is reported through SdpSolution::status, not as an error.
absl::StatusOr<SdpSolution> SolveTraceMin(const TraceMinProblem& problem,
                                          const SdpOptions& options = {});

}  // namespace privgp

#endif  // PRIVGP_SDP_H_
