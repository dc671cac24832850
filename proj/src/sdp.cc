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

#include "privgp/sdp.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <vector>

#include "absl/strings/str_cat.h"
#include "privgp/status.h"

namespace privgp {

absl::string_view SdpStatusName(SdpStatus status) {
  switch (status) {
    case SdpStatus::kOptimal:
      return "optimal";
    case SdpStatus::kMaxIterations:
      return "max_iterations";
    case SdpStatus::kInfeasible:
      return "infeasible";
  }
  return "unknown";
}

namespace {

constexpr double kArmijo = 1e-4;
constexpr double kCenteringTolerance = 1e-10;
constexpr double kMinStep = 1e-14;
constexpr double kRoundoffGain = 1e-14;

// Free entries of Sigma. Entry k is the symmetric unit direction
// E_k = e_i e_j^T + e_j e_i^T (i != j) or e_i e_i^T (i == j).
struct Coordinate {
  int i;
  int j;
  // 1 off the diagonal, 1/2 on it; Tr(W E_k) = 2 f_k W_ij.
  double f;
};

std::vector<Coordinate> Coordinates(int n, bool diagonal_only) {
  std::vector<Coordinate> out;
  for (int i = 0; i < n; ++i) {
    out.push_back({i, i, 0.5});
    if (diagonal_only) continue;
    for (int j = i + 1; j < n; ++j) out.push_back({i, j, 1.0});
  }
  return out;
}

class BarrierProblem {
 public:
  BarrierProblem(const TraceMinProblem& problem)
      : n_(problem.order),
        coordinates_(Coordinates(problem.order, problem.diagonal_only)) {
    // Sigma >= 0 is the constraint with B = 0.
    constraints_.reserve(problem.dominated.size() + 1);
    for (const SymMatrix& b : problem.dominated) constraints_.push_back(b.dense());
    constraints_.push_back(Eigen::MatrixXd::Zero(n_, n_));
  }

  int cone_dimension() const {
    return static_cast<int>(constraints_.size()) * n_;
  }
  int variables() const { return static_cast<int>(coordinates_.size()); }

  Eigen::MatrixXd ToMatrix(const Eigen::VectorXd& x) const {
    Eigen::MatrixXd sigma = Eigen::MatrixXd::Zero(n_, n_);
    for (int k = 0; k < variables(); ++k) {
      const Coordinate& c = coordinates_[k];
      sigma(c.i, c.j) = x(k);
      sigma(c.j, c.i) = x(k);
    }
    return sigma;
  }

  Eigen::VectorXd FromMatrix(const Eigen::MatrixXd& sigma) const {
    Eigen::VectorXd x(variables());
    for (int k = 0; k < variables(); ++k) {
      x(k) = sigma(coordinates_[k].i, coordinates_[k].j);
    }
    return x;
  }

  // Factors every slack Sigma - B. Empty when x is outside the interior.
  std::optional<std::vector<Eigen::LLT<Eigen::MatrixXd>>> Factor(
      const Eigen::VectorXd& x) const {
    const Eigen::MatrixXd sigma = ToMatrix(x);
    std::vector<Eigen::LLT<Eigen::MatrixXd>> factors;
    factors.reserve(constraints_.size());
    for (const Eigen::MatrixXd& b : constraints_) {
      Eigen::LLT<Eigen::MatrixXd> llt(sigma - b);
      if (llt.info() != Eigen::Success ||
          !(llt.matrixLLT().diagonal().array() > 0.0).all()) {
        return std::nullopt;
      }
      factors.push_back(std::move(llt));
    }
    return factors;
  }

  // Barrier value Tr(Sigma) / mu - sum log det(slack); +inf outside.
  double Value(const Eigen::VectorXd& x, double mu) const {
    auto factors = Factor(x);
    if (!factors.has_value()) return std::numeric_limits<double>::infinity();
    double log_det = 0.0;
    for (const auto& llt : *factors) {
      log_det += 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    }
    return ToMatrix(x).trace() / mu - log_det;
  }

  // Gradient and Hessian of the barrier objective at an interior point.
  void Derivatives(const std::vector<Eigen::LLT<Eigen::MatrixXd>>& factors,
                   double mu, Eigen::VectorXd& gradient,
                   Eigen::MatrixXd& hessian) const {
    const int m = variables();
    gradient.setZero(m);
    hessian.setZero(m, m);
    const Eigen::MatrixXd identity = Eigen::MatrixXd::Identity(n_, n_);
    for (const auto& llt : factors) {
      const Eigen::MatrixXd w = llt.solve(identity);
      for (int k = 0; k < m; ++k) {
        const Coordinate& a = coordinates_[k];
        gradient(k) -= 2.0 * a.f * w(a.i, a.j);
        for (int l = k; l < m; ++l) {
          const Coordinate& b = coordinates_[l];
          const double h = 2.0 * a.f * b.f *
                           (w(a.i, b.i) * w(a.j, b.j) +
                            w(a.i, b.j) * w(a.j, b.i));
          hessian(k, l) += h;
        }
      }
    }
    for (int k = 0; k < m; ++k) {
      const Coordinate& a = coordinates_[k];
      if (a.i == a.j) gradient(k) += 1.0 / mu;
      for (int l = 0; l < k; ++l) hessian(k, l) = hessian(l, k);
    }
  }

 private:
  int n_;
  std::vector<Coordinate> coordinates_;
  std::vector<Eigen::MatrixXd> constraints_;
};

}  // namespace

absl::StatusOr<SdpSolution> SolveTraceMin(const TraceMinProblem& problem,
                                          const SdpOptions& options) {
  const int n = problem.order;
  if (n < 1) {
    return MakeError(ErrorKind::kInvalidInput, "problem order must be >= 1");
  }
  if (problem.dominated.empty()) {
    return MakeError(ErrorKind::kInvalidInput,
                     "at least one dominated matrix is required");
  }
  if (!(options.tol > 0.0) || options.max_iter < 1 ||
      !(options.mu_reduction > 1.0)) {
    return MakeError(ErrorKind::kInvalidInput,
                     "need tol > 0, max_iter >= 1, mu_reduction > 1");
  }
  double top = 0.0;
  for (const SymMatrix& b : problem.dominated) {
    if (b.order() != n) {
      return MakeError(ErrorKind::kDimensionMismatch,
                       absl::StrCat("dominated matrix of order ", b.order(),
                                    " in a problem of order ", n));
    }
    PRIVGP_ASSIGN_OR_RETURN(SpectralDecomposition spectrum, SymEigen(b));
    top = std::max(top, spectrum.eigenvalues(0));
  }

  BarrierProblem barrier(problem);
  Eigen::VectorXd x = barrier.FromMatrix(
      (top + 1.0) * Eigen::MatrixXd::Identity(n, n));

  SdpSolution solution;
  if (!barrier.Factor(x).has_value()) {
    solution.status = SdpStatus::kInfeasible;
    solution.sigma = SymMatrix::Symmetrize(barrier.ToMatrix(x));
    solution.trace = solution.sigma.Trace();
    return solution;
  }

  const double cone = barrier.cone_dimension();
  double mu = std::max(1.0, (top + 1.0) * n) / cone;
  int iterations = 0;
  bool converged = false;

  Eigen::VectorXd gradient;
  Eigen::MatrixXd hessian;
  while (iterations < options.max_iter) {
    // Centering: damped Newton on the barrier objective for this mu.
    bool centered = false;
    while (!centered && iterations < options.max_iter) {
      auto factors = barrier.Factor(x);
      barrier.Derivatives(*factors, mu, gradient, hessian);
      Eigen::LDLT<Eigen::MatrixXd> ldlt(hessian);
      const Eigen::VectorXd step = ldlt.solve(-gradient);
      const double slope = gradient.dot(step);
      ++iterations;
      if (!step.allFinite() || slope >= 0.0 ||
          -slope / 2.0 <= kCenteringTolerance) {
        centered = true;
        break;
      }

      const double current = barrier.Value(x, mu);
      double t = 1.0;
      bool moved = false;
      while (t >= kMinStep) {
        const Eigen::VectorXd trial = x + t * step;
        const double value = barrier.Value(trial, mu);
        if (value <= current + kArmijo * t * slope) {
          x = trial;
          moved = true;
          // Roundoff floor: the decrement can stall above tolerance.
          if (current - value <= kRoundoffGain * std::max(1.0, std::abs(current))) {
            centered = true;
          }
          break;
        }
        t *= 0.5;
      }
      if (!moved) centered = true;
    }
    if (!centered) break;
    if (mu * cone <= options.tol) {
      converged = true;
      break;
    }
    mu /= options.mu_reduction;
  }

  solution.sigma = SymMatrix::Symmetrize(barrier.ToMatrix(x));
  solution.trace = solution.sigma.Trace();
  solution.iterations = iterations;
  solution.duality_gap_estimate = mu * cone;
  solution.status = converged ? SdpStatus::kOptimal : SdpStatus::kMaxIterations;
  return solution;
}

}  // namespace privgp
