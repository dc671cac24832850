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

#include "privgp/linalg.h"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <utility>
#include <vector>

#include "absl/strings/str_cat.h"
#include "privgp/status.h"

namespace privgp {

SymMatrix SymMatrix::Symmetrize(const Eigen::MatrixXd& a) {
  SymMatrix out;
  out.m_ = 0.5 * (a + a.transpose());
  return out;
}

absl::StatusOr<SymMatrix> SymMatrix::FromDense(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("matrix is ", a.rows(), "x", a.cols(),
                                  ", expected square"));
  }
  if (!a.allFinite()) {
    return MakeError(ErrorKind::kInvalidInput, "matrix has non-finite entries");
  }
  return Symmetrize(a);
}

SymMatrix SymMatrix::Identity(int order) {
  SymMatrix out;
  out.m_ = Eigen::MatrixXd::Identity(order, order);
  return out;
}

SymMatrix SymMatrix::Diagonal(const Eigen::VectorXd& diagonal) {
  SymMatrix out;
  out.m_ = diagonal.asDiagonal();
  return out;
}

double SymMatrix::MaxAbs() const {
  return m_.size() == 0 ? 0.0 : m_.cwiseAbs().maxCoeff();
}

SymMatrix SymMatrix::operator+(const SymMatrix& other) const {
  SymMatrix out;
  out.m_ = m_ + other.m_;
  return out;
}

SymMatrix SymMatrix::operator-(const SymMatrix& other) const {
  SymMatrix out;
  out.m_ = m_ - other.m_;
  return out;
}

SymMatrix SymMatrix::operator*(double scale) const {
  SymMatrix out;
  out.m_ = m_ * scale;
  return out;
}

SymMatrix& SymMatrix::operator+=(const SymMatrix& other) {
  m_ += other.m_;
  return *this;
}

SymMatrix SpectralDecomposition::Reconstruct() const {
  return SymMatrix::Symmetrize(basis.transpose() * eigenvalues.asDiagonal() *
                               basis);
}

namespace {

double OffDiagonalNorm(const Eigen::MatrixXd& a) {
  double sum = 0.0;
  for (int j = 0; j < a.cols(); ++j) {
    for (int i = 0; i < a.rows(); ++i) {
      if (i != j) sum += a(i, j) * a(i, j);
    }
  }
  return std::sqrt(sum);
}

// Annihilates a(p, q) with a Givens rotation applied on both sides, and
// accumulates the rotation into the columns of v.
void Rotate(Eigen::MatrixXd& a, Eigen::MatrixXd& v, int p, int q) {
  const double apq = a(p, q);
  if (apq == 0.0) return;
  const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
  double t = 1.0 / (std::abs(theta) + std::sqrt(theta * theta + 1.0));
  if (theta < 0.0) t = -t;
  const double c = 1.0 / std::sqrt(t * t + 1.0);
  const double s = t * c;
  const int n = static_cast<int>(a.rows());
  for (int k = 0; k < n; ++k) {
    if (k == p || k == q) continue;
    const double akp = a(k, p);
    const double akq = a(k, q);
    a(k, p) = a(p, k) = c * akp - s * akq;
    a(k, q) = a(q, k) = s * akp + c * akq;
  }
  a(p, p) -= t * apq;
  a(q, q) += t * apq;
  a(p, q) = a(q, p) = 0.0;
  for (int k = 0; k < n; ++k) {
    const double vkp = v(k, p);
    const double vkq = v(k, q);
    v(k, p) = c * vkp - s * vkq;
    v(k, q) = s * vkp + c * vkq;
  }
}

}  // namespace

absl::StatusOr<SpectralDecomposition> SymEigen(const SymMatrix& a,
                                               const JacobiOptions& options) {
  if (!a.IsFinite()) {
    return MakeError(ErrorKind::kInvalidInput, "matrix has non-finite entries");
  }
  const int n = a.order();
  Eigen::MatrixXd work = a.dense();
  Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
  const double target = 1e-12 * work.norm();

  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(static_cast<size_t>(n) * (n > 0 ? n - 1 : 0) / 2);
  for (int p = 0; p < n; ++p) {
    for (int q = p + 1; q < n; ++q) pairs.emplace_back(p, q);
  }
  if (options.reverse_sweep) std::reverse(pairs.begin(), pairs.end());

  for (int sweep = 0; sweep < options.max_sweeps; ++sweep) {
    if (OffDiagonalNorm(work) <= target) break;
    // Threshold pass: early sweeps skip small entries.
    const double threshold =
        sweep < 3 ? 0.2 * OffDiagonalNorm(work) / (n * n) : 0.0;
    for (const auto& [p, q] : pairs) {
      const double apq = std::abs(work(p, q));
      if (apq == 0.0) continue;
      if (sweep > 3 && apq <= 1e-18 * std::abs(work(p, p)) &&
          apq <= 1e-18 * std::abs(work(q, q))) {
        work(p, q) = work(q, p) = 0.0;
        continue;
      }
      if (apq < threshold) continue;
      Rotate(work, v, p, q);
    }
  }

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&work](int i, int j) {
    return work(i, i) > work(j, j);
  });
  SpectralDecomposition out;
  out.eigenvalues.resize(n);
  out.basis.resize(n, n);
  for (int k = 0; k < n; ++k) {
    out.eigenvalues(k) = work(order[k], order[k]);
    out.basis.row(k) = v.col(order[k]).transpose();
  }
  return out;
}

double ClipTolerance(const Eigen::VectorXd& eigenvalues) {
  const double largest =
      eigenvalues.size() == 0 ? 0.0 : eigenvalues.cwiseAbs().maxCoeff();
  return 1e-10 * std::max(1.0, largest);
}

SymMatrix PsdPart(const SpectralDecomposition& decomposition) {
  const Eigen::VectorXd& lambda = decomposition.eigenvalues;
  const double tau = ClipTolerance(lambda);
  const int n = static_cast<int>(lambda.size());
  Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(n, n);
  for (int k = 0; k < n; ++k) {
    if (lambda(k) <= tau) continue;
    const Eigen::VectorXd o = decomposition.basis.row(k).transpose();
    sum.noalias() += lambda(k) * o * o.transpose();
  }
  return SymMatrix::Symmetrize(sum);
}

absl::StatusOr<SymMatrix> PsdPart(const SymMatrix& a,
                                  const JacobiOptions& options) {
  PRIVGP_ASSIGN_OR_RETURN(SpectralDecomposition decomposition,
                          SymEigen(a, options));
  return PsdPart(decomposition);
}

absl::StatusOr<double> MinEigenvalue(const SymMatrix& a) {
  if (a.order() == 0) {
    return MakeError(ErrorKind::kInvalidInput, "empty matrix");
  }
  PRIVGP_ASSIGN_OR_RETURN(SpectralDecomposition decomposition, SymEigen(a));
  return decomposition.eigenvalues(decomposition.eigenvalues.size() - 1);
}

absl::StatusOr<SpdFactor> SpdFactor::Compute(const SymMatrix& a,
                                             double jitter) {
  if (!a.IsFinite() || !std::isfinite(jitter) || jitter < 0.0) {
    return MakeError(ErrorKind::kInvalidInput,
                     "cholesky needs finite entries and jitter >= 0");
  }
  Eigen::MatrixXd shifted = a.dense();
  shifted.diagonal().array() += jitter;
  Eigen::LLT<Eigen::MatrixXd> llt(shifted);
  if (llt.info() != Eigen::Success || !llt.matrixLLT().allFinite()) {
    return MakeError(
        ErrorKind::kNotPositiveDefinite,
        absl::StrCat("matrix of order ", a.order(),
                     " is not positive definite (jitter ", jitter, ")"));
  }
  const double rcond = llt.rcond();
  return SpdFactor(std::move(llt), jitter, rcond, rcond);
}

absl::StatusOr<SpdFactor> SpdFactor::ComputeWithFallback(
    const SymMatrix& a, double relative_jitter, double rcond_floor) {
  absl::StatusOr<SpdFactor> plain = Compute(a, 0.0);
  if (plain.ok() && plain->rcond() >= rcond_floor) return plain;
  if (!plain.ok() &&
      !HasErrorKind(plain.status(), ErrorKind::kNotPositiveDefinite)) {
    return plain.status();
  }
  const double unjittered = plain.ok() ? plain->rcond() : 0.0;
  const double mean_diag =
      a.order() == 0 ? 0.0 : a.dense().diagonal().mean();
  const double jitter = relative_jitter * std::abs(mean_diag);
  PRIVGP_ASSIGN_OR_RETURN(SpdFactor jittered, Compute(a, jitter));
  jittered.unjittered_rcond_ = unjittered;
  return jittered;
}

Eigen::MatrixXd SpdFactor::Lower() const {
  return llt_.matrixL().toDenseMatrix();
}

Eigen::MatrixXd SpdFactor::Solve(const Eigen::MatrixXd& rhs) const {
  return llt_.solve(rhs);
}

Eigen::VectorXd SpdFactor::Solve(const Eigen::VectorXd& rhs) const {
  return llt_.solve(rhs);
}

Eigen::MatrixXd SpdFactor::SolveLower(const Eigen::MatrixXd& rhs) const {
  return llt_.matrixL().solve(rhs);
}

double SpdFactor::LogDeterminant() const {
  return 2.0 * llt_.matrixLLT().diagonal().array().log().sum();
}

absl::StatusOr<Eigen::MatrixXd> Cholesky(const SymMatrix& a, double jitter) {
  PRIVGP_ASSIGN_OR_RETURN(SpdFactor factor, SpdFactor::Compute(a, jitter));
  return factor.Lower();
}

absl::StatusOr<Eigen::MatrixXd> SolveSpd(const SymMatrix& a,
                                         const Eigen::MatrixXd& rhs,
                                         double jitter) {
  if (rhs.rows() != a.order()) {
    return MakeError(ErrorKind::kDimensionMismatch,
                     absl::StrCat("rhs has ", rhs.rows(), " rows, matrix order ",
                                  a.order()));
  }
  PRIVGP_ASSIGN_OR_RETURN(SpdFactor factor, SpdFactor::Compute(a, jitter));
  return factor.Solve(rhs);
}

}  // namespace privgp
