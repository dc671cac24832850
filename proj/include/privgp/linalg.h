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

// Dense symmetric linear algebra used throughout the library: a symmetric
// matrix value type, a cyclic Jacobi eigensolver, PSD projection by
// eigenvalue clipping, and Cholesky-based SPD solves.

#ifndef PRIVGP_LINALG_H_
#define PRIVGP_LINALG_H_

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/statusor.h"

namespace privgp {

using Point = Eigen::VectorXd;
using PointList = std::vector<Point>;

// A real symmetric matrix. Every constructor and arithmetic operation keeps
// entries(i, j) == entries(j, i) bit-for-bit.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int order) : m_(Eigen::MatrixXd::Zero(order, order)) {}

  // Returns (a + a^T) / 2. `a` must be square.
  static SymMatrix Symmetrize(const Eigen::MatrixXd& a);
  // Like Symmetrize, but rejects non-square or non-finite input.
  static absl::StatusOr<SymMatrix> FromDense(const Eigen::MatrixXd& a);
  static SymMatrix Identity(int order);
  static SymMatrix Diagonal(const Eigen::VectorXd& diagonal);

  int order() const { return static_cast<int>(m_.rows()); }
  const Eigen::MatrixXd& dense() const { return m_; }
  double operator()(int i, int j) const { return m_(i, j); }

  double Trace() const { return m_.trace(); }
  double MaxAbs() const;
  bool IsFinite() const { return m_.allFinite(); }

  SymMatrix operator+(const SymMatrix& other) const;
  SymMatrix operator-(const SymMatrix& other) const;
  SymMatrix operator*(double scale) const;
  SymMatrix& operator+=(const SymMatrix& other);

  friend bool operator==(const SymMatrix& a, const SymMatrix& b) {
    return a.m_.rows() == b.m_.rows() && a.m_ == b.m_;
  }

 private:
  Eigen::MatrixXd m_;
};

inline SymMatrix operator*(double scale, const SymMatrix& a) {
  return a * scale;
}

// A = basis^T * diag(eigenvalues) * basis. Rows of `basis` are orthonormal
// eigenvectors; eigenvalues are sorted in descending order.
struct SpectralDecomposition {
  Eigen::VectorXd eigenvalues;
  Eigen::MatrixXd basis;

  SymMatrix Reconstruct() const;
};

struct JacobiOptions {
  int max_sweeps = 100;
  // Sweep the (p, q) pairs in reverse order. Only changes the rotation
  // sequence, never the converged spectrum.
  bool reverse_sweep = false;
};

// Cyclic Jacobi eigenvalue algorithm. Stops once the off-diagonal Frobenius
// norm drops below 1e-12 * ||a||_F.
absl::StatusOr<SpectralDecomposition> SymEigen(const SymMatrix& a,
                                               const JacobiOptions& options = {});

// Clipping threshold used by PsdPart: 1e-10 * max(1, |lambda_max|).
double ClipTolerance(const Eigen::VectorXd& eigenvalues);

// PSD part A^+ = O^T diag(max(lambda, 0)) O. Eigenvalues at or below
// ClipTolerance are treated as zero.
absl::StatusOr<SymMatrix> PsdPart(const SymMatrix& a,
                                  const JacobiOptions& options = {});
SymMatrix PsdPart(const SpectralDecomposition& decomposition);

absl::StatusOr<double> MinEigenvalue(const SymMatrix& a);

// Cholesky factorization L L^T = a + jitter * I.
class SpdFactor {
 public:
  static absl::StatusOr<SpdFactor> Compute(const SymMatrix& a,
                                           double jitter = 0.0);

  // Factors `a` as is when it is numerically well conditioned. When the plain
  // factorization fails or its reciprocal condition estimate is below
  // `rcond_floor`, retries with jitter relative_jitter * mean(diag(a)).
  static absl::StatusOr<SpdFactor> ComputeWithFallback(
      const SymMatrix& a, double relative_jitter = 1e-10,
      double rcond_floor = 1e-12);

  int order() const { return static_cast<int>(llt_.rows()); }
  double jitter() const { return jitter_; }
  // Reciprocal condition number estimate (L1) of the factored matrix.
  double rcond() const { return rcond_; }
  // Reciprocal condition estimate of the matrix before any fallback jitter.
  double unjittered_rcond() const { return unjittered_rcond_; }

  Eigen::MatrixXd Lower() const;
  Eigen::MatrixXd Solve(const Eigen::MatrixXd& rhs) const;
  Eigen::VectorXd Solve(const Eigen::VectorXd& rhs) const;
  // Returns L^{-1} rhs.
  Eigen::MatrixXd SolveLower(const Eigen::MatrixXd& rhs) const;
  double LogDeterminant() const;

 private:
  SpdFactor(Eigen::LLT<Eigen::MatrixXd> llt, double jitter, double rcond,
            double unjittered_rcond)
      : llt_(std::move(llt)),
        jitter_(jitter),
        rcond_(rcond),
        unjittered_rcond_(unjittered_rcond) {}

  Eigen::LLT<Eigen::MatrixXd> llt_;
  double jitter_ = 0.0;
  double rcond_ = 0.0;
  double unjittered_rcond_ = 0.0;
};

// Lower-triangular L with L L^T = a + jitter * I.
absl::StatusOr<Eigen::MatrixXd> Cholesky(const SymMatrix& a,
                                         double jitter = 0.0);

absl::StatusOr<Eigen::MatrixXd> SolveSpd(const SymMatrix& a,
                                         const Eigen::MatrixXd& rhs,
                                         double jitter = 0.0);

}  // namespace privgp

#endif  // PRIVGP_LINALG_H_
