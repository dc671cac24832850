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

#include <cmath>
#include <limits>
#include <random>

#include "gtest/gtest.h"
#include "privgp/kernels.h"
#include "test_util.h"

namespace privgp {
namespace {

using ::privgp::testing::FailsWith;
using ::privgp::testing::OracleMinEigenvalue;
using ::privgp::testing::OraclePsdPart;
using ::privgp::testing::RandomSymmetric;
using ::privgp::testing::WithSpectrum;

double MaxAbsDiff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

TEST(SymMatrixTest, SymmetrizeAveragesTranspose) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 4, 3;
  SymMatrix s = SymMatrix::Symmetrize(a);
  EXPECT_EQ(s(0, 1), 3.0);
  EXPECT_EQ(s(1, 0), 3.0);
  EXPECT_EQ(s.Trace(), 4.0);
}

TEST(SymMatrixTest, FromDenseRejectsBadInput) {
  EXPECT_TRUE(FailsWith(SymMatrix::FromDense(Eigen::MatrixXd::Zero(2, 3)),
                        ErrorKind::kDimensionMismatch));
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  a(0, 1) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_TRUE(FailsWith(SymMatrix::FromDense(a), ErrorKind::kInvalidInput));
}

TEST(SymEigenTest, Identity) {
  ASSERT_OK_AND_ASSIGN(SpectralDecomposition d,
                       SymEigen(SymMatrix::Identity(3)));
  EXPECT_EQ(d.eigenvalues, Eigen::VectorXd::Ones(3));
  EXPECT_LE(MaxAbsDiff(d.basis.transpose() * d.basis,
                       Eigen::MatrixXd::Identity(3, 3)),
            1e-10);
}

TEST(SymEigenTest, DiagonalIsSortedDescending) {
  Eigen::VectorXd diag(2);
  diag << -1, 2;
  ASSERT_OK_AND_ASSIGN(SpectralDecomposition d,
                       SymEigen(SymMatrix::Diagonal(diag)));
  EXPECT_EQ(d.eigenvalues(0), 2.0);
  EXPECT_EQ(d.eigenvalues(1), -1.0);
  EXPECT_LE(MaxAbsDiff(d.basis.cwiseAbs(),
                       (Eigen::MatrixXd(2, 2) << 0, 1, 1, 0).finished()),
            1e-15);
}

TEST(SymEigenTest, RejectsNonFinite) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
  a(1, 1) = std::numeric_limits<double>::infinity();
  EXPECT_TRUE(FailsWith(SymEigen(SymMatrix::Symmetrize(a)),
                        ErrorKind::kInvalidInput));
}

TEST(SymEigenTest, EmptyMatrix) {
  ASSERT_OK_AND_ASSIGN(SpectralDecomposition d, SymEigen(SymMatrix(0)));
  EXPECT_EQ(d.eigenvalues.size(), 0);
}

TEST(SymEigenTest, MatchesEigenSolverOnRandomMatrices) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const int n = 1 + trial % 12;
    const double scale = std::pow(10.0, (trial % 7) - 3);
    SymMatrix a = RandomSymmetric(rng, n, scale);
    ASSERT_OK_AND_ASSIGN(SpectralDecomposition d, SymEigen(a));
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(a.dense());
    const double norm = std::max(1.0, a.MaxAbs());
    for (int i = 0; i < n; ++i) {
      EXPECT_NEAR(d.eigenvalues(i), oracle.eigenvalues()(n - 1 - i),
                  1e-10 * norm);
      if (i > 0) {
        EXPECT_GE(d.eigenvalues(i - 1), d.eigenvalues(i));
      }
    }
    EXPECT_LE(MaxAbsDiff(d.basis * d.basis.transpose(),
                         Eigen::MatrixXd::Identity(n, n)),
              1e-10);
    EXPECT_LE(MaxAbsDiff(d.Reconstruct().dense(), a.dense()), 1e-8 * norm);
  }
}

TEST(SymEigenTest, RepeatedEigenvalues) {
  std::mt19937_64 rng(3);
  Eigen::VectorXd spectrum(6);
  spectrum << 2, 2, 2, -1, -1, 0;
  SymMatrix a = WithSpectrum(rng, spectrum);
  ASSERT_OK_AND_ASSIGN(SpectralDecomposition d, SymEigen(a));
  EXPECT_NEAR(d.eigenvalues(0), 2.0, 1e-12);
  EXPECT_NEAR(d.eigenvalues(2), 2.0, 1e-12);
  EXPECT_NEAR(d.eigenvalues(5), -1.0, 1e-12);
  EXPECT_LE(MaxAbsDiff(d.Reconstruct().dense(), a.dense()), 1e-12);
}

TEST(PsdPartTest, HandWorkedTwoByTwo) {
  Eigen::MatrixXd a(2, 2);
  a << 1, 2, 2, 1;
  ASSERT_OK_AND_ASSIGN(SymMatrix p, PsdPart(SymMatrix::Symmetrize(a)));
  EXPECT_LE(MaxAbsDiff(p.dense(), 1.5 * Eigen::MatrixXd::Ones(2, 2)), 1e-14);
}

TEST(PsdPartTest, FixedPointAndZeroCases) {
  std::mt19937_64 rng(5);
  Eigen::VectorXd spectrum(4);
  spectrum << 3, 1, 0.5, 0;
  SymMatrix psd = WithSpectrum(rng, spectrum);
  ASSERT_OK_AND_ASSIGN(SymMatrix p, PsdPart(psd));
  EXPECT_LE(MaxAbsDiff(p.dense(), psd.dense()), 1e-8);

  ASSERT_OK_AND_ASSIGN(SymMatrix z, PsdPart(psd * -1.0));
  EXPECT_EQ(z.MaxAbs(), 0.0);
}

TEST(PsdPartTest, RoundoffEigenvaluesAreClipped) {
  std::mt19937_64 rng(8);
  Eigen::VectorXd spectrum(3);
  spectrum << 1.0, 1e-13, -1e-13;
  ASSERT_OK_AND_ASSIGN(SpectralDecomposition d,
                       SymEigen(WithSpectrum(rng, spectrum)));
  SymMatrix p = PsdPart(d);
  ASSERT_OK_AND_ASSIGN(SpectralDecomposition dp, SymEigen(p));
  EXPECT_NEAR(dp.eigenvalues(1), 0.0, 1e-15);
  EXPECT_EQ(ClipTolerance(spectrum), 1e-10);
}

// Dominance, idempotence, trace and independence of the rotation order, on
// random symmetric input.
TEST(PsdPartTest, Properties) {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 60; ++trial) {
    const int n = 2 + trial % 9;
    SymMatrix a = RandomSymmetric(rng, n);
    ASSERT_OK_AND_ASSIGN(SymMatrix p, PsdPart(a));
    const double tol = 1e-10 * std::max(1.0, a.MaxAbs());
    EXPECT_GE(OracleMinEigenvalue(p.dense()), -tol);
    EXPECT_GE(OracleMinEigenvalue((p - a).dense()), -1e-9);

    ASSERT_OK_AND_ASSIGN(SymMatrix pp, PsdPart(p));
    EXPECT_LE(MaxAbsDiff(pp.dense(), p.dense()), 1e-8);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> oracle(a.dense());
    EXPECT_NEAR(p.Trace(), oracle.eigenvalues().cwiseMax(0.0).sum(), 1e-8);
    EXPECT_LE(MaxAbsDiff(p.dense(), OraclePsdPart(a.dense())), 1e-8);

    JacobiOptions reversed;
    reversed.reverse_sweep = true;
    ASSERT_OK_AND_ASSIGN(SymMatrix p_rev, PsdPart(a, reversed));
    EXPECT_LE(MaxAbsDiff(p_rev.dense(), p.dense()), 1e-8);
  }
}

TEST(MinEigenvalueTest, MatchesOracle) {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 20; ++trial) {
    SymMatrix a = RandomSymmetric(rng, 5);
    ASSERT_OK_AND_ASSIGN(double m, MinEigenvalue(a));
    EXPECT_NEAR(m, OracleMinEigenvalue(a.dense()), 1e-10);
  }
}

TEST(CholeskyTest, HandCases) {
  ASSERT_OK_AND_ASSIGN(Eigen::MatrixXd l, Cholesky(SymMatrix::Identity(3)));
  EXPECT_EQ(l, Eigen::MatrixXd::Identity(3, 3));
  Eigen::VectorXd diag(2);
  diag << 4, 9;
  ASSERT_OK_AND_ASSIGN(l, Cholesky(SymMatrix::Diagonal(diag)));
  EXPECT_EQ(l(0, 0), 2.0);
  EXPECT_EQ(l(1, 1), 3.0);
  EXPECT_EQ(l(1, 0), 0.0);
}

TEST(CholeskyTest, ExampleKernelMatrixFactorsWithoutJitter) {
  ASSERT_OK_AND_ASSIGN(SymMatrix k, Gram(testing::SqExp(1.0, 10.0),
                                         testing::TenthsGrid()));
  ASSERT_OK_AND_ASSIGN(Eigen::MatrixXd l, Cholesky(k));
  EXPECT_LE(MaxAbsDiff(l * l.transpose(), k.dense()), 1e-8);
}

TEST(CholeskyTest, JitterIsAddedToDiagonal) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(2, 2);
  EXPECT_TRUE(FailsWith(Cholesky(SymMatrix::Symmetrize(-a)),
                        ErrorKind::kNotPositiveDefinite));
  ASSERT_OK_AND_ASSIGN(Eigen::MatrixXd l,
                       Cholesky(SymMatrix::Symmetrize(a), 0.5));
  EXPECT_LE(MaxAbsDiff(l * l.transpose(),
                       a + 0.5 * Eigen::MatrixXd::Identity(2, 2)),
            1e-14);
}

TEST(SolveSpdTest, RelativeResidual) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 2 + trial % 10;
    Eigen::VectorXd spectrum = Eigen::VectorXd::LinSpaced(n, 1e-3, 10.0);
    SymMatrix a = WithSpectrum(rng, spectrum);
    Eigen::MatrixXd rhs = RandomSymmetric(rng, n).dense().leftCols(2);
    ASSERT_OK_AND_ASSIGN(Eigen::MatrixXd x, SolveSpd(a, rhs));
    EXPECT_LE((a.dense() * x - rhs).norm(), 1e-8 * rhs.norm());
  }
}

TEST(SpdFactorTest, FallbackEngagesOnNearSingularInput) {
  Eigen::MatrixXd a = Eigen::MatrixXd::Ones(3, 3);
  a.diagonal().array() += 1e-15;
  ASSERT_OK_AND_ASSIGN(SpdFactor f,
                       SpdFactor::ComputeWithFallback(SymMatrix::Symmetrize(a)));
  EXPECT_NEAR(f.jitter(), 1e-10, 1e-12);
  EXPECT_LT(f.unjittered_rcond(), 1e-12);

  ASSERT_OK_AND_ASSIGN(SpdFactor plain,
                       SpdFactor::ComputeWithFallback(SymMatrix::Identity(3)));
  EXPECT_EQ(plain.jitter(), 0.0);
  EXPECT_NEAR(plain.LogDeterminant(), 0.0, 1e-15);
}

TEST(SpdFactorTest, LogDeterminantMatchesOracle) {
  std::mt19937_64 rng(9);
  Eigen::VectorXd spectrum(4);
  spectrum << 0.1, 2.0, 3.0, 7.0;
  SymMatrix a = WithSpectrum(rng, spectrum);
  ASSERT_OK_AND_ASSIGN(SpdFactor f, SpdFactor::Compute(a));
  EXPECT_NEAR(f.LogDeterminant(), std::log(0.1 * 2 * 3 * 7), 1e-12);
  Eigen::MatrixXd l = f.Lower();
  EXPECT_LE(MaxAbsDiff(f.SolveLower(l), Eigen::MatrixXd::Identity(4, 4)),
            1e-12);
}

}  // namespace
}  // namespace privgp
