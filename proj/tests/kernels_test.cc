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
#include <numbers>
#include <random>

#include "gtest/gtest.h"
#include "test_util.h"

namespace privgp {
namespace {

using ::privgp::testing::FailsWith;
using ::privgp::testing::OracleMinEigenvalue;
using ::privgp::testing::Points1d;
using ::privgp::testing::SqExp;

Point P1(double v) { return Point::Constant(1, v); }

TEST(KernelSpecTest, RejectsBadParameters) {
  EXPECT_TRUE(FailsWith(KernelSpec::SquaredExponential(-1, 1, 1),
                        ErrorKind::kInvalidInput));
  EXPECT_TRUE(FailsWith(KernelSpec::SquaredExponential(1, 0, 1),
                        ErrorKind::kInvalidInput));
  EXPECT_TRUE(FailsWith(KernelSpec::SquaredExponential(1, 1, 0),
                        ErrorKind::kInvalidInput));
  EXPECT_TRUE(FailsWith(KernelSpec::ScaledCopy(1.0, SqExp(1, 1)),
                        ErrorKind::kInvalidInput));
  EXPECT_TRUE(FailsWith(KernelSpec::ScaledCopy(-0.1, SqExp(1, 1)),
                        ErrorKind::kInvalidInput));
}

TEST(EvalTest, KnownValues) {
  const KernelSpec k = SqExp(1.0, 10.0);
  EXPECT_EQ(k(P1(0.3), P1(0.3)), 1.0);
  ASSERT_OK_AND_ASSIGN(double v, Eval(k, P1(0.4), P1(0.6)));
  EXPECT_NEAR(v, std::exp(-0.4), 1e-15);
  EXPECT_NEAR(v, 0.670320, 1e-6);
  ASSERT_OK_AND_ASSIGN(v, Eval(SqExp(1.0, 200.0), P1(0.0), P1(0.1)));
  EXPECT_NEAR(v, std::exp(-2.0), 1e-15);
}

TEST(EvalTest, DimensionMismatch) {
  EXPECT_TRUE(FailsWith(Eval(SqExp(1, 1, 2), P1(0), P1(0)),
                        ErrorKind::kDimensionMismatch));
}

TEST(EvalTest, ScaledCopyMultipliesBase) {
  ASSERT_OK_AND_ASSIGN(KernelSpec h,
                       KernelSpec::ScaledCopy(0.25, SqExp(2.0, 3.0)));
  EXPECT_NEAR(h(P1(0.1), P1(0.5)), 0.25 * 2.0 * std::exp(-3.0 * 0.16), 1e-15);
  EXPECT_EQ(h.amplitude(), 0.5);
  EXPECT_EQ(h.theta(), 3.0);
}

TEST(EvalTest, SymmetricWithAmplitudeOnDiagonal) {
  std::mt19937_64 rng(1);
  const KernelSpec k = SqExp(1.7, 4.0, 3);
  const PointList p = testing::RandomPoints(rng, 20, 3, -1, 1);
  for (const Point& a : p) {
    EXPECT_EQ(k(a, a), 1.7);
    for (const Point& b : p) EXPECT_EQ(k(a, b), k(b, a));
  }
}

TEST(GramTest, ExampleMatrices) {
  ASSERT_OK_AND_ASSIGN(SymMatrix g,
                       Gram(SqExp(1.0, 10.0), Points1d({0.4, 0.6})));
  EXPECT_EQ(g(0, 0), 1.0);
  EXPECT_NEAR(g(0, 1), std::exp(-0.4), 1e-15);

  ASSERT_OK_AND_ASSIGN(g, Gram(SqExp(1.0, 10.0), testing::TenthsGrid()));
  EXPECT_EQ(g.order(), 9);
  EXPECT_EQ(g.dense().diagonal(), Eigen::VectorXd::Ones(9));
  EXPECT_EQ(g.dense(), g.dense().transpose());
  EXPECT_GT(OracleMinEigenvalue(g.dense()), 0.0);

  ASSERT_OK_AND_ASSIGN(Eigen::MatrixXd cross,
                       Gram(SqExp(2.5, 1.0), Points1d({0.0}), Points1d({0.0})));
  EXPECT_EQ(cross(0, 0), 2.5);
}

TEST(FourierTest, ClosedFormValues) {
  ASSERT_OK_AND_ASSIGN(double v, Fourier(SqExp(1.0, 0.5), P1(0.0)));
  EXPECT_NEAR(v, 1.0, 1e-15);
  ASSERT_OK_AND_ASSIGN(v, Fourier(SqExp(1.0, 10.0), P1(0.0)));
  EXPECT_NEAR(v, 1.0 / std::sqrt(20.0), 1e-15);
}

// (2 pi)^{-1/2} int R(x) cos(w x) dx by composite Simpson on [-L, L].
double NumericalTransform(const KernelSpec& k, double omega) {
  const int n = 20000;
  const double lo = -12.0, hi = 12.0, h = (hi - lo) / n;
  double sum = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = lo + i * h;
    const double w = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
    sum += w * k.Profile(std::abs(x)) * std::cos(omega * x);
  }
  return sum * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
}

TEST(FourierTest, MatchesNumericalTransform) {
  for (double theta : {0.5, 2.0, 10.0}) {
    const KernelSpec k = SqExp(0.8, theta);
    for (double omega : {0.0, 0.7, 2.0, 5.0}) {
      ASSERT_OK_AND_ASSIGN(double v, Fourier(k, P1(omega)));
      EXPECT_NEAR(v, NumericalTransform(k, omega), 1e-6)
          << "theta=" << theta << " omega=" << omega;
      EXPECT_GT(v, 0.0);
    }
  }
}

TEST(FourierTest, SeparableInHigherDimensions) {
  // exp(-theta |x|^2) factorizes over coordinates, so its transform does too.
  const KernelSpec k2 = SqExp(1.0, 3.0, 2);
  const KernelSpec k1 = SqExp(1.0, 3.0, 1);
  Point omega(2);
  omega << 0.8, -1.3;
  ASSERT_OK_AND_ASSIGN(double v2, Fourier(k2, omega));
  ASSERT_OK_AND_ASSIGN(double a, Fourier(k1, P1(0.8)));
  ASSERT_OK_AND_ASSIGN(double b, Fourier(k1, P1(-1.3)));
  EXPECT_NEAR(v2, a * b, 1e-15);
}

TEST(ValidatePairTest, ClosedFormExamples) {
  const KernelSpec k = SqExp(1.0, 10.0);
  EXPECT_TRUE(ValidatePair(k, SqExp(0.5, 10.0)).valid);
  EXPECT_FALSE(ValidatePair(k, SqExp(0.5, 2.0)).valid);
  EXPECT_TRUE(ValidatePair(k, SqExp(0.5, 2.5)).valid);
  for (double theta : {0.5, 5.0, 10.0, 20.0}) {
    Validity v = ValidatePair(k, SqExp(1.0, theta));
    EXPECT_FALSE(v.valid);
    EXPECT_FALSE(v.reason.empty());
  }
  EXPECT_FALSE(ValidatePair(k, SqExp(0.5, 10.5)).valid);
  EXPECT_FALSE(ValidatePair(k, SqExp(0.5, 10.0, 2)).valid);
  // With amplitude c0 on K the relevant ratio is c / c0.
  EXPECT_TRUE(ValidatePair(SqExp(2.0, 10.0), SqExp(1.0, 10.0)).valid);
}

TEST(ValidatePairTest, ScaledCopies) {
  const KernelSpec k = SqExp(1.0, 10.0);
  EXPECT_TRUE(ValidatePair(k, *KernelSpec::ScaledCopy(0.0, k)).valid);
  EXPECT_TRUE(ValidatePair(k, *KernelSpec::ScaledCopy(0.99, k)).valid);
}

TEST(ValidatePairTest, ValidPairsGivePositiveDefiniteDifference) {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int trial = 0; trial < 60; ++trial) {
    const int d = 1 + trial % 3;
    const double theta0 = 5.0 + 10.0 * u(rng);
    const double c = 0.9 * u(rng);
    const double lower = std::pow(c, 2.0 / d) * theta0;
    const double theta = lower + (theta0 - lower) * u(rng);
    const KernelSpec k = SqExp(1.0, theta0, d);
    const KernelSpec h = SqExp(c, theta, d);
    ASSERT_TRUE(ValidatePair(k, h).valid);
    EXPECT_TRUE(FourierDominates(k, h, 30.0, 301));

    // Points on a jittered lattice keep the difference well conditioned.
    PointList s;
    for (int i = 0; i < 6; ++i) {
      Point p = Point::Constant(d, 0.0);
      p(0) = 0.5 * i + 0.1 * u(rng);
      if (d > 1) p(1) = 0.1 * u(rng);
      s.push_back(p);
    }
    ASSERT_OK_AND_ASSIGN(SymMatrix ks, Gram(k, s));
    ASSERT_OK_AND_ASSIGN(SymMatrix hs, Gram(h, s));
    EXPECT_GT(OracleMinEigenvalue((ks - hs).dense()), 0.0);
  }
}

TEST(FourierDominatesTest, DetectsViolations) {
  const KernelSpec k = SqExp(1.0, 10.0);
  EXPECT_FALSE(FourierDominates(k, SqExp(0.5, 2.0), 30.0, 301));
  EXPECT_FALSE(FourierDominates(k, SqExp(0.5, 15.0), 30.0, 301));
  EXPECT_FALSE(FourierDominates(k, k, 30.0, 301));
}

}  // namespace
}  // namespace privgp
