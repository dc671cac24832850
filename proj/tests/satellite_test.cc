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

#include "privgp/satellite.h"

#include <cmath>
#include <numbers>

#include "gtest/gtest.h"
#include "test_util.h"

namespace privgp {
namespace {

using ::privgp::testing::FailsWith;

TEST(SolveKeplerTest, ResidualVanishes) {
  for (double e : {0.0, 0.1, 0.5, 0.9, 0.99}) {
    for (double m = -10.0; m <= 10.0; m += 0.37) {
      ASSERT_OK_AND_ASSIGN(double ecc, SolveKepler(m, e));
      // Compare modulo 2 pi: the solver may reduce the mean anomaly.
      const double residual = std::remainder(ecc - e * std::sin(ecc) - m,
                                             2.0 * std::numbers::pi);
      EXPECT_LE(std::abs(residual), 1e-11) << "e = " << e << ", M = " << m;
    }
  }
  EXPECT_FALSE(SolveKepler(0.5, 1.0).ok());
  EXPECT_FALSE(SolveKepler(0.5, -0.1).ok());
}

TEST(OrbitTest, CircularOrbitIsConstant) {
  OrbitParams circle;
  circle.eccentricity = 0.0;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateOrbit(circle, 61, 0.0, 3.0));
  for (int i = 0; i < data.size(); ++i) EXPECT_NEAR(data.y(i), 1.1, 1e-15);
}

TEST(OrbitTest, PeriodicWithUnitPeriod) {
  const OrbitParams orbit;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateOrbit(orbit, 61, 0.0, 3.0));
  for (int i = 0; i < data.size(); ++i) {
    const double t = data.x[i](0);
    ASSERT_OK_AND_ASSIGN(double later, OrbitState(orbit, t + 1.0, OrbitChannel::kRadius));
    EXPECT_NEAR(data.y(i), later, 1e-10) << "t = " << t;
  }
}

TEST(OrbitTest, RadiusStaysBetweenApsides) {
  const OrbitParams orbit;
  ASSERT_OK_AND_ASSIGN(Dataset data, GenerateOrbit(orbit, 601, 0.0, 3.0));
  EXPECT_GE(data.y.minCoeff(), 1.1 * 0.9 - 1e-9);
  EXPECT_LE(data.y.maxCoeff(), 1.1 * 1.1 + 1e-9);
  // Perigee at integer times, apogee half a period later.
  EXPECT_NEAR(data.y(0), 1.1 * 0.9, 1e-12);
  EXPECT_NEAR(data.y(100), 1.1 * 1.1, 1e-12);
  EXPECT_NEAR(data.y(600), 1.1 * 0.9, 1e-12);
}

TEST(OrbitTest, EvenlySpacedAndDeterministic) {
  const OrbitParams orbit;
  ASSERT_OK_AND_ASSIGN(Dataset a, GenerateOrbit(orbit, 61, 0.0, 3.0));
  ASSERT_OK_AND_ASSIGN(Dataset b, GenerateOrbit(orbit, 61, 0.0, 3.0));
  ASSERT_EQ(a.size(), 61);
  EXPECT_EQ(a.x.front()(0), 0.0);
  EXPECT_EQ(a.x.back()(0), 3.0);
  EXPECT_NEAR(a.x[20](0), 1.0, 1e-15);
  EXPECT_EQ(a.y, b.y);
  EXPECT_FALSE(GenerateOrbit(orbit, 1, 0.0, 3.0).ok());
  EXPECT_FALSE(GenerateOrbit(orbit, 10, 3.0, 0.0).ok());
}

double Derivative(const OrbitParams& orbit, OrbitChannel channel, double t) {
  const double h = 1e-5;
  return (*OrbitState(orbit, t + h, channel) - *OrbitState(orbit, t - h, channel)) /
         (2.0 * h);
}

TEST(OrbitTest, VelocitiesMatchFiniteDifferences) {
  OrbitParams orbit;
  orbit.eccentricity = 0.3;
  for (double t = 0.05; t < 2.0; t += 0.13) {
    ASSERT_OK_AND_ASSIGN(double radial,
                         OrbitState(orbit, t, OrbitChannel::kRadialVelocity));
    ASSERT_OK_AND_ASSIGN(double tangential,
                         OrbitState(orbit, t, OrbitChannel::kTangentialVelocity));
    ASSERT_OK_AND_ASSIGN(double r, OrbitState(orbit, t, OrbitChannel::kRadius));
    EXPECT_NEAR(radial, Derivative(orbit, OrbitChannel::kRadius, t), 1e-6);
    EXPECT_NEAR(tangential, r * Derivative(orbit, OrbitChannel::kTrueAnomaly, t),
                1e-6);
  }
}

TEST(OrbitTest, TrueAnomalyIsUnwrapped) {
  const OrbitParams orbit;
  ASSERT_OK_AND_ASSIGN(Dataset nu,
                       GenerateOrbit(orbit, 301, 0.0, 3.0, OrbitChannel::kTrueAnomaly));
  for (int i = 1; i < nu.size(); ++i) EXPECT_GT(nu.y(i), nu.y(i - 1));
  EXPECT_NEAR(nu.y(nu.size() - 1) - nu.y(0), 6.0 * std::numbers::pi, 1e-9);
  // Angular momentum r^2 dnu/dt is conserved.
  const double h0 = std::pow(*OrbitState(orbit, 0.1, OrbitChannel::kRadius), 2) *
                    Derivative(orbit, OrbitChannel::kTrueAnomaly, 0.1);
  const double h1 = std::pow(*OrbitState(orbit, 0.7, OrbitChannel::kRadius), 2) *
                    Derivative(orbit, OrbitChannel::kTrueAnomaly, 0.7);
  EXPECT_NEAR(h0, h1, 1e-6);
}

TEST(OrbitTest, ValidatesParameters) {
  OrbitParams bad;
  bad.eccentricity = 1.0;
  EXPECT_FALSE(ValidateOrbit(bad, 0.0, 3.0).ok());
  bad = OrbitParams();
  bad.semi_major_axis = 1.0;
  EXPECT_FALSE(ValidateOrbit(bad, 0.0, 3.0).ok());
  bad = OrbitParams();
  bad.private_segments = {{2.5, 3.5}};
  EXPECT_FALSE(ValidateOrbit(bad, 0.0, 3.0).ok());
  OrbitParams ok;
  ok.private_segments = PeriodicSegments(0.0, 3.0);
  EXPECT_OK(ValidateOrbit(ok, 0.0, 3.0));
}

TEST(SegmentsTest, OnePerPeriodClippedToDomain) {
  const std::vector<Segment> full = PeriodicSegments(0.0, 3.0);
  ASSERT_EQ(full.size(), 3u);
  EXPECT_DOUBLE_EQ(full[1].lo, 1.4);
  EXPECT_DOUBLE_EQ(full[1].hi, 1.6);
  const std::vector<Segment> clipped = PeriodicSegments(0.5, 2.45);
  ASSERT_EQ(clipped.size(), 3u);
  EXPECT_DOUBLE_EQ(clipped[0].lo, 0.5);
  EXPECT_DOUBLE_EQ(clipped[2].hi, 2.45);
}

TEST(SegmentsTest, JsonRoundTrip) {
  const std::vector<Segment> segments = PeriodicSegments(0.0, 3.0);
  const Json j = SegmentsToJson(segments);
  ASSERT_TRUE(j.contains("private_segments"));
  ASSERT_OK_AND_ASSIGN(std::vector<Segment> back, SegmentsFromJson(j));
  ASSERT_EQ(back.size(), segments.size());
  for (size_t i = 0; i < back.size(); ++i) {
    EXPECT_EQ(back[i].lo, segments[i].lo);
    EXPECT_EQ(back[i].hi, segments[i].hi);
  }
  EXPECT_FALSE(SegmentsFromJson(Json::parse(R"({"private_segments":[[1,0]]})")).ok());
}

TEST(SegmentsTest, PrivacySpecCoversEverySegment) {
  const KernelBased spec = SegmentPrivacy(PeriodicSegments(0.0, 3.0), 0.1, 33);
  EXPECT_FALSE(spec.h.has_value());
  EXPECT_DOUBLE_EQ(spec.relative_scale, 0.1);
  const auto& region = std::get<GridRegion>(spec.region);
  EXPECT_EQ(region.boxes.size(), 3u);
  EXPECT_EQ(region.resolutions, std::vector<int>{33});
  ASSERT_OK_AND_ASSIGN(PointList points, GridPoints(region, 33));
  EXPECT_EQ(points.size(), 99u);
}

TEST(OrbitChannelTest, NamesRoundTrip) {
  for (OrbitChannel c : {OrbitChannel::kRadius, OrbitChannel::kTrueAnomaly,
                         OrbitChannel::kRadialVelocity,
                         OrbitChannel::kTangentialVelocity}) {
    ASSERT_OK_AND_ASSIGN(OrbitChannel back, OrbitChannelFromName(OrbitChannelName(c)));
    EXPECT_EQ(back, c);
  }
  EXPECT_FALSE(OrbitChannelFromName("altitude").ok());
}

}  // namespace
}  // namespace privgp
