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

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "absl/strings/str_cat.h"
#include "privgp/status.h"

namespace privgp {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Anomaly {
  double eccentric;
  double factor;  // 1 - e cos E
};

absl::StatusOr<Anomaly> EccentricAt(const OrbitParams& params, double t) {
  const double e = params.eccentricity;
  const double m = kTwoPi * t;
  // Solve on the reduced anomaly so every period converges identically.
  const double turns = std::round(m / kTwoPi);
  PRIVGP_ASSIGN_OR_RETURN(double reduced, SolveKepler(m - kTwoPi * turns, e));
  const double eccentric = reduced + kTwoPi * turns;
  return Anomaly{eccentric, 1.0 - e * std::cos(reduced)};
}

}  // namespace

absl::string_view OrbitChannelName(OrbitChannel channel) {
  switch (channel) {
    case OrbitChannel::kRadius:
      return "radius";
    case OrbitChannel::kTrueAnomaly:
      return "true_anomaly";
    case OrbitChannel::kRadialVelocity:
      return "radial_velocity";
    case OrbitChannel::kTangentialVelocity:
      return "tangential_velocity";
  }
  return "radius";
}

absl::StatusOr<OrbitChannel> OrbitChannelFromName(absl::string_view name) {
  for (OrbitChannel c :
       {OrbitChannel::kRadius, OrbitChannel::kTrueAnomaly,
        OrbitChannel::kRadialVelocity, OrbitChannel::kTangentialVelocity}) {
    if (OrbitChannelName(c) == name) return c;
  }
  return MakeError(ErrorKind::kInvalidInput,
                   absl::StrCat("unknown orbit channel '", name, "'"));
}

std::vector<Segment> PeriodicSegments(double t0, double t1, double lo,
                                      double hi) {
  std::vector<Segment> out;
  for (double k = std::floor(t0); k <= t1; k += 1.0) {
    const double a = std::max(t0, k + lo);
    const double b = std::min(t1, k + hi);
    if (a < b) out.push_back({a, b});
  }
  return out;
}

absl::Status ValidateOrbit(const OrbitParams& params, double t0, double t1) {
  if (!(params.eccentricity >= 0.0 && params.eccentricity < 1.0)) {
    return MakeError(ErrorKind::kInvalidInput,
                     "eccentricity must lie in [0, 1)");
  }
  if (!(params.semi_major_axis > 1.0) || !std::isfinite(params.semi_major_axis)) {
    return MakeError(ErrorKind::kInvalidInput,
                     "semi-major axis must exceed one Earth radius");
  }
  if (!(t0 < t1) || !std::isfinite(t0) || !std::isfinite(t1)) {
    return MakeError(ErrorKind::kInvalidInput, "need a finite domain t0 < t1");
  }
  for (const Segment& s : params.private_segments) {
    if (!(s.lo < s.hi) || s.lo < t0 || s.hi > t1) {
      return MakeError(ErrorKind::kInvalidInput,
                       absl::StrCat("private segment [", s.lo, ", ", s.hi,
                                    "] is empty or leaves [", t0, ", ", t1,
                                    "]"));
    }
  }
  return absl::OkStatus();
}

absl::StatusOr<double> SolveKepler(double mean_anomaly, double eccentricity) {
  if (!(eccentricity >= 0.0 && eccentricity < 1.0) ||
      !std::isfinite(mean_anomaly)) {
    return MakeError(ErrorKind::kInvalidInput,
                     "Kepler's equation needs 0 <= e < 1 and finite M");
  }
  // Newton from E = M can cycle for |M| > pi; iterate on the reduced anomaly.
  const double turns = std::round(mean_anomaly / kTwoPi);
  const double m = mean_anomaly - kTwoPi * turns;
  double e_anomaly =
      eccentricity > 0.8 ? std::copysign(std::numbers::pi, m) : m;
  for (int iter = 0; iter < 100; ++iter) {
    const double step =
        (e_anomaly - eccentricity * std::sin(e_anomaly) - m) /
        (1.0 - eccentricity * std::cos(e_anomaly));
    e_anomaly -= step;
    if (std::abs(step) <= 1e-12 * std::max(1.0, std::abs(e_anomaly))) {
      return e_anomaly + kTwoPi * turns;
    }
  }
  return MakeError(ErrorKind::kInvariantViolation,
                   "Kepler iteration did not converge in 100 steps");
}

absl::StatusOr<double> OrbitState(const OrbitParams& params, double t,
                                  OrbitChannel channel) {
  PRIVGP_ASSIGN_OR_RETURN(Anomaly anomaly, EccentricAt(params, t));
  const double e = params.eccentricity;
  const double a = params.semi_major_axis;
  const double root = std::sqrt(1.0 - e * e);
  switch (channel) {
    case OrbitChannel::kRadius:
      return a * anomaly.factor;
    case OrbitChannel::kTrueAnomaly: {
      // Continuous in E, unlike 2 atan(sqrt((1+e)/(1-e)) tan(E/2)).
      const double beta = e / (1.0 + root);
      const double ecc = anomaly.eccentric;
      return ecc + 2.0 * std::atan2(beta * std::sin(ecc),
                                    1.0 - beta * std::cos(ecc));
    }
    case OrbitChannel::kRadialVelocity:
      return kTwoPi * a * e * std::sin(anomaly.eccentric) / anomaly.factor;
    case OrbitChannel::kTangentialVelocity:
      return kTwoPi * a * root / anomaly.factor;
  }
  return a * anomaly.factor;
}

absl::StatusOr<Dataset> GenerateOrbit(const OrbitParams& params, int n,
                                      double t0, double t1,
                                      OrbitChannel channel) {
  if (n < 2) {
    return MakeError(ErrorKind::kInvalidInput, "need at least two samples");
  }
  PRIVGP_RETURN_IF_ERROR(ValidateOrbit(params, t0, t1));
  Dataset data;
  data.y.resize(n);
  for (int i = 0; i < n; ++i) {
    const double t = i == n - 1 ? t1 : t0 + (t1 - t0) * i / (n - 1);
    data.x.push_back(Point::Constant(1, t));
    PRIVGP_ASSIGN_OR_RETURN(data.y(i), OrbitState(params, t, channel));
  }
  return data;
}

KernelBased SegmentPrivacy(const std::vector<Segment>& segments,
                           double relative_scale, int points_per_segment) {
  GridRegion region;
  for (const Segment& s : segments) {
    region.boxes.push_back({Point::Constant(1, s.lo), Point::Constant(1, s.hi)});
  }
  region.resolutions = {points_per_segment};
  KernelBased spec;
  spec.relative_scale = relative_scale;
  spec.region = std::move(region);
  return spec;
}

Json SegmentsToJson(const std::vector<Segment>& segments) {
  Json out = Json::array();
  for (const Segment& s : segments) out.push_back(Json::array({s.lo, s.hi}));
  return Json{{"private_segments", out}};
}

absl::StatusOr<std::vector<Segment>> SegmentsFromJson(const Json& j) {
  const Json* list = &j;
  if (j.is_object() && j.contains("private_segments")) {
    list = &j.at("private_segments");
  }
  if (!list->is_array()) {
    return MakeError(ErrorKind::kInvalidInput,
                     "segments must be a list of [lo, hi] pairs");
  }
  std::vector<Segment> out;
  for (const Json& pair : *list) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number() ||
        !pair[1].is_number()) {
      return MakeError(ErrorKind::kInvalidInput,
                       "segments must be a list of [lo, hi] pairs");
    }
    const Segment segment{pair[0].get<double>(), pair[1].get<double>()};
    if (!std::isfinite(segment.lo) || !std::isfinite(segment.hi) ||
        segment.hi < segment.lo) {
      return MakeError(ErrorKind::kInvalidInput,
                       absl::StrCat("segment [", segment.lo, ", ", segment.hi,
                                    "] needs finite bounds with lo <= hi"));
    }
    out.push_back(segment);
  }
  return out;
}

}  // namespace privgp
