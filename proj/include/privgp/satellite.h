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

// Toy two-body Kepler propagator standing in for a satellite trajectory.
// Lengths are in Earth radii, time in orbital periods.

#ifndef PRIVGP_SATELLITE_H_
#define PRIVGP_SATELLITE_H_

#include <string>
#include <vector>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privgp/gp.h"
#include "privgp/privacy.h"
#include "privgp/serialization.h"

namespace privgp {

struct Segment {
  double lo = 0.0;
  double hi = 0.0;
};

struct OrbitParams {
  double eccentricity = 0.1;
  double semi_major_axis = 1.1;
  std::vector<Segment> private_segments;
};

enum class OrbitChannel {
  kRadius,
  // Unwrapped, so it grows by 2*pi per period.
  kTrueAnomaly,
  kRadialVelocity,
  kTangentialVelocity,
};

absl::string_view OrbitChannelName(OrbitChannel channel);
absl::StatusOr<OrbitChannel> OrbitChannelFromName(absl::string_view name);

// One segment [k + lo, k + hi] per period k that overlaps [t0, t1], clipped
// to the domain.
std::vector<Segment> PeriodicSegments(double t0, double t1, double lo = 0.4,
                                      double hi = 0.6);

absl::Status ValidateOrbit(const OrbitParams& params, double t0, double t1);

// Eccentric anomaly E with E - e sin E = m, by Newton iteration to 1e-12.
absl::StatusOr<double> SolveKepler(double mean_anomaly, double eccentricity);

// Channel value at time t (periods).
absl::StatusOr<double> OrbitState(const OrbitParams& params, double t,
                                  OrbitChannel channel);

// n evenly spaced times over [t0, t1].
absl::StatusOr<Dataset> GenerateOrbit(const OrbitParams& params, int n,
                                      double t0, double t1,
                                      OrbitChannel channel =
                                          OrbitChannel::kRadius);

// Kernel-based privacy specification covering the private segments, with H
// the given fraction of the model kernel.
KernelBased SegmentPrivacy(const std::vector<Segment>& segments,
                           double relative_scale, int points_per_segment);

Json SegmentsToJson(const std::vector<Segment>& segments);
absl::StatusOr<std::vector<Segment>> SegmentsFromJson(const Json& j);

}  // namespace privgp

#endif  // PRIVGP_SATELLITE_H_
