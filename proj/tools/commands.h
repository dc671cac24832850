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

// Subcommands of the privgp tool. Each reads its inputs, writes plot data or
// artifacts under an output directory, and reports failures as a Status.

#ifndef PRIVGP_TOOLS_COMMANDS_H_
#define PRIVGP_TOOLS_COMMANDS_H_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privgp/linalg.h"
#include "privgp/pipeline.h"
#include "privgp/privacy.h"
#include "privgp/satellite.h"
#include "privgp/serialization.h"

namespace privgp::cli {

enum class OutputFormat { kCsv, kJson };

struct CommonOptions {
  std::string config_path;
  std::optional<uint64_t> seed;
  std::string out_dir = ".";
  // Overrides the SDP duality-gap tolerance.
  std::optional<double> tol;
  OutputFormat format = OutputFormat::kCsv;
};

// Writes <stem>.csv (one header row) or <stem>.json ({"columns", "rows"}).
absl::Status WriteTable(const CommonOptions& options, const std::string& stem,
                        const std::vector<std::string>& header,
                        const Eigen::MatrixXd& rows);
absl::Status WriteJson(const CommonOptions& options, const std::string& name,
                       const Json& j);

// Error document printed on stderr by the tool.
Json ErrorToJson(const absl::Status& status);

// example1 subcommand: nine inputs, one sensitive input.
struct Example1Settings {
  PointList x;  // defaults to i/10, i = 1..9
  double theta = 10.0;
  Point s = Point::Constant(1, 0.5);
  double xi = 0.5;
  int curve_points = 201;
};

struct Example1Result {
  NoiseCovariance proposed;
  NoiseCovariance diagonal;
  double var_at_s = 0.0;
  double unsecured_var_at_s = 0.0;
  double diagonal_var_at_s = 0.0;
  // Columns: x, diagonal, proposed, unsecured.
  Eigen::MatrixXd curves;
};

absl::StatusOr<Example1Settings> Example1SettingsFromJson(const Json& j);
absl::StatusOr<Example1Result> RunExample1(const Example1Settings& settings,
                                           const SdpOptions& sdp);
absl::Status Example1(const CommonOptions& options);

// example2 subcommand: two sensitive inputs, weak versus strong formulations.
struct Example2Settings {
  PointList x;
  double theta = 10.0;
  PointList s;  // defaults to {0.4, 0.6}
  double xi = 0.5;
  // Off-diagonal tolerances; defaults to 20 values over (0.1704, 0.5].
  std::vector<double> c_grid;
  double c_curve = 0.45;
  int curve_points = 201;
};

struct Example2Result {
  NoiseCovariance weak;
  std::vector<double> strong_traces;
  NoiseCovariance strong_curve;
  // Smallest eigenvalue of sigma_strong(c_curve) - sigma_weak.
  double difference_min_eigenvalue = 0.0;
  // Posterior variances at the sensitive inputs.
  Eigen::VectorXd weak_variances;
  Eigen::VectorXd strong_variances;
  // Columns: x, weak, strong.
  Eigen::MatrixXd curves;
};

absl::StatusOr<Example2Settings> Example2SettingsFromJson(const Json& j);
absl::StatusOr<Example2Result> RunExample2(const Example2Settings& settings,
                                           const SdpOptions& sdp);
absl::Status Example2(const CommonOptions& options);

// example3 subcommand: validity region of a squared-exponential pair.
struct Example3Settings {
  double theta0 = 10.0;
  std::vector<int> dimensions = {1, 2, 3};
  int boundary_samples = 50;
  int probe_grid = 30;
};

struct Example3Result {
  // Columns: d, c, theta_lo, theta_hi.
  Eigen::MatrixXd boundary;
  // Columns: d, c, theta, valid, closed_form.
  Eigen::MatrixXd probes;
  int disagreements = 0;
};

absl::StatusOr<Example3Settings> Example3SettingsFromJson(const Json& j);
Example3Result RunExample3(const Example3Settings& settings);
absl::Status Example3(const CommonOptions& options);

// Satellite study on the Kepler stand-in.
struct SatelliteSettings {
  OrbitParams orbit;  // segments default to [k + 0.4, k + 0.6]
  OrbitChannel channel = OrbitChannel::kRadius;
  int n = 61;
  double t0 = 0.0;
  double t1 = 3.0;
  double theta = 200.0;
  std::vector<double> relative_scales = {0.1, 0.5};
  int points_per_segment = 33;
  int dense_points = 601;
  // Probes at least this far from every private segment count as outside.
  double outside_margin = 0.2;
  uint64_t seed = 0;
};

struct SatelliteCase {
  double relative_scale = 0.0;
  ReleasedModel released;
  // Columns: t, mean, lower, upper, unsecured_mean, unsecured_lower,
  // unsecured_upper, inside (1/0/-1 for inside / outside / neither).
  Eigen::MatrixXd band;
  // min over inside probes of variance - relative_scale * prior variance.
  double inside_margin = 0.0;
  // max over outside probes of |std - unsecured std| / prior std.
  double outside_std_change = 0.0;
  double mean_half_width_inside = 0.0;
  double mean_half_width_outside = 0.0;
};

struct SatelliteResult {
  Dataset data;
  std::vector<SatelliteCase> cases;
};

absl::StatusOr<SatelliteSettings> SatelliteSettingsFromJson(const Json& j);
absl::StatusOr<SatelliteResult> RunSatellite(const SatelliteSettings& settings,
                                             const NoiseOptions& noise);
absl::Status Satellite(const CommonOptions& options);

// Generic wrappers.
absl::Status Fit(const CommonOptions& options, const std::string& data_path,
                 std::optional<double> theta);
absl::Status SolveNoise(const CommonOptions& options);
absl::Status ObfuscateData(const CommonOptions& options,
                           const std::string& data_path,
                           const std::string& noise_path);
absl::Status PredictReleased(const CommonOptions& options,
                             const std::string& model_path,
                             const std::string& points_path,
                             const std::string& grid);
absl::Status Pipeline(const CommonOptions& options);

}  // namespace privgp::cli

#endif  // PRIVGP_TOOLS_COMMANDS_H_
