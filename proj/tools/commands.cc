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

#include "commands.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "absl/strings/str_split.h"
#include "privgp/gp.h"
#include "privgp/kernels.h"
#include "privgp/sampling.h"
#include "privgp/status.h"
#include "spdlog/spdlog.h"

namespace privgp::cli {
namespace {

PointList Linspace(double lo, double hi, int n) {
  PointList out;
  for (int i = 0; i < n; ++i) {
    const double t = n == 1 ? lo : (i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
    out.push_back(Point::Constant(1, t));
  }
  return out;
}

PointList TenthsGrid() {
  PointList out;
  for (int i = 1; i <= 9; ++i) out.push_back(Point::Constant(1, i / 10.0));
  return out;
}

// Reads an optional field; leaves *value untouched when absent.
template <typename T>
absl::Status Optional(const Json& j, const char* key, T* value) {
  if (!j.contains(key)) return absl::OkStatus();
  const Json& field = j.at(key);
  bool ok = false;
  if constexpr (std::is_same_v<T, bool>) {
    ok = field.is_boolean();
  } else if constexpr (std::is_integral_v<T>) {
    ok = field.is_number_integer();
  } else if constexpr (std::is_floating_point_v<T>) {
    ok = field.is_number();
  } else {
    ok = field.is_string();
  }
  if (!ok) {
    return MakeError(ErrorKind::kInvalidInput,
                     absl::StrCat("config field '", key, "' has the wrong type"));
  }
  *value = field.get<T>();
  return absl::OkStatus();
}

absl::Status OptionalPoints(const Json& j, const char* key, PointList* value) {
  if (!j.contains(key)) return absl::OkStatus();
  PRIVGP_ASSIGN_OR_RETURN(*value, PointsFromJson(j.at(key)));
  return absl::OkStatus();
}

absl::Status OptionalDoubles(const Json& j, const char* key,
                             std::vector<double>* value) {
  if (!j.contains(key)) return absl::OkStatus();
  PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd v, VectorFromJson(j.at(key)));
  value->assign(v.data(), v.data() + v.size());
  return absl::OkStatus();
}

absl::StatusOr<Json> ConfigOrEmpty(const CommonOptions& options) {
  if (options.config_path.empty()) return Json::object();
  return ReadJsonFile(options.config_path);
}

SdpOptions SdpFrom(const CommonOptions& options) {
  SdpOptions sdp;
  if (options.tol.has_value()) sdp.tol = *options.tol;
  return sdp;
}

absl::StatusOr<GpModel> ExampleModel(double theta) {
  GpModel model;
  PRIVGP_ASSIGN_OR_RETURN(model.kernel,
                          KernelSpec::SquaredExponential(1.0, theta, 1));
  return model;
}

// Posterior variances with zero responses; only the inputs matter.
absl::StatusOr<Eigen::VectorXd> VarianceCurve(const GpModel& model,
                                              const PointList& x,
                                              const SymMatrix* sigma,
                                              const PointList& query) {
  Dataset data{x, Eigen::VectorXd::Zero(static_cast<int>(x.size()))};
  PRIVGP_ASSIGN_OR_RETURN(PredictiveDistribution p,
                          Posterior(model, data, sigma, query));
  return p.Variances();
}

std::vector<std::string> InputLabels(const PointList& x) {
  std::vector<std::string> out;
  for (const Point& p : x) {
    std::string label;
    for (int a = 0; a < p.size(); ++a) {
      absl::StrAppend(&label, a == 0 ? "" : ";", FormatDouble(p(a)));
    }
    out.push_back(label);
  }
  return out;
}

Eigen::MatrixXd Columns(const PointList& x,
                        const std::vector<Eigen::VectorXd>& values) {
  Eigen::MatrixXd out(static_cast<int>(x.size()), 1 + values.size());
  for (int i = 0; i < out.rows(); ++i) out(i, 0) = x[i](0);
  for (size_t k = 0; k < values.size(); ++k) out.col(k + 1) = values[k];
  return out;
}

Json SolverSummary(const NoiseCovariance& noise) {
  Json out{{"provenance", std::string(ProvenanceName(noise.provenance))},
           {"trace", noise.trace},
           {"warnings", noise.warnings}};
  if (noise.solver_status.has_value()) {
    out["solver_status"] = std::string(SdpStatusName(*noise.solver_status));
  }
  return out;
}

std::string Tag(double relative_scale) {
  return absl::StrFormat("h%g", relative_scale);
}

}  // namespace

absl::Status WriteTable(const CommonOptions& options, const std::string& stem,
                        const std::vector<std::string>& header,
                        const Eigen::MatrixXd& rows) {
  std::filesystem::path dir(options.out_dir);
  if (options.format == OutputFormat::kJson) {
    Json j{{"columns", header}, {"rows", MatrixToJson(rows)}};
    return WriteFile((dir / (stem + ".json")).string(), j.dump(1) + "\n");
  }
  return WriteFile((dir / (stem + ".csv")).string(), MatrixToCsv(header, rows));
}

absl::Status WriteJson(const CommonOptions& options, const std::string& name,
                       const Json& j) {
  const std::string path = (std::filesystem::path(options.out_dir) / name).string();
  spdlog::debug("writing {}", path);
  return WriteFile(path, j.dump(2) + "\n");
}

Json ErrorToJson(const absl::Status& status) {
  std::optional<ErrorKind> kind = ErrorKindOf(status);
  Json out{{"message", std::string(status.message())},
           {"code", absl::StatusCodeToString(status.code())}};
  if (kind.has_value()) out["kind"] = std::string(ErrorKindName(*kind));
  return Json{{"error", out}};
}

// ---------------------------------------------------------------- example1

absl::StatusOr<Example1Settings> Example1SettingsFromJson(const Json& j) {
  Example1Settings settings;
  settings.x = TenthsGrid();
  PRIVGP_RETURN_IF_ERROR(OptionalPoints(j, "x", &settings.x));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "theta", &settings.theta));
  if (j.contains("s")) {
    PRIVGP_ASSIGN_OR_RETURN(settings.s, PointFromJson(j.at("s")));
  }
  PRIVGP_RETURN_IF_ERROR(Optional(j, "xi", &settings.xi));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "curve_points", &settings.curve_points));
  return settings;
}

absl::StatusOr<Example1Result> RunExample1(const Example1Settings& settings,
                                           const SdpOptions& sdp) {
  PRIVGP_ASSIGN_OR_RETURN(GpModel model, ExampleModel(settings.theta));
  const PointList& x = settings.x;
  Example1Result result;
  PRIVGP_ASSIGN_OR_RETURN(result.proposed,
                          SingleSensitiveNoise(model, x, settings.s, settings.xi));
  PRIVGP_ASSIGN_OR_RETURN(
      result.diagonal,
      DiagonalNoise(model, x, {settings.s}, {settings.xi}, sdp));

  const PointList at_s = {settings.s};
  PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd v,
                          VarianceCurve(model, x, &result.proposed.sigma, at_s));
  result.var_at_s = v(0);
  PRIVGP_ASSIGN_OR_RETURN(v, VarianceCurve(model, x, nullptr, at_s));
  result.unsecured_var_at_s = v(0);
  PRIVGP_ASSIGN_OR_RETURN(v, VarianceCurve(model, x, &result.diagonal.sigma, at_s));
  result.diagonal_var_at_s = v(0);

  const PointList grid = Linspace(0.0, 1.0, settings.curve_points);
  PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd diag,
                          VarianceCurve(model, x, &result.diagonal.sigma, grid));
  PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd proposed,
                          VarianceCurve(model, x, &result.proposed.sigma, grid));
  PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd unsecured,
                          VarianceCurve(model, x, nullptr, grid));
  result.curves = Columns(grid, {diag, proposed, unsecured});
  return result;
}

absl::Status Example1(const CommonOptions& options) {
  PRIVGP_ASSIGN_OR_RETURN(Json config, ConfigOrEmpty(options));
  PRIVGP_ASSIGN_OR_RETURN(Example1Settings settings,
                          Example1SettingsFromJson(config));
  PRIVGP_ASSIGN_OR_RETURN(Example1Result result,
                          RunExample1(settings, SdpFrom(options)));
  PRIVGP_RETURN_IF_ERROR(WriteTable(options, "sigma_opt",
                                    InputLabels(settings.x),
                                    result.proposed.sigma.dense()));
  PRIVGP_RETURN_IF_ERROR(WriteTable(
      options, "noise_variances", {"x", "diagonal", "proposed"},
      Columns(settings.x, {result.diagonal.sigma.dense().diagonal(),
                           result.proposed.sigma.dense().diagonal()})));
  PRIVGP_RETURN_IF_ERROR(WriteTable(options, "variance_curves",
                                    {"x", "diagonal", "proposed", "unsecured"},
                                    result.curves));
  Json summary{{"trace_opt", result.proposed.trace},
               {"trace_diag", result.diagonal.trace},
               {"var_at_s", result.var_at_s},
               {"unsecured_var_at_s", result.unsecured_var_at_s},
               {"diagonal_var_at_s", result.diagonal_var_at_s},
               {"xi", settings.xi},
               {"diagonal_solver", SolverSummary(result.diagonal)}};
  spdlog::info("example1: trace_opt={} trace_diag={} var_at_s={}",
               result.proposed.trace, result.diagonal.trace, result.var_at_s);
  return WriteJson(options, "summary.json", summary);
}

// ---------------------------------------------------------------- example2

absl::StatusOr<Example2Settings> Example2SettingsFromJson(const Json& j) {
  Example2Settings settings;
  settings.x = TenthsGrid();
  settings.s = {Point::Constant(1, 0.4), Point::Constant(1, 0.6)};
  const double lo = 0.1704;
  for (int k = 1; k <= 20; ++k) {
    settings.c_grid.push_back(k == 20 ? 0.5 : lo + (0.5 - lo) * k / 20.0);
  }
  PRIVGP_RETURN_IF_ERROR(OptionalPoints(j, "x", &settings.x));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "theta", &settings.theta));
  PRIVGP_RETURN_IF_ERROR(OptionalPoints(j, "s", &settings.s));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "xi", &settings.xi));
  PRIVGP_RETURN_IF_ERROR(OptionalDoubles(j, "c_grid", &settings.c_grid));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "c_curve", &settings.c_curve));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "curve_points", &settings.curve_points));
  if (settings.s.size() != 2) {
    return MakeError(ErrorKind::kInvalidInput,
                     "example2 uses exactly two sensitive inputs");
  }
  return settings;
}

absl::StatusOr<Example2Result> RunExample2(const Example2Settings& settings,
                                           const SdpOptions& sdp) {
  PRIVGP_ASSIGN_OR_RETURN(GpModel model, ExampleModel(settings.theta));
  const PointList& x = settings.x;
  const auto tolerance = [&](double c) {
    Eigen::MatrixXd xi(2, 2);
    xi << settings.xi, c, c, settings.xi;
    return xi;
  };

  Example2Result result;
  PRIVGP_ASSIGN_OR_RETURN(
      result.weak,
      WeakNoise(model, x, settings.s, {settings.xi, settings.xi}, sdp));
  for (double c : settings.c_grid) {
    absl::StatusOr<NoiseCovariance> strong =
        StrongNoise(model, x, settings.s, tolerance(c));
    if (!strong.ok()) {
      return WithContext(strong.status(), absl::StrFormat("c=%g", c));
    }
    result.strong_traces.push_back(strong->trace);
  }
  PRIVGP_ASSIGN_OR_RETURN(
      result.strong_curve,
      StrongNoise(model, x, settings.s, tolerance(settings.c_curve)));
  PRIVGP_ASSIGN_OR_RETURN(
      result.difference_min_eigenvalue,
      MinEigenvalue(result.strong_curve.sigma - result.weak.sigma));

  PRIVGP_ASSIGN_OR_RETURN(
      result.weak_variances,
      VarianceCurve(model, x, &result.weak.sigma, settings.s));
  PRIVGP_ASSIGN_OR_RETURN(
      result.strong_variances,
      VarianceCurve(model, x, &result.strong_curve.sigma, settings.s));

  const PointList grid = Linspace(0.0, 1.0, settings.curve_points);
  PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd weak,
                          VarianceCurve(model, x, &result.weak.sigma, grid));
  PRIVGP_ASSIGN_OR_RETURN(
      Eigen::VectorXd strong,
      VarianceCurve(model, x, &result.strong_curve.sigma, grid));
  result.curves = Columns(grid, {weak, strong});
  return result;
}

absl::Status Example2(const CommonOptions& options) {
  PRIVGP_ASSIGN_OR_RETURN(Json config, ConfigOrEmpty(options));
  PRIVGP_ASSIGN_OR_RETURN(Example2Settings settings,
                          Example2SettingsFromJson(config));
  PRIVGP_ASSIGN_OR_RETURN(Example2Result result,
                          RunExample2(settings, SdpFrom(options)));
  const int m = static_cast<int>(settings.c_grid.size());
  Eigen::MatrixXd traces(m, 3);
  for (int k = 0; k < m; ++k) {
    traces.row(k) << settings.c_grid[k], result.strong_traces[k],
        result.weak.trace;
  }
  PRIVGP_RETURN_IF_ERROR(
      WriteTable(options, "traces", {"c", "strong", "weak"}, traces));
  PRIVGP_RETURN_IF_ERROR(WriteTable(options, "variance_curves",
                                    {"x", "weak", "strong"}, result.curves));
  Json summary{{"weak_trace", result.weak.trace},
               {"c_curve", settings.c_curve},
               {"strong_trace_at_c_curve", result.strong_curve.trace},
               {"difference_min_eigenvalue", result.difference_min_eigenvalue},
               {"weak_variances", VectorToJson(result.weak_variances)},
               {"strong_variances", VectorToJson(result.strong_variances)},
               {"weak_solver", SolverSummary(result.weak)}};
  spdlog::info("example2: weak trace={} strong({})={}", result.weak.trace,
               settings.c_curve, result.strong_curve.trace);
  return WriteJson(options, "summary.json", summary);
}

// ---------------------------------------------------------------- example3

absl::StatusOr<Example3Settings> Example3SettingsFromJson(const Json& j) {
  Example3Settings settings;
  PRIVGP_RETURN_IF_ERROR(Optional(j, "theta0", &settings.theta0));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "boundary_samples",
                                  &settings.boundary_samples));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "probe_grid", &settings.probe_grid));
  if (j.contains("dimensions")) {
    if (!j.at("dimensions").is_array()) {
      return MakeError(ErrorKind::kInvalidInput, "'dimensions' must be a list");
    }
    settings.dimensions = j.at("dimensions").get<std::vector<int>>();
  }
  if (!(settings.theta0 > 0.0) || settings.probe_grid < 2 ||
      settings.boundary_samples < 1) {
    return MakeError(ErrorKind::kInvalidInput, "bad example3 settings");
  }
  return settings;
}

Example3Result RunExample3(const Example3Settings& settings) {
  const double theta0 = settings.theta0;
  const int g = settings.probe_grid;
  const int b = settings.boundary_samples;
  const int dims = static_cast<int>(settings.dimensions.size());
  Example3Result result;
  result.boundary.resize(dims * b, 4);
  result.probes.resize(dims * g * g, 5);
  // Probe spacing puts c = 1 and theta = theta0 on the grid.
  const double ticks = g - 5;
  int brow = 0;
  int prow = 0;
  for (int d : settings.dimensions) {
    for (int i = 0; i < b; ++i) {
      const double c = static_cast<double>(i) / b;
      result.boundary.row(brow++) << d, c, std::pow(c, 2.0 / d) * theta0,
          theta0;
    }
    const KernelSpec k = *KernelSpec::SquaredExponential(1.0, theta0, d);
    for (int i = 0; i < g; ++i) {
      for (int jj = 1; jj <= g; ++jj) {
        const double c = i / ticks;
        const double theta = theta0 * jj / ticks;
        const bool closed_form =
            c < 1.0 && std::pow(c, 2.0 / d) * theta0 <= theta && theta <= theta0;
        const bool valid =
            ValidatePair(k, *KernelSpec::SquaredExponential(c, theta, d)).valid;
        if (valid != closed_form) ++result.disagreements;
        result.probes.row(prow++) << d, c, theta, valid ? 1 : 0,
            closed_form ? 1 : 0;
      }
    }
  }
  return result;
}

absl::Status Example3(const CommonOptions& options) {
  PRIVGP_ASSIGN_OR_RETURN(Json config, ConfigOrEmpty(options));
  PRIVGP_ASSIGN_OR_RETURN(Example3Settings settings,
                          Example3SettingsFromJson(config));
  Example3Result result = RunExample3(settings);
  PRIVGP_RETURN_IF_ERROR(WriteTable(options, "boundary",
                                    {"d", "c", "theta_lo", "theta_hi"},
                                    result.boundary));
  PRIVGP_RETURN_IF_ERROR(WriteTable(
      options, "probes", {"d", "c", "theta", "valid", "closed_form"},
      result.probes));
  Json summary{{"theta0", settings.theta0},
               {"probes", result.probes.rows()},
               {"disagreements", result.disagreements}};
  return WriteJson(options, "summary.json", summary);
}

// ---------------------------------------------------------------- Satellite

absl::StatusOr<SatelliteSettings> SatelliteSettingsFromJson(const Json& j) {
  SatelliteSettings s;
  PRIVGP_RETURN_IF_ERROR(Optional(j, "eccentricity", &s.orbit.eccentricity));
  PRIVGP_RETURN_IF_ERROR(
      Optional(j, "semi_major_axis", &s.orbit.semi_major_axis));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "n", &s.n));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "t0", &s.t0));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "t1", &s.t1));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "theta", &s.theta));
  PRIVGP_RETURN_IF_ERROR(OptionalDoubles(j, "relative_scales",
                                         &s.relative_scales));
  PRIVGP_RETURN_IF_ERROR(
      Optional(j, "points_per_segment", &s.points_per_segment));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "dense_points", &s.dense_points));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "outside_margin", &s.outside_margin));
  PRIVGP_RETURN_IF_ERROR(Optional(j, "seed", &s.seed));
  if (j.contains("channel")) {
    std::string name;
    PRIVGP_RETURN_IF_ERROR(Optional(j, "channel", &name));
    PRIVGP_ASSIGN_OR_RETURN(s.channel, OrbitChannelFromName(name));
  }
  if (j.contains("private_segments")) {
    PRIVGP_ASSIGN_OR_RETURN(s.orbit.private_segments,
                            SegmentsFromJson(j.at("private_segments")));
  }
  if (s.orbit.private_segments.empty()) {
    s.orbit.private_segments = PeriodicSegments(s.t0, s.t1);
  }
  return s;
}

absl::StatusOr<SatelliteResult> RunSatellite(const SatelliteSettings& settings,
                                             const NoiseOptions& noise) {
  SatelliteResult result;
  PRIVGP_ASSIGN_OR_RETURN(result.data,
                          GenerateOrbit(settings.orbit, settings.n, settings.t0,
                                        settings.t1, settings.channel));
  const std::vector<Segment>& segments = settings.orbit.private_segments;
  if (segments.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "no private segments");
  }
  PRIVGP_ASSIGN_OR_RETURN(KernelSpec correlation,
                          KernelSpec::SquaredExponential(1.0, settings.theta, 1));

  const PointList grid =
      Linspace(settings.t0, settings.t1, settings.dense_points);
  std::vector<int> location(grid.size());
  for (size_t i = 0; i < grid.size(); ++i) {
    const double t = grid[i](0);
    double distance = std::numeric_limits<double>::infinity();
    for (const Segment& s : segments) {
      distance = std::min(distance, std::max({s.lo - t, t - s.hi, 0.0}));
    }
    location[i] = distance == 0.0 ? 1
                  : distance >= settings.outside_margin ? 0
                                                        : -1;
  }

  for (double scale : settings.relative_scales) {
    PipelineConfig config;
    config.fit = FitSettings{correlation, IntrinsicNoise::None()};
    config.privacy =
        SegmentPrivacy(segments, scale, settings.points_per_segment);
    config.seed = settings.seed;
    config.noise_options = noise;
    absl::StatusOr<ReleasedModel> released = RunOnDataset(config, result.data);
    if (!released.ok()) {
      return WithContext(released.status(), absl::StrCat("H=", scale, "K"));
    }

    SatelliteCase out;
    out.relative_scale = scale;
    out.released = *std::move(released);
    const GpModel& model = out.released.model;
    PRIVGP_ASSIGN_OR_RETURN(PredictiveDistribution secured,
                            Predict(out.released, grid));
    PRIVGP_ASSIGN_OR_RETURN(PredictiveDistribution unsecured,
                            Posterior(model, result.data, nullptr, grid));
    const double prior = model.kernel.amplitude();
    const Eigen::VectorXd var = secured.Variances();
    const Eigen::VectorXd var0 = unsecured.Variances();

    out.band.resize(static_cast<int>(grid.size()), 8);
    out.inside_margin = std::numeric_limits<double>::infinity();
    double width_in = 0.0, width_out = 0.0;
    int count_in = 0, count_out = 0;
    for (int i = 0; i < out.band.rows(); ++i) {
      const double sd = std::sqrt(std::max(var(i), 0.0));
      const double sd0 = std::sqrt(std::max(var0(i), 0.0));
      out.band.row(i) << grid[i](0), secured.mean(i),
          secured.mean(i) - 2.0 * sd, secured.mean(i) + 2.0 * sd,
          unsecured.mean(i), unsecured.mean(i) - 2.0 * sd0,
          unsecured.mean(i) + 2.0 * sd0, location[i];
      if (location[i] == 1) {
        out.inside_margin = std::min(out.inside_margin, var(i) - scale * prior);
        width_in += 2.0 * sd;
        ++count_in;
      } else if (location[i] == 0) {
        out.outside_std_change =
            std::max(out.outside_std_change, std::abs(sd - sd0) / std::sqrt(prior));
        width_out += 2.0 * sd;
        ++count_out;
      }
    }
    out.mean_half_width_inside = count_in > 0 ? width_in / count_in : 0.0;
    out.mean_half_width_outside = count_out > 0 ? width_out / count_out : 0.0;
    result.cases.push_back(std::move(out));
  }
  return result;
}

absl::Status Satellite(const CommonOptions& options) {
  PRIVGP_ASSIGN_OR_RETURN(Json config, ConfigOrEmpty(options));
  PRIVGP_ASSIGN_OR_RETURN(SatelliteSettings settings,
                          SatelliteSettingsFromJson(config));
  if (options.seed.has_value()) settings.seed = *options.seed;
  NoiseOptions noise;
  noise.sdp = SdpFrom(options);
  PRIVGP_ASSIGN_OR_RETURN(SatelliteResult result, RunSatellite(settings, noise));

  const std::filesystem::path dir(options.out_dir);
  PRIVGP_RETURN_IF_ERROR(WriteDatasetCsv(
      result.data, (dir / "satellite_data.csv").string()));
  PRIVGP_RETURN_IF_ERROR(WriteJson(options, "segments.json",
                                   SegmentsToJson(settings.orbit.private_segments)));
  Json report = Json::array();
  for (const SatelliteCase& c : result.cases) {
    const std::string tag = Tag(c.relative_scale);
    Dataset obfuscated{c.released.x, c.released.w};
    PRIVGP_RETURN_IF_ERROR(WriteDatasetCsv(
        obfuscated, (dir / ("obfuscated_" + tag + ".csv")).string()));
    PRIVGP_RETURN_IF_ERROR(WriteTable(
        options, "band_" + tag,
        {"t", "mean", "lower", "upper", "unsecured_mean", "unsecured_lower",
         "unsecured_upper", "inside"},
        c.band));
    PRIVGP_RETURN_IF_ERROR(SaveReleasedModel(
        c.released, (dir / ("released_" + tag + ".json")).string()));
    report.push_back(
        {{"relative_scale", c.relative_scale},
         {"fitted_mean", c.released.model.mean},
         {"fitted_variance", c.released.model.kernel.amplitude()},
         {"sigma_trace", c.released.sigma.trace},
         {"inside_floor_margin", c.inside_margin},
         {"outside_std_change", c.outside_std_change},
         {"mean_band_half_width_inside", c.mean_half_width_inside},
         {"mean_band_half_width_outside", c.mean_half_width_outside}});
    spdlog::info("satellite H={}K: trace={} inside margin={} outside change={}",
                 c.relative_scale, c.released.sigma.trace, c.inside_margin,
                 c.outside_std_change);
  }
  return WriteJson(options, "report.json",
                   Json{{"channel", std::string(OrbitChannelName(settings.channel))},
                        {"outside_margin", settings.outside_margin},
                        {"cases", report}});
}

// ------------------------------------------------------------ Generic tools

absl::Status Fit(const CommonOptions& options, const std::string& data_path,
                 std::optional<double> theta) {
  PRIVGP_ASSIGN_OR_RETURN(Dataset data, ReadDatasetCsv(data_path));
  PRIVGP_ASSIGN_OR_RETURN(Json config, ConfigOrEmpty(options));
  FitSettings fit;
  if (config.contains("correlation")) {
    PRIVGP_ASSIGN_OR_RETURN(fit.correlation,
                            KernelFromJson(config.at("correlation")));
  } else {
    PRIVGP_ASSIGN_OR_RETURN(
        fit.correlation,
        KernelSpec::SquaredExponential(1.0, theta.value_or(1.0),
                                       data.dimension()));
  }
  if (config.contains("noise")) {
    PRIVGP_ASSIGN_OR_RETURN(fit.noise_shape, NoiseFromJson(config.at("noise")));
  }
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix shape,
                          fit.noise_shape.Materialize(data.size()));
  PRIVGP_ASSIGN_OR_RETURN(
      ConstantMeanFit result,
      FitConstantMeanAndVariance(data.x, data.y, fit.correlation, &shape));
  result.model.noise = fit.noise_shape.Scaled(result.variance);
  Json out{{"model", ModelToJson(result.model)},
           {"mean", result.mean},
           {"variance", result.variance},
           {"degenerate", result.degenerate}};
  if (!result.degenerate) {
    PRIVGP_ASSIGN_OR_RETURN(double lml,
                            LogMarginalLikelihood(result.model, data));
    out["log_marginal_likelihood"] = lml;
  }
  return WriteJson(options, "model.json", out);
}

absl::Status SolveNoise(const CommonOptions& options) {
  if (options.config_path.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "solve-noise needs --config");
  }
  PRIVGP_ASSIGN_OR_RETURN(PipelineConfig config,
                          LoadPipelineConfig(options.config_path));
  PRIVGP_ASSIGN_OR_RETURN(Dataset data, ReadDatasetCsv(config.dataset_path));
  PRIVGP_ASSIGN_OR_RETURN(GpModel model, TrainModel(config, data));
  if (options.tol.has_value()) config.noise_options.sdp.tol = *options.tol;
  PRIVGP_ASSIGN_OR_RETURN(
      NoiseCovariance noise,
      ComputeNoise(model, data.x, config.privacy, config.noise_options));
  PRIVGP_RETURN_IF_ERROR(WriteTable(options, "sigma", InputLabels(data.x),
                                    noise.sigma.dense()));
  return WriteJson(options, "noise.json", NoiseCovarianceToJson(noise));
}

absl::Status ObfuscateData(const CommonOptions& options,
                           const std::string& data_path,
                           const std::string& noise_path) {
  PRIVGP_ASSIGN_OR_RETURN(Dataset data, ReadDatasetCsv(data_path));
  PRIVGP_ASSIGN_OR_RETURN(Json noise_json, ReadJsonFile(noise_path));
  PRIVGP_ASSIGN_OR_RETURN(NoiseCovariance noise,
                          NoiseCovarianceFromJson(noise_json));
  PRIVGP_ASSIGN_OR_RETURN(NoiseDraw draw,
                          SampleNoise(noise.sigma, options.seed.value_or(0)));
  PRIVGP_ASSIGN_OR_RETURN(Eigen::VectorXd w, Obfuscate(data.y, draw));
  Dataset out{data.x, w};
  return WriteDatasetCsv(
      out, (std::filesystem::path(options.out_dir) / "obfuscated.csv").string());
}

absl::Status PredictReleased(const CommonOptions& options,
                             const std::string& model_path,
                             const std::string& points_path,
                             const std::string& grid) {
  PRIVGP_ASSIGN_OR_RETURN(ReleasedModel released, LoadReleasedModel(model_path));
  PointList query;
  if (!grid.empty()) {
    std::vector<std::string> parts = absl::StrSplit(grid, ':');
    double lo, hi;
    int n;
    if (parts.size() != 3 || !absl::SimpleAtod(parts[0], &lo) ||
        !absl::SimpleAtod(parts[1], &hi) || !absl::SimpleAtoi(parts[2], &n) ||
        n < 1) {
      return MakeError(ErrorKind::kInvalidInput,
                       "--grid must look like LO:HI:N");
    }
    query = Linspace(lo, hi, n);
  } else {
    // Reuse the dataset reader by appending a dummy response column.
    PRIVGP_ASSIGN_OR_RETURN(std::string text, ReadFile(points_path));
    std::string with_y;
    bool header = true;
    for (absl::string_view line : absl::StrSplit(text, '\n')) {
      if (line.empty()) continue;
      absl::StrAppend(&with_y, line, header ? ",y\n" : ",0\n");
      header = false;
    }
    PRIVGP_ASSIGN_OR_RETURN(Dataset points, DatasetFromCsv(with_y));
    query = points.x;
  }
  PRIVGP_ASSIGN_OR_RETURN(PredictiveDistribution p, Predict(released, query));
  const int d = static_cast<int>(query[0].size());
  std::vector<std::string> header;
  for (int a = 0; a < d; ++a) header.push_back(absl::StrCat("x_", a + 1));
  header.push_back("mean");
  header.push_back("variance");
  Eigen::MatrixXd rows(static_cast<int>(query.size()), d + 2);
  const Eigen::VectorXd var = p.Variances();
  for (int i = 0; i < rows.rows(); ++i) {
    rows.row(i).head(d) = query[i].transpose();
    rows(i, d) = p.mean(i);
    rows(i, d + 1) = var(i);
  }
  return WriteTable(options, "predictions", header, rows);
}

absl::Status Pipeline(const CommonOptions& options) {
  if (options.config_path.empty()) {
    return MakeError(ErrorKind::kInvalidInput, "pipeline needs --config");
  }
  PRIVGP_ASSIGN_OR_RETURN(PipelineConfig config,
                          LoadPipelineConfig(options.config_path));
  if (options.seed.has_value()) config.seed = *options.seed;
  if (options.tol.has_value()) config.noise_options.sdp.tol = *options.tol;
  if (config.output_path.empty()) {
    config.output_path =
        (std::filesystem::path(options.out_dir) / "released.json").string();
  }
  PRIVGP_ASSIGN_OR_RETURN(ReleasedModel released, Run(config));
  spdlog::info("pipeline: released {} points, trace(sigma)={}, written to {}",
               released.x.size(), released.sigma.trace, config.output_path);
  return absl::OkStatus();
}

}  // namespace privgp::cli
