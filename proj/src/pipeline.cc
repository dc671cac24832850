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

#include "privgp/pipeline.h"

#include <algorithm>
#include <filesystem>
#include <string>
#include <utility>

#include "absl/strings/str_cat.h"
#include "absl/strings/str_format.h"
#include "privgp/sampling.h"
#include "privgp/status.h"

namespace privgp {
namespace {

uint64_t Fnv1a(const std::string& bytes) {
  uint64_t hash = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    hash ^= c;
    hash *= 0x100000001b3ULL;
  }
  return hash;
}

std::string ResolvePath(const std::string& path, const std::string& base_dir) {
  if (path.empty() || base_dir.empty()) return path;
  std::filesystem::path p(path);
  if (p.is_absolute()) return path;
  return (std::filesystem::path(base_dir) / p).lexically_normal().string();
}

absl::Status Invariant(absl::string_view message) {
  return MakeError(ErrorKind::kInvariantViolation, message);
}

}  // namespace

absl::StatusOr<GpModel> TrainModel(const PipelineConfig& config,
                                   const Dataset& data) {
  PRIVGP_RETURN_IF_ERROR(ValidateDataset(data));
  if (config.fixed_model.has_value()) return *config.fixed_model;
  if (!config.fit.has_value()) {
    return MakeError(ErrorKind::kInvalidInput,
                     "config needs either a fixed model or fit settings");
  }
  PRIVGP_ASSIGN_OR_RETURN(SymMatrix shape,
                          config.fit->noise_shape.Materialize(data.size()));
  PRIVGP_ASSIGN_OR_RETURN(
      ConstantMeanFit fit,
      FitConstantMeanAndVariance(data.x, data.y, config.fit->correlation,
                                 &shape));
  if (fit.degenerate) {
    return MakeError(ErrorKind::kInvalidInput,
                     "responses are constant; the fitted variance is zero");
  }
  fit.model.noise = config.fit->noise_shape.Scaled(fit.variance);
  return fit.model;
}

absl::StatusOr<PipelineConfig> PipelineConfigFromJson(
    const Json& j, const std::string& base_dir) {
  if (!j.is_object()) {
    return MakeError(ErrorKind::kInvalidInput, "config must be a JSON object");
  }
  PipelineConfig config;
  if (!j.contains("dataset") || !j.at("dataset").is_string()) {
    return MakeError(ErrorKind::kInvalidInput, "config: missing 'dataset'");
  }
  config.dataset_path = ResolvePath(j.at("dataset").get<std::string>(), base_dir);

  const bool has_model = j.contains("model");
  const bool has_fit = j.contains("fit");
  if (has_model == has_fit) {
    return MakeError(ErrorKind::kInvalidInput,
                     "config: give exactly one of 'model' and 'fit'");
  }
  if (has_model) {
    PRIVGP_ASSIGN_OR_RETURN(GpModel model, ModelFromJson(j.at("model")));
    config.fixed_model = std::move(model);
  } else {
    const Json& fit = j.at("fit");
    if (!fit.is_object() || !fit.contains("correlation")) {
      return MakeError(ErrorKind::kInvalidInput,
                       "config: 'fit' needs a 'correlation' kernel");
    }
    FitSettings settings;
    PRIVGP_ASSIGN_OR_RETURN(settings.correlation,
                            KernelFromJson(fit.at("correlation")));
    if (fit.contains("noise")) {
      PRIVGP_ASSIGN_OR_RETURN(settings.noise_shape,
                              NoiseFromJson(fit.at("noise")));
    }
    config.fit = std::move(settings);
  }

  if (!j.contains("privacy")) {
    return MakeError(ErrorKind::kInvalidInput, "config: missing 'privacy'");
  }
  PRIVGP_ASSIGN_OR_RETURN(config.privacy, PrivacySpecFromJson(j.at("privacy")));

  if (j.contains("seed")) {
    if (!j.at("seed").is_number_unsigned()) {
      return MakeError(ErrorKind::kInvalidInput,
                       "config: 'seed' must be a non-negative integer");
    }
    config.seed = j.at("seed").get<uint64_t>();
  }
  if (j.contains("output")) {
    if (!j.at("output").is_string()) {
      return MakeError(ErrorKind::kInvalidInput, "config: bad 'output'");
    }
    config.output_path = ResolvePath(j.at("output").get<std::string>(), base_dir);
  }
  if (j.contains("redact_privacy_spec")) {
    if (!j.at("redact_privacy_spec").is_boolean()) {
      return MakeError(ErrorKind::kInvalidInput,
                       "config: 'redact_privacy_spec' must be a boolean");
    }
    config.redact_privacy_spec = j.at("redact_privacy_spec").get<bool>();
  }
  if (j.contains("sdp")) {
    const Json& sdp = j.at("sdp");
    if (sdp.contains("tol") && sdp.at("tol").is_number()) {
      config.noise_options.sdp.tol = sdp.at("tol").get<double>();
    }
    if (sdp.contains("max_iter") && sdp.at("max_iter").is_number_integer()) {
      config.noise_options.sdp.max_iter = sdp.at("max_iter").get<int>();
    }
  }
  return config;
}

absl::StatusOr<PipelineConfig> LoadPipelineConfig(const std::string& path) {
  PRIVGP_ASSIGN_OR_RETURN(Json j, ReadJsonFile(path));
  const std::string base_dir =
      std::filesystem::path(path).parent_path().string();
  absl::StatusOr<PipelineConfig> config = PipelineConfigFromJson(j, base_dir);
  if (!config.ok()) return WithContext(config.status(), path);
  return config;
}

absl::StatusOr<ReleasedModel> RunOnDataset(const PipelineConfig& config,
                                           const Dataset& data) {
  absl::StatusOr<GpModel> model = TrainModel(config, data);
  if (!model.ok()) return WithContext(model.status(), "training");

  ReleasedModel released;
  released.x = data.x;
  released.model = *std::move(model);
  {
    absl::StatusOr<NoiseCovariance> sigma = ComputeNoise(
        released.model, data.x, config.privacy, config.noise_options);
    if (!sigma.ok()) return WithContext(sigma.status(), "obfuscation");
    absl::StatusOr<NoiseDraw> draw = SampleNoise(sigma->sigma, config.seed);
    if (!draw.ok()) return WithContext(draw.status(), "obfuscation");
    absl::StatusOr<Eigen::VectorXd> w = Obfuscate(data.y, *draw);
    if (!w.ok()) return WithContext(w.status(), "obfuscation");
    released.sigma = *std::move(sigma);
    released.w = *std::move(w);
  }

  released.privacy_spec = config.privacy;
  absl::Status verified = VerifyReleasedModel(released);
  if (!verified.ok()) return WithContext(verified, "reconstruction");
  if (config.redact_privacy_spec) released.privacy_spec.reset();
  return released;
}

absl::StatusOr<ReleasedModel> Run(const PipelineConfig& config) {
  absl::StatusOr<Dataset> data = ReadDatasetCsv(config.dataset_path);
  if (!data.ok()) return WithContext(data.status(), "training");
  PRIVGP_ASSIGN_OR_RETURN(ReleasedModel released, RunOnDataset(config, *data));
  if (!config.output_path.empty()) {
    PRIVGP_RETURN_IF_ERROR(SaveReleasedModel(released, config.output_path));
  }
  return released;
}

absl::Status VerifyReleasedModel(const ReleasedModel& released) {
  const int n = static_cast<int>(released.x.size());
  if (released.format_version != kReleasedFormatVersion) {
    return MakeError(ErrorKind::kVersionMismatch,
                     absl::StrCat("unsupported format_version ",
                                  released.format_version));
  }
  if (n == 0) return Invariant("released model has no training points");
  if (released.w.size() != n) {
    return Invariant(absl::StrCat("W has length ", released.w.size(),
                                  " but X has ", n, " points"));
  }
  const int d = released.model.kernel.dimension();
  for (const Point& p : released.x) {
    if (p.size() != d) {
      return Invariant("training input dimension differs from the kernel's");
    }
  }
  if (!released.w.allFinite()) return Invariant("W has non-finite entries");
  const SymMatrix& sigma = released.sigma.sigma;
  if (sigma.order() != n) {
    return Invariant(absl::StrCat("sigma has order ", sigma.order(),
                                  " but X has ", n, " points"));
  }
  if (!sigma.IsFinite()) return Invariant("sigma has non-finite entries");
  absl::StatusOr<double> min_eig = MinEigenvalue(sigma);
  if (!min_eig.ok()) return min_eig.status();
  if (*min_eig < -kFloorSlack * std::max(1.0, sigma.MaxAbs())) {
    return Invariant(absl::StrFormat("sigma is not PSD (min eigenvalue %g)",
                                     *min_eig));
  }
  if (!released.privacy_spec.has_value()) return absl::OkStatus();
  absl::StatusOr<FloorCheck> check = CheckPrivacyFloor(
      released.model, released.x, sigma, *released.privacy_spec);
  if (!check.ok()) return check.status();
  if (check->margin < -kFloorSlack) {
    return Invariant(absl::StrFormat(
        "released variance falls below the privacy floor by %g",
        -check->margin));
  }
  return absl::OkStatus();
}

absl::StatusOr<PredictiveDistribution> Predict(const ReleasedModel& released,
                                               const PointList& query) {
  Dataset data{released.x, released.w};
  return Posterior(released.model, data, &released.sigma.sigma, query);
}

Json ReleasedModelToJson(const ReleasedModel& released) {
  Json j{{"format_version", released.format_version},
         {"X", PointsToJson(released.x)},
         {"W", VectorToJson(released.w)},
         {"model", ModelToJson(released.model)},
         {"sigma", NoiseCovarianceToJson(released.sigma)}};
  if (released.privacy_spec.has_value()) {
    j["privacy_spec"] = PrivacySpecToJson(*released.privacy_spec);
  }
  j["checksum"] = absl::StrFormat("%016x", Fnv1a(j.dump()));
  return j;
}

absl::StatusOr<ReleasedModel> ReleasedModelFromJson(const Json& j) {
  if (!j.is_object()) {
    return MakeError(ErrorKind::kInvalidInput,
                     "released model must be a JSON object");
  }
  if (!j.contains("format_version") ||
      !j.at("format_version").is_number_integer()) {
    return MakeError(ErrorKind::kVersionMismatch, "missing format_version");
  }
  const int version = j.at("format_version").get<int>();
  if (version != kReleasedFormatVersion) {
    return MakeError(ErrorKind::kVersionMismatch,
                     absl::StrCat("format_version ", version,
                                  " is not supported (expected ",
                                  kReleasedFormatVersion, ")"));
  }
  if (!j.contains("checksum") || !j.at("checksum").is_string()) {
    return MakeError(ErrorKind::kChecksumMismatch, "missing checksum");
  }
  Json body = j;
  body.erase("checksum");
  const std::string expected = absl::StrFormat("%016x", Fnv1a(body.dump()));
  if (j.at("checksum").get<std::string>() != expected) {
    return MakeError(ErrorKind::kChecksumMismatch,
                     "checksum does not match the artifact contents");
  }

  ReleasedModel released;
  released.format_version = version;
  for (const char* key : {"X", "W", "model", "sigma"}) {
    if (!j.contains(key)) {
      return MakeError(ErrorKind::kInvalidInput,
                       absl::StrCat("released model: missing '", key, "'"));
    }
  }
  PRIVGP_ASSIGN_OR_RETURN(released.x, PointsFromJson(j.at("X")));
  PRIVGP_ASSIGN_OR_RETURN(released.w, VectorFromJson(j.at("W")));
  PRIVGP_ASSIGN_OR_RETURN(released.model, ModelFromJson(j.at("model")));
  PRIVGP_ASSIGN_OR_RETURN(released.sigma,
                          NoiseCovarianceFromJson(j.at("sigma")));
  if (j.contains("privacy_spec")) {
    PRIVGP_ASSIGN_OR_RETURN(PrivacySpec spec,
                            PrivacySpecFromJson(j.at("privacy_spec")));
    released.privacy_spec = std::move(spec);
  }
  PRIVGP_RETURN_IF_ERROR(VerifyReleasedModel(released));
  return released;
}

absl::Status SaveReleasedModel(const ReleasedModel& released,
                               const std::string& path) {
  return WriteFile(path, ReleasedModelToJson(released).dump(1) + "\n");
}

absl::StatusOr<ReleasedModel> LoadReleasedModel(const std::string& path) {
  PRIVGP_ASSIGN_OR_RETURN(Json j, ReadJsonFile(path));
  absl::StatusOr<ReleasedModel> released = ReleasedModelFromJson(j);
  if (!released.ok()) return WithContext(released.status(), path);
  return released;
}

}  // namespace privgp
