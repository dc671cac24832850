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

// Owner-side workflow: fit the model, draw the synthetic noise, release the
// obfuscated data together with everything needed to evaluate predictions.

#ifndef PRIVGP_PIPELINE_H_
#define PRIVGP_PIPELINE_H_

#include <cstdint>
#include <optional>
#include <string>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "privgp/gp.h"
#include "privgp/kernels.h"
#include "privgp/linalg.h"
#include "privgp/privacy.h"
#include "privgp/serialization.h"

namespace privgp {

inline constexpr int kReleasedFormatVersion = 1;

// Slack allowed when re-verifying the variance floor of a released model.
inline constexpr double kFloorSlack = 1e-6;

struct ReleasedModel {
  PointList x;
  // Obfuscated responses W = Y + Z. The clean responses are never stored.
  Eigen::VectorXd w;
  GpModel model;
  NoiseCovariance sigma;
  // Absent when the owner redacted it.
  std::optional<PrivacySpec> privacy_spec;
  int format_version = kReleasedFormatVersion;
};

// How the model parameters are obtained in the training stage.
struct FitSettings {
  // Correlation kernel; its amplitude is replaced by the fitted variance.
  KernelSpec correlation;
  // Intrinsic noise expressed in units of the fitted variance.
  IntrinsicNoise noise_shape;
};

struct PipelineConfig {
  std::string dataset_path;
  // Exactly one of these is set.
  std::optional<GpModel> fixed_model;
  std::optional<FitSettings> fit;
  PrivacySpec privacy;
  uint64_t seed = 0;
  // Where Run() writes the artifact; empty means do not write.
  std::string output_path;
  bool redact_privacy_spec = false;
  NoiseOptions noise_options;
};

// Relative paths in the document are resolved against base_dir.
//
//   {"dataset": "train.csv",
//    "model": {...}            or  "fit": {"correlation": {...}, "noise": 0},
//    "privacy": {...}, "seed": 7, "output": "released.json",
//    "redact_privacy_spec": false,
//    "sdp": {"tol": 1e-7, "max_iter": 500}}
absl::StatusOr<PipelineConfig> PipelineConfigFromJson(
    const Json& j, const std::string& base_dir);
absl::StatusOr<PipelineConfig> LoadPipelineConfig(const std::string& path);

// Training stage alone: the fixed model, or the constant-mean fit.
absl::StatusOr<GpModel> TrainModel(const PipelineConfig& config,
                                   const Dataset& data);

// Stage errors carry a "training: ", "obfuscation: " or "reconstruction: "
// prefix.
absl::StatusOr<ReleasedModel> RunOnDataset(const PipelineConfig& config,
                                           const Dataset& data);
// Reads config.dataset_path and writes config.output_path when set.
absl::StatusOr<ReleasedModel> Run(const PipelineConfig& config);

// Shapes, PSD of sigma, and the variance floor of the disclosed privacy spec.
absl::Status VerifyReleasedModel(const ReleasedModel& released);

absl::StatusOr<PredictiveDistribution> Predict(const ReleasedModel& released,
                                               const PointList& query);

// Serialized as one JSON object whose "checksum" field is the FNV-1a hash
// (16 hex digits) of the remaining fields dumped compactly. Doubles use the
// shortest decimal that parses back to the same bits.
Json ReleasedModelToJson(const ReleasedModel& released);
absl::StatusOr<ReleasedModel> ReleasedModelFromJson(const Json& j);

absl::Status SaveReleasedModel(const ReleasedModel& released,
                               const std::string& path);
absl::StatusOr<ReleasedModel> LoadReleasedModel(const std::string& path);

}  // namespace privgp

#endif  // PRIVGP_PIPELINE_H_
