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

// JSON and CSV encodings of the library's value types.
//
// Doubles are written in shortest round-trip decimal form, so a value read
// back is bit-identical to the one written.

#ifndef PRIVGP_SERIALIZATION_H_
#define PRIVGP_SERIALIZATION_H_

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "json.hpp"
#include "privgp/gp.h"
#include "privgp/kernels.h"
#include "privgp/linalg.h"
#include "privgp/privacy.h"

namespace privgp {

using Json = nlohmann::json;

Json PointToJson(const Point& p);
absl::StatusOr<Point> PointFromJson(const Json& j);
Json PointsToJson(const PointList& points);
absl::StatusOr<PointList> PointsFromJson(const Json& j);
Json VectorToJson(const Eigen::VectorXd& v);
absl::StatusOr<Eigen::VectorXd> VectorFromJson(const Json& j);
Json MatrixToJson(const Eigen::MatrixXd& m);
absl::StatusOr<Eigen::MatrixXd> MatrixFromJson(const Json& j);

// {"family":"sqexp","c":1.0,"theta":10.0,"d":1} or
// {"family":"scaled","alpha":0.1,"base":{...}}.
Json KernelToJson(const KernelSpec& kernel);
absl::StatusOr<KernelSpec> KernelFromJson(const Json& j);

// A number (shared variance), a vector (per-point variances) or a matrix.
Json NoiseToJson(const IntrinsicNoise& noise);
absl::StatusOr<IntrinsicNoise> NoiseFromJson(const Json& j);

// {"mean": mu, "kernel": {...}, "noise": ...}.
Json ModelToJson(const GpModel& model);
absl::StatusOr<GpModel> ModelFromJson(const Json& j);

// {"variant":"single","s":[0.5],"xi":0.5}
// {"variant":"weak"|"diagonal","S":[[0.4],[0.6]],"xi":[0.5,0.5]}
// {"variant":"strong","S":[...],"Xi":[[...]]}
// {"variant":"kernel","H":{...},"region":{...}}
// Region: {"type":"grid","lo":[..],"hi":[..],"points":33} (or "boxes":
// [{"lo":..,"hi":..}, ...] in place of lo/hi, and an optional "refinements"
// list of per-axis counts), {"type":"points","points":[...]}, or
// {"type":"whole_space"}. In "H", a scaled kernel without "base" means a
// multiple of the model kernel.
Json PrivacySpecToJson(const PrivacySpec& spec);
absl::StatusOr<PrivacySpec> PrivacySpecFromJson(const Json& j);

Json NoiseCovarianceToJson(const NoiseCovariance& noise);
absl::StatusOr<NoiseCovariance> NoiseCovarianceFromJson(const Json& j);

// Dataset CSV: header x_1,...,x_d,y then one row per point.
std::string DatasetToCsv(const Dataset& data);
absl::StatusOr<Dataset> DatasetFromCsv(const std::string& text);
absl::StatusOr<Dataset> ReadDatasetCsv(const std::string& path);
absl::Status WriteDatasetCsv(const Dataset& data, const std::string& path);

// Shortest round-trip decimal form of a double.
std::string FormatDouble(double value);

// CSV with the given header row followed by the matrix rows.
std::string MatrixToCsv(const std::vector<std::string>& header,
                        const Eigen::MatrixXd& rows);

absl::StatusOr<std::string> ReadFile(const std::string& path);
absl::Status WriteFile(const std::string& path, const std::string& contents);
absl::StatusOr<Json> ParseJson(const std::string& text);
absl::StatusOr<Json> ReadJsonFile(const std::string& path);

}  // namespace privgp

#endif  // PRIVGP_SERIALIZATION_H_
