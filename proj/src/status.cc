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

#include "privgp/status.h"

#include <array>
#include <string>
#include <utility>

#include "absl/strings/cord.h"
#include "absl/strings/str_cat.h"

namespace privgp {
namespace {

constexpr char kPayloadUrl[] = "type.privgp/error_kind";

struct KindInfo {
  ErrorKind kind;
  absl::string_view name;
  absl::StatusCode code;
};

constexpr std::array<KindInfo, 12> kKinds = {{
    {ErrorKind::kInvalidInput, "InvalidInput",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kDimensionMismatch, "DimensionMismatch",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kNotPositiveDefinite, "NotPositiveDefinite",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kNotPsd, "NotPSD", absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kInvalidTolerance, "InvalidTolerance",
     absl::StatusCode::kInvalidArgument},
    {ErrorKind::kInvalidXi, "InvalidXi", absl::StatusCode::kInvalidArgument},
    {ErrorKind::kNotIntegrable, "NotIntegrable",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kUnsupportedFamily, "UnsupportedFamily",
     absl::StatusCode::kUnimplemented},
    {ErrorKind::kVersionMismatch, "VersionMismatch",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kChecksumMismatch, "ChecksumMismatch",
     absl::StatusCode::kDataLoss},
    {ErrorKind::kInvariantViolation, "InvariantViolation",
     absl::StatusCode::kFailedPrecondition},
    {ErrorKind::kIo, "Io", absl::StatusCode::kNotFound},
}};

const KindInfo& Lookup(ErrorKind kind) {
  for (const KindInfo& info : kKinds) {
    if (info.kind == kind) return info;
  }
  return kKinds[0];
}

}  // namespace

absl::string_view ErrorKindName(ErrorKind kind) { return Lookup(kind).name; }

absl::Status MakeError(ErrorKind kind, absl::string_view message) {
  const KindInfo& info = Lookup(kind);
  absl::Status status(info.code, message);
  status.SetPayload(kPayloadUrl, absl::Cord(info.name));
  return status;
}

std::optional<ErrorKind> ErrorKindOf(const absl::Status& status) {
  auto payload = status.GetPayload(kPayloadUrl);
  if (!payload.has_value()) return std::nullopt;
  const std::string name(*payload);
  for (const KindInfo& info : kKinds) {
    if (info.name == name) return info.kind;
  }
  return std::nullopt;
}

bool HasErrorKind(const absl::Status& status, ErrorKind kind) {
  std::optional<ErrorKind> found = ErrorKindOf(status);
  return found.has_value() && *found == kind;
}

absl::Status WithContext(const absl::Status& status, absl::string_view label) {
  if (status.ok()) return status;
  absl::Status wrapped(status.code(),
                       absl::StrCat(label, ": ", status.message()));
  status.ForEachPayload(
      [&wrapped](absl::string_view url, const absl::Cord& payload) {
        wrapped.SetPayload(url, payload);
      });
  return wrapped;
}

}  // namespace privgp
