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

#ifndef PRIVGP_STATUS_H_
#define PRIVGP_STATUS_H_

#include <optional>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/status.h"
#include "absl/status/statusor.h"

namespace privgp {

// Domain error kinds. Each maps onto a canonical absl::StatusCode and is
// attached to the status as a payload so callers can tell, e.g., an invalid
// privacy tolerance apart from a malformed kernel.
enum class ErrorKind {
  kInvalidInput,
  kDimensionMismatch,
  kNotPositiveDefinite,
  kNotPsd,
  kInvalidTolerance,
  kInvalidXi,
  kNotIntegrable,
  kUnsupportedFamily,
  kVersionMismatch,
  kChecksumMismatch,
  kInvariantViolation,
  kIo,
};

absl::string_view ErrorKindName(ErrorKind kind);

absl::Status MakeError(ErrorKind kind, absl::string_view message);

// Returns the ErrorKind attached by MakeError, if any.
std::optional<ErrorKind> ErrorKindOf(const absl::Status& status);

bool HasErrorKind(const absl::Status& status, ErrorKind kind);

// Prefixes the message with `label: ` and keeps code and payloads.
absl::Status WithContext(const absl::Status& status, absl::string_view label);

}  // namespace privgp

#define PRIVGP_RETURN_IF_ERROR(expr)            \
  do {                                          \
    const absl::Status privgp_status_ = (expr); \
    if (!privgp_status_.ok()) {                 \
      return privgp_status_;                    \
    }                                           \
  } while (0)

#define PRIVGP_CONCAT_INNER_(a, b) a##b
#define PRIVGP_CONCAT_(a, b) PRIVGP_CONCAT_INNER_(a, b)

#define PRIVGP_ASSIGN_OR_RETURN(lhs, expr) \
  PRIVGP_ASSIGN_OR_RETURN_IMPL_(PRIVGP_CONCAT_(privgp_statusor_, __LINE__), lhs, expr)

#define PRIVGP_ASSIGN_OR_RETURN_IMPL_(statusor, lhs, expr) \
  auto statusor = (expr);                                  \
  if (!statusor.ok()) {                                    \
    return statusor.status();                              \
  }                                                        \
  lhs = std::move(statusor).value()

#endif  // PRIVGP_STATUS_H_
