//
// Copyright 2026 The dplinear Authors
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

#include "dplinear/error.h"

namespace dplinear {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid_argument";
    case ErrorCode::kDimensionMismatch:
      return "dimension_mismatch";
    case ErrorCode::kNonFinite:
      return "non_finite";
    case ErrorCode::kSingularMatrix:
      return "singular_matrix";
    case ErrorCode::kIo:
      return "io";
    case ErrorCode::kBadMagic:
      return "bad_magic";
    case ErrorCode::kBadVersion:
      return "bad_version";
    case ErrorCode::kSizeMismatch:
      return "size_mismatch";
    case ErrorCode::kInvariantViolation:
      return "invariant_violation";
    case ErrorCode::kParse:
      return "parse";
  }
  return "unknown";
}

}  // namespace dplinear
