// Copyright 2026 The gamelab Authors
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

#include "gamelab/error.hpp"

namespace gamelab {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNotFound: return "not-found";
    case ErrorCode::kInvalidArgument: return "invalid-argument";
    case ErrorCode::kDomainViolation: return "domain-violation";
    case ErrorCode::kNumericalBlowup: return "numerical-blowup";
    case ErrorCode::kInvalidState: return "invalid-state";
    case ErrorCode::kStabilityViolation: return "stability-violation";
    case ErrorCode::kConstraintEmpty: return "constraint-empty";
    case ErrorCode::kRegressionDegenerate: return "regression-degenerate";
    case ErrorCode::kContractionViolation: return "contraction-violation";
    case ErrorCode::kNoSaddleField: return "no-saddle-field";
    case ErrorCode::kIo: return "io";
  }
  return "unknown";
}

Error::Error(ErrorCode code, const std::string& message,
             std::optional<long> detail)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code),
      detail_(detail) {}

}  // namespace gamelab
