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

#ifndef GAMELAB_ERROR_HPP_
#define GAMELAB_ERROR_HPP_

#include <optional>
#include <stdexcept>
#include <string>

namespace gamelab {

enum class ErrorCode {
  kNotFound,
  kInvalidArgument,
  kDomainViolation,
  kNumericalBlowup,
  kInvalidState,
  kStabilityViolation,
  kConstraintEmpty,
  kRegressionDegenerate,
  kContractionViolation,
  kNoSaddleField,
  kIo,
};

const char* to_string(ErrorCode code);

// All library failures are reported through this exception. `detail` carries
// the offending step index, the suggested number of time steps, etc.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message,
        std::optional<long> detail = std::nullopt);

  ErrorCode code() const { return code_; }
  std::optional<long> detail() const { return detail_; }

 private:
  ErrorCode code_;
  std::optional<long> detail_;
};

}  // namespace gamelab

#endif  // GAMELAB_ERROR_HPP_
