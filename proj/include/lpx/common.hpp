// Copyright 2026 The lpx Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef LPX_COMMON_HPP_
#define LPX_COMMON_HPP_

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Dense>

namespace lpx {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Error kinds surfaced by the engine. The names are part of the wire
// contract: they appear verbatim in CLI diagnostics and HTTP error bodies.
enum class ErrorCode {
  kInvalidArgument,
  kIoError,
  kParseError,
  // Snapshot validation.
  kDimensionMismatch,
  kNonFiniteEntry,
  kBoundOrderViolation,
  kDuplicateId,
  kUnknownId,
  // LP engine.
  kUnbounded,
  kNoInServiceMV,
  kIterationLimit,
  kTooManyVariables,
  // Active set.
  kNonSquareActiveSet,
  kSingularActiveMatrix,
  kDualMismatch,
  // Attribution / sensitivity.
  kZeroColumn,
  kNotApplicable,
  // History.
  kOutOfOrderTimestamp,
  kEmptyHistory,
  kIdMismatch,
  kUnknownLabel,
};

std::string_view ErrorCodeName(ErrorCode code);

// Coarse grouping used by the C API and the CLI exit codes.
enum class ErrorClass { kUsage, kInput, kSolver, kHistory, kInternal };
ErrorClass ClassOf(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, std::string stage, const std::string& detail)
      : std::runtime_error(detail), code_(code), stage_(std::move(stage)) {}

  ErrorCode code() const { return code_; }
  // Pipeline stage that raised the error ("validate", "lp-engine", ...).
  const std::string& stage() const { return stage_; }
  // "<stage>: <CodeName>: <detail>"
  std::string Describe() const;

 private:
  ErrorCode code_;
  std::string stage_;
};

}  // namespace lpx

#endif  // LPX_COMMON_HPP_
