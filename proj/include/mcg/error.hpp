// Copyright 2026 The mcg Authors.
//
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

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace mcg {

enum class ErrorCode {
  kInvalidArgument,
  kDimensionMismatch,
  kMissingCouplingValue,
  kDomainViolation,
  kTooFewVertices,
  kSingularOperator,
  kNotHurwitz,
  kNonPositiveBound,
  kNonFiniteState,
  kDegenerateWindow,
  kNoConvergence,
  kSingularJacobian,
  kSchemaError,
  kValidationError,
};

std::string_view to_string(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by the integrator when a step produces NaN or Inf.
class NonFiniteStateError : public Error {
 public:
  NonFiniteStateError(double time, const std::string& message);

  double time() const noexcept { return time_; }

 private:
  double time_;
};

struct Issue {
  ErrorCode code;  // kSchemaError or kValidationError
  std::string path;
  std::string message;
};

// Every problem found while loading a scenario, reported together.
class ScenarioError : public Error {
 public:
  explicit ScenarioError(std::vector<Issue> issues);

  const std::vector<Issue>& issues() const noexcept { return issues_; }

 private:
  std::vector<Issue> issues_;
};

}  // namespace mcg
