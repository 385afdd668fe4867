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

#include "mcg/error.hpp"

#include <utility>

namespace mcg {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kMissingCouplingValue: return "MissingCouplingValue";
    case ErrorCode::kDomainViolation: return "DomainViolation";
    case ErrorCode::kTooFewVertices: return "TooFewVertices";
    case ErrorCode::kSingularOperator: return "SingularOperator";
    case ErrorCode::kNotHurwitz: return "NotHurwitz";
    case ErrorCode::kNonPositiveBound: return "NonPositiveBound";
    case ErrorCode::kNonFiniteState: return "NonFiniteState";
    case ErrorCode::kDegenerateWindow: return "DegenerateWindow";
    case ErrorCode::kNoConvergence: return "NoConvergence";
    case ErrorCode::kSingularJacobian: return "SingularJacobian";
    case ErrorCode::kSchemaError: return "SchemaError";
    case ErrorCode::kValidationError: return "ValidationError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message),
      code_(code) {}

NonFiniteStateError::NonFiniteStateError(double time,
                                         const std::string& message)
    : Error(ErrorCode::kNonFiniteState, message), time_(time) {}

namespace {

std::string summarize(const std::vector<Issue>& issues) {
  std::string out = std::to_string(issues.size()) + " problem(s)";
  for (const auto& issue : issues) {
    out += "\n  ";
    out += issue.path.empty() ? "<root>" : issue.path;
    out += ": ";
    out += issue.message;
  }
  return out;
}

ErrorCode dominant_code(const std::vector<Issue>& issues) {
  for (const auto& issue : issues) {
    if (issue.code == ErrorCode::kSchemaError) return ErrorCode::kSchemaError;
  }
  return ErrorCode::kValidationError;
}

}  // namespace

ScenarioError::ScenarioError(std::vector<Issue> issues)
    : Error(dominant_code(issues), summarize(issues)),
      issues_(std::move(issues)) {}

}  // namespace mcg
