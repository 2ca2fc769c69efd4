// Copyright 2026 The planscore Authors
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

namespace planscore {

enum class ErrorCode {
  kMalformedJson,
  kDimensionMismatch,
  kUnknownCategoryCode,
  kNonPositiveCellSize,
  kInvalidGraph,
  kInvalidCode,
  kDisconnectedGraph,
  kEmptyGraph,
  kInfeasibleSpec,
  kZeroVariance,
  kMissingRatings,
  kTooFewPlans,
  kNoWetRooms,
  kBothEmpty,
  kTooFewRows,
  kSchemaMismatch,
  kShapeMismatch,
  kEmptySplit,
  kConstantSeries,
  kCorpusTooSmall,
  kInvalidWeight,
  kInvalidAreaRange,
  kInvalidQuery,
  kMalformedEntry,
  kDuplicatePlanId,
  kBindFailure,
  kStageFailure,
  kHashMismatch,
  kSuiteFailure,
  kIo,
};

inline std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMalformedJson: return "MalformedJson";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kUnknownCategoryCode: return "UnknownCategoryCode";
    case ErrorCode::kNonPositiveCellSize: return "NonPositiveCellSize";
    case ErrorCode::kInvalidGraph: return "InvalidGraph";
    case ErrorCode::kInvalidCode: return "InvalidCode";
    case ErrorCode::kDisconnectedGraph: return "DisconnectedGraph";
    case ErrorCode::kEmptyGraph: return "EmptyGraph";
    case ErrorCode::kInfeasibleSpec: return "InfeasibleSpec";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kMissingRatings: return "MissingRatings";
    case ErrorCode::kTooFewPlans: return "TooFewPlans";
    case ErrorCode::kNoWetRooms: return "NoWetRooms";
    case ErrorCode::kBothEmpty: return "BothEmpty";
    case ErrorCode::kTooFewRows: return "TooFewRows";
    case ErrorCode::kSchemaMismatch: return "SchemaMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kEmptySplit: return "EmptySplit";
    case ErrorCode::kConstantSeries: return "ConstantSeries";
    case ErrorCode::kCorpusTooSmall: return "CorpusTooSmall";
    case ErrorCode::kInvalidWeight: return "InvalidWeight";
    case ErrorCode::kInvalidAreaRange: return "InvalidAreaRange";
    case ErrorCode::kInvalidQuery: return "InvalidQuery";
    case ErrorCode::kMalformedEntry: return "MalformedEntry";
    case ErrorCode::kDuplicatePlanId: return "DuplicatePlanId";
    case ErrorCode::kBindFailure: return "BindFailure";
    case ErrorCode::kStageFailure: return "StageFailure";
    case ErrorCode::kHashMismatch: return "HashMismatch";
    case ErrorCode::kSuiteFailure: return "SuiteFailure";
    case ErrorCode::kIo: return "Io";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace planscore
