// Copyright 2026 The Carrier Authors
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

namespace carrier {

enum class ErrorCode {
  kUsage,
  kParseError,
  kGlueNotInvolutive,
  kSelfGluedFace,
  kDanglingReference,
  kEdgeSelfReversed,
  kCrossingArcs,
  kEdgeMismatch,
  kNonnegativeTb,
  kClosedComponent,
  kOvertwistedHint,
  kNotACandidate,
  kAttachmentCreatesClosed,
  kLeftoverExceedsC,
  kUnmatchedRectangle,
  kDegenerateBranch,
  kBadIncidence,
  kDanglingSector,
  kNotClosed,
  kBoxTooLarge,
  kInternalBound,
  kNotASolution,
  kNotInCone,
  kIncompleteBasis,
  kBadIndex,
  kOtherVerdict,
};

inline std::string_view error_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage: return "USAGE";
    case ErrorCode::kParseError: return "PARSE_ERROR";
    case ErrorCode::kGlueNotInvolutive: return "GLUE_NOT_INVOLUTIVE";
    case ErrorCode::kSelfGluedFace: return "SELF_GLUED_FACE";
    case ErrorCode::kDanglingReference: return "DANGLING_REFERENCE";
    case ErrorCode::kEdgeSelfReversed: return "EDGE_SELF_REVERSED";
    case ErrorCode::kCrossingArcs: return "CROSSING_ARCS";
    case ErrorCode::kEdgeMismatch: return "EDGE_MISMATCH";
    case ErrorCode::kNonnegativeTb: return "NONNEGATIVE_TB";
    case ErrorCode::kClosedComponent: return "CLOSED_COMPONENT";
    case ErrorCode::kOvertwistedHint: return "OVERTWISTED_HINT";
    case ErrorCode::kNotACandidate: return "NOT_A_CANDIDATE";
    case ErrorCode::kAttachmentCreatesClosed: return "ATTACHMENT_CREATES_CLOSED";
    case ErrorCode::kLeftoverExceedsC: return "LEFTOVER_EXCEEDS_C";
    case ErrorCode::kUnmatchedRectangle: return "UNMATCHED_RECTANGLE";
    case ErrorCode::kDegenerateBranch: return "DEGENERATE_BRANCH";
    case ErrorCode::kBadIncidence: return "BAD_INCIDENCE";
    case ErrorCode::kDanglingSector: return "DANGLING_SECTOR";
    case ErrorCode::kNotClosed: return "NOT_CLOSED";
    case ErrorCode::kBoxTooLarge: return "BOX_TOO_LARGE";
    case ErrorCode::kInternalBound: return "INTERNAL_BOUND";
    case ErrorCode::kNotASolution: return "NOT_A_SOLUTION";
    case ErrorCode::kNotInCone: return "NOT_IN_CONE";
    case ErrorCode::kIncompleteBasis: return "INCOMPLETE_BASIS";
    case ErrorCode::kBadIndex: return "BAD_INDEX";
    case ErrorCode::kOtherVerdict: return "OTHER_VERDICT";
  }
  return "UNKNOWN";
}

/// Process exit status for an error, following the CLI contract:
/// 2 validation, 3 overtwisted hint, 4 property failure.
inline int exit_status(ErrorCode code) {
  switch (code) {
    case ErrorCode::kUsage:
      return 1;
    case ErrorCode::kClosedComponent:
    case ErrorCode::kOvertwistedHint:
    case ErrorCode::kAttachmentCreatesClosed:
      return 3;
    case ErrorCode::kLeftoverExceedsC:
    case ErrorCode::kIncompleteBasis:
    case ErrorCode::kInternalBound:
      return 4;
    default:
      return 2;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(error_name(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace carrier
