// Copyright 2026 The ctxwatch Authors
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

#include "ctxwatch/error.hpp"

namespace ctxwatch {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidGroupSize: return "invalid-group-size";
    case ErrorCode::kInvalidProcess: return "invalid-process";
    case ErrorCode::kIncompatibleClocks: return "incompatible-clocks";
    case ErrorCode::kInvalidPair: return "invalid-pair";
    case ErrorCode::kParseError: return "parse-error";
    case ErrorCode::kUnknownSymbol: return "unknown-symbol";
    case ErrorCode::kDuplicateSymbol: return "duplicate-symbol";
    case ErrorCode::kUnsupportedPredicateType: return "unsupported-predicate-type";
    case ErrorCode::kMissingContext: return "missing-context";
    case ErrorCode::kIncompleteCut: return "incomplete-cut";
    case ErrorCode::kTypeError: return "type-error";
    case ErrorCode::kMissingProvider: return "missing-provider";
    case ErrorCode::kMisroutedMessage: return "misrouted-message";
    case ErrorCode::kInvalidConfig: return "invalid-config";
    case ErrorCode::kStalledStream: return "stalled-stream";
    case ErrorCode::kDuplicateState: return "duplicate-state";
    case ErrorCode::kInvariantViolation: return "invariant-violation";
    case ErrorCode::kNotFinalized: return "not-finalized";
    case ErrorCode::kPruneRejected: return "prune-rejected";
    case ErrorCode::kAlreadyRegistered: return "already-registered";
    case ErrorCode::kUnresolvedResource: return "unresolved-resource";
    case ErrorCode::kNoSuchGroup: return "no-such-group";
  }
  return "unknown-error";
}

}  // namespace ctxwatch
