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

#ifndef CTXWATCH_ERROR_HPP_
#define CTXWATCH_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace ctxwatch {

enum class ErrorCode {
  kInvalidGroupSize,
  kInvalidProcess,
  kIncompatibleClocks,
  kInvalidPair,
  kParseError,
  kUnknownSymbol,
  kDuplicateSymbol,
  kUnsupportedPredicateType,
  kMissingContext,
  kIncompleteCut,
  kTypeError,
  kMissingProvider,
  kMisroutedMessage,
  kInvalidConfig,
  kStalledStream,
  kDuplicateState,
  kInvariantViolation,
  kNotFinalized,
  kPruneRejected,
  kAlreadyRegistered,
  kUnresolvedResource,
  kNoSuchGroup,
};

/// Stable kebab-case name of an error code, e.g. "unknown-symbol".
std::string_view ErrorCodeName(ErrorCode code);

/// The single exception type thrown by the library. The code identifies the
/// failure class; what() carries the human-readable detail.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& detail)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + detail),
        code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace ctxwatch

#endif  // CTXWATCH_ERROR_HPP_
