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

#ifndef CTXWATCH_TRACE_REPLAY_HPP_
#define CTXWATCH_TRACE_REPLAY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "ctxwatch/detect/checker.hpp"
#include "ctxwatch/spec/predicate.hpp"
#include "ctxwatch/trace/trace_io.hpp"

namespace ctxwatch::trace {

struct GroupVerdicts {
  std::uint64_t group = 0;
  std::vector<detect::Cut> witnesses;
  /// Every process of the group terminated within the trace.
  bool finalized = false;

  friend bool operator==(const GroupVerdicts&, const GroupVerdicts&) = default;
};

/**
 * Feeds the STATE records of each group block to a fresh checker. Records
 * after `LIFECYCLE <g> checker-start` belong to group g until the next
 * checker-start; `LIFECYCLE <g> collector-stop:<pid>` ends a process. Groups are
 * matched with `specs` in order of first appearance (kInvalidConfig when
 * there are more groups than specs).
 */
std::vector<GroupVerdicts> Replay(const Trace& trace,
                                  const std::vector<spec::PredicateSpec>& specs,
                                  detect::DetectionMode mode);

/// The verdicts a live run recorded as NOTIFY lines.
std::vector<GroupVerdicts> RecordedVerdicts(const Trace& trace);

/// `VERDICT <g> cut=<...>` per witness, then `FINAL <g> detected|undetermined`
/// for finalized groups.
std::string FormatVerdicts(const std::vector<GroupVerdicts>& verdicts);

}  // namespace ctxwatch::trace

#endif  // CTXWATCH_TRACE_REPLAY_HPP_
