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

#ifndef CTXWATCH_CORE_LOCAL_STATE_HPP_
#define CTXWATCH_CORE_LOCAL_STATE_HPP_

#include <cstdint>
#include <optional>
#include <string>

#include "ctxwatch/core/scalar.hpp"
#include "ctxwatch/core/vector_clock.hpp"

namespace ctxwatch {

enum class EventKind { kInternalChange, kSend, kReceive, kTerminate };

/**
 * The interval on one process's timeline between two consecutive events.
 *
 * begin is the owner's clock right after the event that opened the state
 * (all zeros for seq 0); end is the clock after the event that closed it and
 * is absent while the state is still current. Because every event opens a
 * new state, begin[owner] == seq and end[owner] == begin[owner] + 1.
 */
struct LocalState {
  ProcessId owner;
  std::uint64_t seq = 0;
  VectorClock begin;
  std::optional<VectorClock> end;
  VariableMap values;
  bool local_pred_truth = false;

  bool is_open() const { return !end.has_value(); }

  /// Owner component of the clock of the event that ends this state. For a
  /// state whose end has not been observed yet this is begin[owner] + 1,
  /// which is what the closing event will carry.
  VectorClock::Counter EndCounter() const;

  friend bool operator==(const LocalState&, const LocalState&) = default;
};

/// Directed test: the event ending s happened before the event beginning t.
/// An open state never happens before a state of a valid trace, since no
/// other process can know of events its owner has not executed yet.
bool HappenedBefore(const LocalState& s, const LocalState& t);

/// Pairwise concurrency of two states on different processes. Symmetric.
/// Throws kInvalidPair when both states belong to the same process and
/// kIncompatibleClocks on clock length mismatch.
bool StatesConsistent(const LocalState& s, const LocalState& t);

/// A message between two collecting processes with the sender's clock.
struct CausalMessage {
  ProcessId src;
  ProcessId dst;
  std::uint64_t id = 0;
  VectorClock piggyback;
};

}  // namespace ctxwatch

#endif  // CTXWATCH_CORE_LOCAL_STATE_HPP_
