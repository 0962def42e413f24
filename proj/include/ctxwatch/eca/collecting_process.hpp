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

#ifndef CTXWATCH_ECA_COLLECTING_PROCESS_HPP_
#define CTXWATCH_ECA_COLLECTING_PROCESS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctxwatch/core/local_state.hpp"
#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::eca {

/// Outbound channel from a collecting process to its checker. Deliveries
/// from one process arrive in emission order.
class StateSink {
 public:
  virtual ~StateSink() = default;
  /// A newly opened state. Its begin clock is the end clock of the owner's
  /// previous state, which the checker uses to close that state.
  virtual void Deliver(const LocalState& opened) = 0;
  /// The owner executed its Terminate event; no further states follow.
  virtual void Terminated(ProcessId owner, const VectorClock& final_clock) = 0;
};

/**
 * Event filter: turns raw samples into contextual events.
 *
 * With conditions, an event fires only when the truth vector of the
 * conditions changes (edge triggering). Pass-through variables fire on every
 * sample, or, with a positive change threshold, when the value moved by at
 * least the threshold since the last event.
 */
class EventFilter {
 public:
  EventFilter(std::vector<spec::LocalPredicate> conditions,
              std::vector<std::string> passthrough_vars,
              double change_threshold = 0.0);

  /// Evaluates the conditions on the initial values.
  void Prime(const VariableMap& initial);

  /// Records a sample; true when it constitutes an event.
  bool Offer(const std::string& var, const Scalar& value);

  const VariableMap& values() const { return values_; }
  const std::vector<bool>& truth() const { return truth_; }
  /// Truth of the first condition; false for pure pass-through filters.
  bool primary_truth() const { return !truth_.empty() && truth_.front(); }

 private:
  std::vector<bool> Evaluate() const;
  bool IsPassthrough(const std::string& var) const;

  std::vector<spec::LocalPredicate> conditions_;
  std::vector<std::string> passthrough_vars_;
  double change_threshold_;
  VariableMap values_;
  VariableMap last_emitted_;
  std::vector<bool> truth_;
};

/// The state closed by an event together with the state it opened.
struct Emission {
  LocalState closed;
  LocalState opened;
};

/**
 * Context collecting process: applies the event filter, maintains the
 * vector clock and streams timestamped local states to the checker.
 *
 * Every event (condition toggle, pass-through sample, send, receive) ticks
 * the own clock component, closes the current state and opens the next, so
 * begin[pid] == seq for every state.
 */
class CollectingProcess {
 public:
  CollectingProcess(ProcessId pid, std::size_t group_size,
                    spec::ProcessSubscription subscription,
                    double change_threshold = 0.0);

  ProcessId pid() const { return pid_; }
  const std::string& context_type() const { return subscription_.context_type; }
  const std::vector<std::string>& variables() const { return variables_; }
  const VectorClock& clock() const { return clock_; }
  const LocalState& current_state() const { return current_; }
  bool started() const { return started_; }
  bool terminated() const { return terminated_; }

  void AttachSink(StateSink* sink) { sink_ = sink; }

  /// Opens and emits state 0. `initial` must hold every subscribed variable
  /// (kMissingContext otherwise).
  void Start(const VariableMap& initial);

  /// Throws kMissingProvider for a variable this process does not watch.
  std::optional<Emission> OnSample(const std::string& var, const Scalar& value);

  /// Ticks, opens a new state with unchanged values and returns the message
  /// carrying the new clock.
  CausalMessage OnSendMsg(ProcessId dst, std::uint64_t message_id);

  /// A send to a device outside the group: an event without a causal edge
  /// inside the group.
  void OnExternalSend();
  /// Merges the piggybacked clock, ticks and opens a new state. Throws
  /// kMisroutedMessage when m.dst is not this process.
  Emission OnReceiveMsg(const CausalMessage& m);

  /// Executes the final event and returns the closed last state.
  LocalState Terminate();

 private:
  Emission Advance(const VectorClock& next_clock);
  void RequireRunning() const;

  ProcessId pid_;
  spec::ProcessSubscription subscription_;
  std::vector<std::string> variables_;
  EventFilter filter_;
  VectorClock clock_;
  LocalState current_;
  StateSink* sink_ = nullptr;
  bool started_ = false;
  bool terminated_ = false;
};

}  // namespace ctxwatch::eca

#endif  // CTXWATCH_ECA_COLLECTING_PROCESS_HPP_
