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

#ifndef CTXWATCH_ORACLE_RANDOM_TRACE_HPP_
#define CTXWATCH_ORACLE_RANDOM_TRACE_HPP_

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "ctxwatch/core/local_state.hpp"

namespace ctxwatch::oracle {

/// One step of an action script.
struct Step {
  enum class Kind { kSample, kSend, kReceive };
  Kind kind = Kind::kSample;
  std::size_t process = 0;
  /// kSend: destination. kReceive: which pending message (modulo count).
  std::size_t peer = 0;
  /// kSample: the new value of x.
  std::int64_t value = 0;
};

/// A reproducible description of a computation over n processes, each with
/// one integer variable x. Every sample, send and receive is an event.
struct Script {
  std::size_t n = 1;
  std::vector<std::int64_t> initial;
  std::vector<Step> steps;

  std::string ToString() const;
};

struct ScriptOptions {
  std::size_t min_processes = 1;
  std::size_t max_processes = 4;
  /// Upper bound on states per process (events + 1).
  std::size_t max_states = 8;
  /// Value range of x is [0, max_value].
  std::int64_t max_value = 2;
  /// Relative weight of message steps against samples.
  double message_weight = 1.0;
  /// When false, no messages are generated at all.
  bool messages = true;
};

Script RandomScript(std::mt19937_64& rng, const ScriptOptions& options);

/// Message-free script with exactly sizes[i] events on process i.
Script ProductScript(const std::vector<std::size_t>& sizes,
                     std::mt19937_64& rng, std::int64_t max_value = 2);

/// Something delivered to a checker: a state or a terminate marker.
struct Delivery {
  bool terminate = false;
  LocalState state;         // !terminate
  ProcessId process;        // terminate
  std::uint64_t count = 0;  // terminate: states emitted by the process
};

/**
 * A script executed on real collecting processes. The event graph is recorded
 * on the side without vector clocks: receives_[p][m] names the send that
 * process p's (m+1)-th event received, if it was a receive.
 */
struct ExecutedTrace {
  Script script;
  std::size_t n = 0;
  /// Final (closed) states per process.
  std::vector<std::vector<LocalState>> states;
  struct SendRef {
    std::size_t process;
    std::uint64_t event;  // 1-based event number on the sender
  };
  std::vector<std::vector<std::optional<SendRef>>> receives;
  /// Checker input in execution order.
  std::vector<Delivery> deliveries;

  std::vector<std::size_t> Sizes() const;
};

ExecutedTrace Execute(const Script& script);

/// The same deliveries with the per-process streams interleaved at random,
/// preserving order within each process.
std::vector<Delivery> Interleave(const std::vector<Delivery>& in,
                                 std::mt19937_64& rng);

/// The deliveries with states scrambled across and within processes
/// (exercises the reorder buffers); terminate markers stay last.
std::vector<Delivery> Scramble(const std::vector<Delivery>& in,
                               std::mt19937_64& rng);

/// Greedy one-step-removal shrinking while `fails` holds.
template <typename Pred>
Script Shrink(Script script, Pred fails) {
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t i = 0; i < script.steps.size(); ++i) {
      Script candidate = script;
      candidate.steps.erase(candidate.steps.begin() +
                            static_cast<std::ptrdiff_t>(i));
      if (fails(candidate)) {
        script = std::move(candidate);
        progress = true;
        break;
      }
    }
  }
  return script;
}

}  // namespace ctxwatch::oracle

#endif  // CTXWATCH_ORACLE_RANDOM_TRACE_HPP_
