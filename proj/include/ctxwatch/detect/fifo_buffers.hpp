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

#ifndef CTXWATCH_DETECT_FIFO_BUFFERS_HPP_
#define CTXWATCH_DETECT_FIFO_BUFFERS_HPP_

#include <cstdint>
#include <map>
#include <vector>

#include "ctxwatch/core/local_state.hpp"

namespace ctxwatch::detect {

/// Per-process reorder buffers in front of a checker. States may arrive
/// interleaved arbitrarily; each process's states leave in seq order.
class FifoBuffers {
 public:
  explicit FifoBuffers(std::size_t n);

  std::size_t size() const { return next_.size(); }

  /// Accepts one state and returns every state that became deliverable, in
  /// order. Throws kDuplicateState for an (owner, seq) seen before and
  /// kInvalidProcess for an owner outside the group.
  std::vector<LocalState> Offer(LocalState s);

  /// Fast path: accepts `s` without copying when it is exactly the next
  /// state of its owner and nothing is held for that owner. Returns false,
  /// leaving the buffers untouched, otherwise.
  bool TakeInOrder(const LocalState& s);

  std::uint64_t next_expected(ProcessId p) const { return next_.at(p.index); }
  std::size_t held() const;

  /// Throws kStalledStream when any state is still waiting behind a gap.
  void CheckDrained() const;

 private:
  std::vector<std::uint64_t> next_;
  std::vector<std::map<std::uint64_t, LocalState>> pending_;
};

/// Batch form: reorders a whole raw stream. Throws kDuplicateState, or
/// kStalledStream when a gap leaves states undeliverable.
std::vector<LocalState> DrainReorderBuffer(std::size_t n,
                                           std::vector<LocalState> raw);

}  // namespace ctxwatch::detect

#endif  // CTXWATCH_DETECT_FIFO_BUFFERS_HPP_
