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

#ifndef CTXWATCH_DETECT_CONJUNCTIVE_CHECKER_HPP_
#define CTXWATCH_DETECT_CONJUNCTIVE_CHECKER_HPP_

#include <cstdint>
#include <optional>
#include <vector>

#include "ctxwatch/detect/checker.hpp"
#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::detect {

/// Operation counters for the work bound.
struct QueueStats {
  std::uint64_t states_ingested = 0;
  std::uint64_t pushes = 0;
  std::uint64_t pops = 0;
  std::uint64_t comparisons = 0;

  std::uint64_t operations() const { return pushes + pops + comparisons; }
};

/**
 * Queue-elimination detector for Pos of a conjunctive predicate.
 *
 * States satisfying their process's conjunct are queued per process; false
 * states are dropped. A head is eliminated while it happened before the head
 * of another queue. When every queue is non-empty and no head can be
 * eliminated, the heads form the componentwise-least satisfying cut.
 *
 * Processes of the group that the predicate does not mention hold a trivially
 * true conjunct.
 */
class ConjunctiveChecker : public Checker {
 public:
  struct Options {
    /// Fault injection for oracle self-tests: never eliminate heads.
    bool skip_elimination = false;
  };

  ConjunctiveChecker(std::size_t n, spec::SnapshotPredicate predicate,
                     DetectionMode mode, Options options);
  ConjunctiveChecker(std::size_t n, spec::SnapshotPredicate predicate,
                     DetectionMode mode = DetectionMode::kOnce)
      : ConjunctiveChecker(n, std::move(predicate), mode, Options{}) {}

  QueueStats stats() const { return stats_; }
  std::size_t queued() const;

 protected:
  void OnState(const LocalState& s) override;

 private:
  bool Holds(const LocalState& s) const;
  void Pop(std::size_t p);
  void Eliminate();

  spec::SnapshotPredicate predicate_;
  std::vector<std::optional<spec::LocalPredicate>> conjunct_;
  Options options_;
  /**
   * FIFO of candidate states of one process, stored flat as records of
   * [seq, begin clock] so a push allocates nothing in the steady state.
   */
  class CandidateQueue {
   public:
    explicit CandidateQueue(std::size_t n) : stride_(n + 1) {}
    bool empty() const { return head_ == data_.size(); }
    std::size_t size() const { return (data_.size() - head_) / stride_; }
    void Push(std::uint64_t seq, const VectorClock& begin);
    void Pop();
    std::uint64_t seq() const { return data_[head_]; }
    /// Component i of the head's begin clock.
    std::uint64_t begin(std::size_t i) const { return data_[head_ + 1 + i]; }

   private:
    std::size_t stride_;
    std::size_t head_ = 0;
    std::vector<std::uint64_t> data_;
  };
  /// The head state of queue i ended before the head state of queue j began.
  bool Before(std::size_t i, std::size_t j) const {
    return queues_[i].begin(i) + 1 <= queues_[j].begin(i);
  }

  std::vector<CandidateQueue> queues_;
  std::vector<std::size_t> worklist_;
  QueueStats stats_;
};

}  // namespace ctxwatch::detect

#endif  // CTXWATCH_DETECT_CONJUNCTIVE_CHECKER_HPP_
