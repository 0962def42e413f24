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

#include "ctxwatch/detect/conjunctive_checker.hpp"

#include "ctxwatch/error.hpp"

namespace ctxwatch::detect {

ConjunctiveChecker::ConjunctiveChecker(std::size_t n,
                                       spec::SnapshotPredicate predicate,
                                       DetectionMode mode, Options options)
    : Checker(n, mode),
      predicate_(std::move(predicate)),
      conjunct_(n),
      options_(options),
      queues_(n, CandidateQueue(n)) {
  if (predicate_.kind != spec::SnapshotPredicate::Kind::kConjunctive) {
    throw Error(ErrorCode::kUnsupportedPredicateType,
                "queue detector needs a conjunctive predicate");
  }
  for (const auto& c : predicate_.conjuncts) {
    if (c.process >= n) {
      throw Error(ErrorCode::kInvalidProcess,
                  "conjunct on " + c.context_type + " outside the group");
    }
    conjunct_[c.process] = c;
  }
}

void ConjunctiveChecker::CandidateQueue::Push(std::uint64_t seq, const VectorClock& begin) {
  data_.push_back(seq);
  for (std::size_t i = 0; i + 1 < stride_; ++i) data_.push_back(begin[i]);
}

void ConjunctiveChecker::CandidateQueue::Pop() {
  head_ += stride_;
  if (head_ == data_.size()) {
    data_.clear();
    head_ = 0;
  } else if (head_ >= 64 * stride_ && 2 * head_ >= data_.size()) {
    // Reclaim the popped prefix; amortized over the pops that built it.
    data_.erase(data_.begin(), data_.begin() + static_cast<std::ptrdiff_t>(head_));
    head_ = 0;
  }
}

std::size_t ConjunctiveChecker::queued() const {
  std::size_t total = 0;
  for (const auto& q : queues_) total += q.size();
  return total;
}

bool ConjunctiveChecker::Holds(const LocalState& s) const {
  const auto& c = conjunct_[s.owner.index];
  return !c || spec::EvalLocal(*c, s.values);
}

void ConjunctiveChecker::Pop(std::size_t p) {
  queues_[p].Pop();
  ++stats_.pops;
  if (!queues_[p].empty()) worklist_.push_back(p);
}

void ConjunctiveChecker::OnState(const LocalState& s) {
  ++stats_.states_ingested;
  if (done() || !Holds(s)) return;
  const std::size_t p = s.owner.index;
  queues_[p].Push(s.seq, s.begin);
  ++stats_.pushes;
  if (queues_[p].size() == 1) worklist_.push_back(p);
  Eliminate();
}

void ConjunctiveChecker::Eliminate() {
  const std::size_t n = queues_.size();
  while (true) {
    // Each head is compared with the other heads once, when it becomes head.
    while (!worklist_.empty()) {
      std::size_t i = worklist_.back();
      worklist_.pop_back();
      if (queues_[i].empty() || options_.skip_elimination) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (j == i || queues_[j].empty()) continue;
        ++stats_.comparisons;
        if (Before(i, j)) {
          Pop(i);
          break;
        }
        ++stats_.comparisons;
        if (Before(j, i)) Pop(j);
      }
    }
    for (const auto& q : queues_) {
      if (q.empty()) return;
    }
    Cut witness(n);
    for (std::size_t p = 0; p < n; ++p) witness[p] = queues_[p].seq();
    Report(Detection{std::move(witness), false});
    if (mode() == DetectionMode::kOnce) return;
    for (std::size_t p = 0; p < n; ++p) Pop(p);
  }
}

}  // namespace ctxwatch::detect
