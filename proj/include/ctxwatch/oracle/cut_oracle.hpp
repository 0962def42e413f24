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

#ifndef CTXWATCH_ORACLE_CUT_ORACLE_HPP_
#define CTXWATCH_ORACLE_CUT_ORACLE_HPP_

#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ctxwatch/detect/checker.hpp"
#include "ctxwatch/oracle/random_trace.hpp"
#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::oracle {

using detect::Cut;

/**
 * All consistent cuts of an executed trace, found by enumerating every index
 * vector and checking it against the recorded event graph: a cut is
 * consistent when every receive it contains has its send inside it too.
 * Vector clocks play no part.
 */
class CutSpace {
 public:
  explicit CutSpace(const ExecutedTrace& trace);

  std::size_t n() const { return sizes_.size(); }
  /// Consistent cuts ordered by level, then lexicographically.
  const std::vector<Cut>& cuts() const { return cuts_; }
  std::size_t size() const { return cuts_.size(); }
  std::optional<std::size_t> IndexOf(const Cut& c) const;
  bool Consistent(const Cut& c) const;

  std::size_t bottom() const { return 0; }
  std::size_t top() const { return cuts_.size() - 1; }
  const std::vector<std::size_t>& succ(std::size_t i) const { return succ_[i]; }
  const std::vector<std::size_t>& pred(std::size_t i) const { return pred_[i]; }

  std::vector<const LocalState*> States(std::size_t i) const;
  bool Satisfies(std::size_t i, const spec::SnapshotPredicate& sp) const;

 private:
  const ExecutedTrace* trace_;
  std::vector<std::size_t> sizes_;
  std::vector<Cut> cuts_;
  std::map<Cut, std::size_t> index_;
  std::vector<std::vector<std::size_t>> succ_;
  std::vector<std::vector<std::size_t>> pred_;
};

/// Componentwise minimum and maximum.
Cut Meet(const Cut& a, const Cut& b);
Cut Join(const Cut& a, const Cut& b);

/// Number of message-free cuts: the product of (states per process).
std::uint64_t ProductCount(const std::vector<std::size_t>& sizes);

/// The satisfying cut below every other satisfying cut, if any cut satisfies.
/// Throws kInvariantViolation when satisfying cuts have no least element.
std::optional<Cut> LeastSatisfying(const CutSpace& space,
                                   const spec::SnapshotPredicate& sp);

/**
 * covered[i]: every path from bottom to cut i meets a satisfying cut.
 * Computed as the complement of reachability through non-satisfying cuts.
 */
std::vector<bool> PathsCovered(const CutSpace& space,
                               const spec::SnapshotPredicate& sp);

/// The complete tops a lattice checker sees: after each state delivered in
/// per-process order, the cut of every process's newest state, when every
/// process has a state and that cut is consistent. Repeats are kept.
std::vector<Cut> CompleteTopsInOrder(const CutSpace& space,
                                     const std::vector<Delivery>& deliveries);

/// Label of a cut: the unique satisfied letter, or the sink letter.
spec::Letter OracleLabel(const CutSpace& space, std::size_t i,
                         const std::vector<spec::SnapshotPredicate>& alphabet);

}  // namespace ctxwatch::oracle

#endif  // CTXWATCH_ORACLE_CUT_ORACLE_HPP_
