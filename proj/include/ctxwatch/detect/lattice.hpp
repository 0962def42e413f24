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

#ifndef CTXWATCH_DETECT_LATTICE_HPP_
#define CTXWATCH_DETECT_LATTICE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "ctxwatch/detect/checker.hpp"
#include "ctxwatch/spec/regex.hpp"

namespace ctxwatch::detect {

using NodeId = std::uint32_t;

struct CutHash {
  std::size_t operator()(const Cut& c) const noexcept;
};

struct LatticeNode {
  Cut cut;
  std::uint64_t level = 0;
  spec::Letter label = spec::kSinkLetter;
  std::vector<NodeId> succ;
  std::vector<NodeId> pred;
  bool alive = true;
};

/**
 * Incrementally built lattice of consistent global states.
 *
 * States are added one at a time in per-process seq order. Nothing exists
 * until every process has delivered state 0; states that arrive earlier are
 * buffered and folded in when the bottom node appears. After each addition
 * the node set is exactly the set of consistent cuts over the incorporated
 * states.
 */
class Lattice {
 public:
  explicit Lattice(std::size_t n);

  std::size_t group_size() const { return states_.size(); }

  /// Adds the next state of its owner; returns the created nodes in
  /// creation order (ascending level, then lexicographic cut). Throws
  /// kDuplicateState or kInvariantViolation for an out-of-order state.
  std::vector<NodeId> AddState(const LocalState& s);

  /// No further states will arrive for p.
  void MarkTerminated(ProcessId p);
  bool all_terminated() const;

  bool empty() const { return !bottom_; }
  NodeId bottom() const;
  /// The cut made of every process's newest state, when it is consistent.
  std::optional<NodeId> CompleteTop() const;

  const LatticeNode& node(NodeId id) const { return nodes_[id]; }
  LatticeNode& mutable_node(NodeId id) { return nodes_[id]; }
  std::optional<NodeId> Find(const Cut& cut) const;
  /// Number of live nodes.
  std::size_t size() const { return index_.size(); }
  /// Highest live node id + 1; ids of removed nodes stay unused.
  std::size_t capacity() const { return nodes_.size(); }
  /// Live node ids in level order then lexicographic cut order.
  std::vector<NodeId> SortedNodes() const;

  std::size_t incorporated(std::size_t p) const { return incorporated_[p]; }
  const LocalState& state(std::size_t p, std::uint64_t seq) const {
    return states_[p][seq];
  }
  std::size_t retained_states() const;
  /// The states of a cut, one pointer per process.
  std::vector<const LocalState*> CutStates(const Cut& cut) const;
  bool Consistent(const Cut& cut) const;

  /**
   * Removes the nodes strictly below `cut` that can never again lie on a
   * path avoiding `cut`: a node goes when all its successors go and no
   * future state can give it a new successor. Returns the number removed.
   * Throws kPruneRejected when `cut` is not a node.
   */
  std::size_t PruneBelow(const Cut& cut);

  /// Text dump: `NODE <cut> level=<L> label=<letter>` lines, then
  /// `EDGE <cut> -> <cut>` lines, both in sorted node order.
  std::string Dump() const;

 private:
  void BuildBottom();
  std::vector<NodeId> Expand(std::size_t i);
  NodeId CreateNode(Cut cut);

  std::vector<std::vector<LocalState>> states_;
  std::vector<std::size_t> incorporated_;
  std::vector<bool> terminated_;
  std::vector<LatticeNode> nodes_;
  std::unordered_map<Cut, NodeId, CutHash> index_;
  // by_position_[p][k]: nodes whose cut has k at process p.
  std::vector<std::vector<std::vector<NodeId>>> by_position_;
  std::optional<NodeId> bottom_;
};

/// The printed form of a node label; the sink letter prints as "⊥".
std::string LabelText(spec::Letter a);

}  // namespace ctxwatch::detect

#endif  // CTXWATCH_DETECT_LATTICE_HPP_
