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

#ifndef CTXWATCH_DETECT_LATTICE_DETECTORS_HPP_
#define CTXWATCH_DETECT_LATTICE_DETECTORS_HPP_

#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ctxwatch/detect/lattice.hpp"
#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::detect {

/**
 * A detector annotating lattice nodes. Annotations are computed once per
 * node, in creation order, from the node itself and its predecessors.
 */
class LatticeDetector {
 public:
  virtual ~LatticeDetector() = default;

  virtual void Annotate(const Lattice& lat, NodeId id) = 0;

  /// Online verdict after a batch of new nodes; `top` is the complete top
  /// when one exists. Returns the witness cut on detection.
  virtual std::optional<Cut> Check(const Lattice& lat,
                                   const std::vector<NodeId>& created,
                                   std::optional<NodeId> top) = 0;

  /// Verdict issued once every process has terminated.
  virtual std::optional<Cut> Finalize(const Lattice& lat) {
    (void)lat;
    return std::nullopt;
  }

  virtual bool AllowsPrune(const Lattice& lat, const Cut& cut) const {
    (void)lat;
    (void)cut;
    return true;
  }
};

/// Truth of a snapshot predicate on one node.
bool NodeSatisfies(const Lattice& lat, NodeId id,
                   const spec::SnapshotPredicate& sp);

/// Pos: some node satisfies the predicate. Def: every path from bottom to
/// the complete top crosses a satisfying node.
class SnapshotDetector : public LatticeDetector {
 public:
  SnapshotDetector(spec::SnapshotPredicate predicate, spec::Modality modality);

  void Annotate(const Lattice& lat, NodeId id) override;
  std::optional<Cut> Check(const Lattice& lat,
                           const std::vector<NodeId>& created,
                           std::optional<NodeId> top) override;

  /// Def annotation: all paths from bottom to the node meet the predicate.
  bool covered(NodeId id) const { return flags_.at(id); }

 private:
  spec::SnapshotPredicate predicate_;
  spec::Modality modality_;
  std::vector<char> holds_;
  std::vector<char> flags_;
};

/**
 * Regular-expression detector. Each node carries the set of subset-automaton
 * states reached along the paths ending there (one per class of paths), so
 * Pos asks for one accepting class and Def for all of them. Verdicts are
 * issued at complete tops only.
 */
class RegexDetector : public LatticeDetector {
 public:
  RegexDetector(spec::Nfa nfa, spec::Modality modality);

  void Annotate(const Lattice& lat, NodeId id) override;
  std::optional<Cut> Check(const Lattice& lat,
                           const std::vector<NodeId>& created,
                           std::optional<NodeId> top) override;

  std::size_t subset_states() const { return subsets_.size(); }
  /// Whether the path classes at a node satisfy the modality.
  bool Accepts(NodeId id) const;

 private:
  int Intern(std::vector<spec::Nfa::State> set);
  int Step(int subset, spec::Letter a);

  spec::Nfa nfa_;
  spec::Modality modality_;
  std::map<std::vector<spec::Nfa::State>, int> ids_;
  std::vector<std::vector<spec::Nfa::State>> subsets_;
  std::vector<char> accepting_;
  std::map<std::pair<int, spec::Letter>, int> step_cache_;
  std::vector<std::vector<int>> at_node_;
};

/// Truth of a CTL atom at a node.
using AtomFn = std::function<bool(NodeId, spec::Letter)>;

/**
 * Evaluates a CTL formula at the bottom of a finalized lattice, the top node
 * carrying a self-loop. Throws kNotFinalized before every process has
 * terminated.
 */
bool EvalCtl(const Lattice& lat, const spec::CtlFormula& formula,
             const AtomFn& atom);

/// CTL at finalization; atom `a` holds where the snapshot predicate of `a`
/// holds. Pruning is only accepted at the bottom.
class CtlDetector : public LatticeDetector {
 public:
  CtlDetector(spec::CtlFormula formula,
              std::vector<spec::SnapshotPredicate> alphabet);

  void Annotate(const Lattice& lat, NodeId id) override;
  std::optional<Cut> Check(const Lattice& lat,
                           const std::vector<NodeId>& created,
                           std::optional<NodeId> top) override;
  std::optional<Cut> Finalize(const Lattice& lat) override;
  bool AllowsPrune(const Lattice& lat, const Cut& cut) const override;

  std::optional<bool> verdict() const { return verdict_; }

 private:
  spec::CtlFormula formula_;
  std::vector<spec::SnapshotPredicate> alphabet_;
  std::vector<std::uint64_t> atoms_;
  std::optional<bool> verdict_;
};

std::unique_ptr<LatticeDetector> MakeLatticeDetector(
    const spec::PredicateSpec& spec);

}  // namespace ctxwatch::detect

#endif  // CTXWATCH_DETECT_LATTICE_DETECTORS_HPP_
