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

#include "ctxwatch/detect/lattice_detectors.hpp"

#include <algorithm>
#include <unordered_map>

#include "ctxwatch/error.hpp"

namespace ctxwatch::detect {

namespace {

template <typename T>
void Grow(std::vector<T>& v, NodeId id) {
  if (v.size() <= id) v.resize(id + 1);
}

}  // namespace

bool NodeSatisfies(const Lattice& lat, NodeId id,
                   const spec::SnapshotPredicate& sp) {
  auto states = lat.CutStates(lat.node(id).cut);
  return spec::EvalSnapshot(sp, states);
}

// --- snapshot predicates ---

SnapshotDetector::SnapshotDetector(spec::SnapshotPredicate predicate,
                                   spec::Modality modality)
    : predicate_(std::move(predicate)), modality_(modality) {}

void SnapshotDetector::Annotate(const Lattice& lat, NodeId id) {
  Grow(holds_, id);
  Grow(flags_, id);
  holds_[id] = NodeSatisfies(lat, id, predicate_);
  bool covered = holds_[id];
  const auto& node = lat.node(id);
  if (!covered && id != lat.bottom() && !node.pred.empty()) {
    covered = std::all_of(node.pred.begin(), node.pred.end(),
                          [&](NodeId p) { return flags_[p] != 0; });
  }
  flags_[id] = covered;
}

std::optional<Cut> SnapshotDetector::Check(const Lattice& lat,
                                           const std::vector<NodeId>& created,
                                           std::optional<NodeId> top) {
  if (modality_ == spec::Modality::kPos) {
    for (NodeId id : created) {
      if (holds_[id]) return lat.node(id).cut;
    }
    return std::nullopt;
  }
  if (top && flags_[*top]) return lat.node(*top).cut;
  return std::nullopt;
}

// --- regular expressions ---

RegexDetector::RegexDetector(spec::Nfa nfa, spec::Modality modality)
    : nfa_(std::move(nfa)), modality_(modality) {}

int RegexDetector::Intern(std::vector<spec::Nfa::State> set) {
  auto it = ids_.find(set);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(subsets_.size());
  accepting_.push_back(nfa_.AnyAccepting(set));
  subsets_.push_back(set);
  ids_.emplace(std::move(set), id);
  return id;
}

int RegexDetector::Step(int subset, spec::Letter a) {
  auto key = std::make_pair(subset, a);
  auto it = step_cache_.find(key);
  if (it != step_cache_.end()) return it->second;
  int next = Intern(nfa_.Step(subsets_[subset], a));
  step_cache_.emplace(key, next);
  return next;
}

void RegexDetector::Annotate(const Lattice& lat, NodeId id) {
  Grow(at_node_, id);
  const auto& node = lat.node(id);
  std::vector<int> out;
  if (id == lat.bottom()) {
    out.push_back(Step(Intern({nfa_.initial()}), node.label));
  } else {
    for (NodeId p : node.pred) {
      for (int s : at_node_[p]) out.push_back(Step(s, node.label));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
  }
  at_node_[id] = std::move(out);
}

bool RegexDetector::Accepts(NodeId id) const {
  const auto& sets = at_node_.at(id);
  auto accepting = [&](int s) { return accepting_[s] != 0; };
  if (modality_ == spec::Modality::kPos) {
    return std::any_of(sets.begin(), sets.end(), accepting);
  }
  return !sets.empty() && std::all_of(sets.begin(), sets.end(), accepting);
}

std::optional<Cut> RegexDetector::Check(const Lattice& lat,
                                        const std::vector<NodeId>& created,
                                        std::optional<NodeId> top) {
  (void)created;
  if (top && Accepts(*top)) return lat.node(*top).cut;
  return std::nullopt;
}

// --- CTL ---

bool EvalCtl(const Lattice& lat, const spec::CtlFormula& formula,
             const AtomFn& atom) {
  if (lat.empty() || !lat.all_terminated()) {
    throw Error(ErrorCode::kNotFinalized,
                "CTL needs every process terminated");
  }
  auto top = lat.CompleteTop();
  if (!top) throw Error(ErrorCode::kInvariantViolation, "no top node");
  // Descending level: successors before predecessors.
  auto order = lat.SortedNodes();
  std::reverse(order.begin(), order.end());
  const std::size_t cap = lat.capacity();

  auto successors = [&](NodeId id) -> std::vector<NodeId> {
    if (id == *top) return {id};
    return lat.node(id).succ;
  };

  std::unordered_map<const spec::CtlFormula*, std::vector<char>> value;
  using K = spec::CtlFormula::Kind;
  for (const spec::CtlFormula* f : spec::Subformulae(formula)) {
    std::vector<char> v(cap, 0);
    const auto* a = f->children.size() > 0 ? &value.at(&f->children[0]) : nullptr;
    const auto* b = f->children.size() > 1 ? &value.at(&f->children[1]) : nullptr;
    for (NodeId id : order) {
      bool r = false;
      switch (f->kind) {
        case K::kTrue:
          r = true;
          break;
        case K::kAtom:
          r = atom(id, f->letter);
          break;
        case K::kAnd:
          r = (*a)[id] && (*b)[id];
          break;
        case K::kNot:
          r = !(*a)[id];
          break;
        case K::kExistsNext: {
          auto s = successors(id);
          r = std::any_of(s.begin(), s.end(), [&](NodeId x) { return (*a)[x]; });
          break;
        }
        case K::kForallNext: {
          auto s = successors(id);
          r = std::all_of(s.begin(), s.end(), [&](NodeId x) { return (*a)[x]; });
          break;
        }
        case K::kExistsUntil:
        case K::kForallUntil: {
          // Least fixpoint; the top's self-loop contributes nothing.
          r = (*b)[id];
          if (!r && (*a)[id] && id != *top) {
            const auto& s = lat.node(id).succ;
            auto in = [&](NodeId x) { return v[x] != 0; };
            r = f->kind == K::kExistsUntil ? std::any_of(s.begin(), s.end(), in)
                                           : std::all_of(s.begin(), s.end(), in);
          }
          break;
        }
      }
      v[id] = r;
    }
    value.emplace(f, std::move(v));
  }
  return value.at(&formula)[lat.bottom()] != 0;
}

CtlDetector::CtlDetector(spec::CtlFormula formula,
                         std::vector<spec::SnapshotPredicate> alphabet)
    : formula_(std::move(formula)), alphabet_(std::move(alphabet)) {
  if (alphabet_.size() > 64) {
    throw Error(ErrorCode::kInvalidConfig, "CTL alphabet above 64 letters");
  }
}

void CtlDetector::Annotate(const Lattice& lat, NodeId id) {
  Grow(atoms_, id);
  std::uint64_t bits = 0;
  for (std::size_t k = 0; k < alphabet_.size(); ++k) {
    if (NodeSatisfies(lat, id, alphabet_[k])) bits |= std::uint64_t{1} << k;
  }
  atoms_[id] = bits;
}

std::optional<Cut> CtlDetector::Check(const Lattice&,
                                      const std::vector<NodeId>&,
                                      std::optional<NodeId>) {
  return std::nullopt;
}

std::optional<Cut> CtlDetector::Finalize(const Lattice& lat) {
  verdict_ = EvalCtl(lat, formula_, [&](NodeId id, spec::Letter a) {
    for (std::size_t k = 0; k < alphabet_.size(); ++k) {
      if (alphabet_[k].letter == a) return ((atoms_[id] >> k) & 1) != 0;
    }
    return false;
  });
  if (!*verdict_) return std::nullopt;
  return lat.node(*lat.CompleteTop()).cut;
}

bool CtlDetector::AllowsPrune(const Lattice& lat, const Cut& cut) const {
  return !lat.empty() && lat.node(lat.bottom()).cut == cut;
}

std::unique_ptr<LatticeDetector> MakeLatticeDetector(
    const spec::PredicateSpec& spec) {
  const auto& cp = spec.contextual;
  switch (cp.kind) {
    case spec::ContextualPredicate::Kind::kSingle: {
      const auto* sp = spec.Find(cp.letter);
      if (sp == nullptr) {
        throw Error(ErrorCode::kUnknownSymbol, std::string(1, cp.letter));
      }
      return std::make_unique<SnapshotDetector>(*sp, *cp.modality);
    }
    case spec::ContextualPredicate::Kind::kRegex:
      return std::make_unique<RegexDetector>(spec::CompileRegex(cp.regex),
                                             *cp.modality);
    case spec::ContextualPredicate::Kind::kCtl:
      return std::make_unique<CtlDetector>(cp.ctl, spec.alphabet);
  }
  throw Error(ErrorCode::kUnsupportedPredicateType, "contextual predicate");
}

}  // namespace ctxwatch::detect
