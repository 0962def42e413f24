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

#include "ctxwatch/detect/lattice_checker.hpp"

#include "ctxwatch/detect/conjunctive_checker.hpp"
#include "ctxwatch/error.hpp"

namespace ctxwatch::detect {

LatticeChecker::LatticeChecker(const spec::PredicateSpec& spec,
                               DetectionMode mode)
    : Checker(spec.processes.size(), mode),
      alphabet_(spec.alphabet),
      lattice_(spec.processes.size()),
      detector_(MakeLatticeDetector(spec)) {}

void LatticeChecker::OnState(const LocalState& s) {
  auto created = lattice_.AddState(s);
  for (NodeId id : created) {
    auto states = lattice_.CutStates(lattice_.node(id).cut);
    lattice_.mutable_node(id).label = spec::LabelOf(alphabet_, states);
    detector_->Annotate(lattice_, id);
  }
  if (created.empty() || done()) return;
  if (auto witness = detector_->Check(lattice_, created, lattice_.CompleteTop())) {
    Report(Detection{std::move(*witness), false});
  }
}

void LatticeChecker::OnTerminate(ProcessId p) { lattice_.MarkTerminated(p); }

void LatticeChecker::OnFinalize() {
  if (auto witness = detector_->Finalize(lattice_)) {
    Report(Detection{std::move(*witness), true});
  }
}

std::size_t LatticeChecker::Prune(const Cut& cut) {
  if (!detector_->AllowsPrune(lattice_, cut)) {
    throw Error(ErrorCode::kPruneRejected,
                "detector keeps the history below " + CutToString(cut));
  }
  return lattice_.PruneBelow(cut);
}

bool UsesQueueChecker(const spec::PredicateSpec& spec) {
  const auto& cp = spec.contextual;
  if (cp.kind != spec::ContextualPredicate::Kind::kSingle) return false;
  if (cp.modality != spec::Modality::kPos) return false;
  const auto* sp = spec.Find(cp.letter);
  return sp && sp->kind == spec::SnapshotPredicate::Kind::kConjunctive;
}

std::unique_ptr<Checker> MakeChecker(const spec::PredicateSpec& spec,
                                     DetectionMode mode,
                                     bool skip_elimination) {
  if (UsesQueueChecker(spec)) {
    return std::make_unique<ConjunctiveChecker>(
        spec.processes.size(), *spec.Find(spec.contextual.letter), mode,
        ConjunctiveChecker::Options{skip_elimination});
  }
  return std::make_unique<LatticeChecker>(spec, mode);
}

}  // namespace ctxwatch::detect
