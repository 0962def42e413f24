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

#ifndef CTXWATCH_DETECT_LATTICE_CHECKER_HPP_
#define CTXWATCH_DETECT_LATTICE_CHECKER_HPP_

#include <memory>

#include "ctxwatch/detect/checker.hpp"
#include "ctxwatch/detect/lattice.hpp"
#include "ctxwatch/detect/lattice_detectors.hpp"
#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::detect {

/// Checker maintaining the lattice of consistent global states and running
/// the detector chosen by the specification on every new node.
class LatticeChecker : public Checker {
 public:
  LatticeChecker(const spec::PredicateSpec& spec,
                 DetectionMode mode = DetectionMode::kOnce);

  const Lattice& lattice() const { return lattice_; }
  const LatticeDetector& detector() const { return *detector_; }

  /// Removes nodes below `cut` (see Lattice::PruneBelow). Throws
  /// kPruneRejected when the detector needs the history.
  std::size_t Prune(const Cut& cut);

 protected:
  void OnState(const LocalState& s) override;
  void OnTerminate(ProcessId p) override;
  void OnFinalize() override;

 private:
  std::vector<spec::SnapshotPredicate> alphabet_;
  Lattice lattice_;
  std::unique_ptr<LatticeDetector> detector_;
};

/// True when the queue detector handles the specification: Pos of a single
/// conjunctive predicate.
bool UsesQueueChecker(const spec::PredicateSpec& spec);

/// Builds the checker for a resolved specification.
std::unique_ptr<Checker> MakeChecker(const spec::PredicateSpec& spec,
                                     DetectionMode mode,
                                     bool skip_elimination = false);

}  // namespace ctxwatch::detect

#endif  // CTXWATCH_DETECT_LATTICE_CHECKER_HPP_
