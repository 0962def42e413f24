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

#ifndef CTXWATCH_ORACLE_VALIDATE_HPP_
#define CTXWATCH_ORACLE_VALIDATE_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ctxwatch/oracle/random_spec.hpp"
#include "ctxwatch/oracle/random_trace.hpp"

namespace ctxwatch::oracle {

struct ValidationOptions {
  std::uint64_t seed = 1;
  std::size_t queue_traces = 500;
  std::size_t lattice_traces = 500;
  std::size_t meet_join_pairs = 1000;
  /// Instances per path family (Def-conjunctive, regex Pos/Def, CTL,
  /// relational Pos/Def).
  std::size_t path_instances = 200;
  std::size_t product_vectors = 50;
  std::size_t prune_traces = 50;
  std::size_t min_processes = 1;
  std::size_t max_processes = 4;
  std::size_t max_states = 8;
  /// Upper bound on lattice size for the path oracles.
  std::size_t max_nodes = 2000;
  std::size_t max_ctl_nodes = 200;
  /// Mutation check: run the queue detector without elimination.
  bool skip_elimination = false;
};

struct SuiteResult {
  std::string name;
  std::size_t instances = 0;
  std::size_t failures = 0;
  /// First mismatch, with its instance seed.
  std::string detail;
  /// Minimized failing script and its states in trace format.
  std::string counterexample;
  double seconds = 0.0;
  /// Suite-specific extra figure: meet/join pairs checked, nodes pruned,
  /// or instances where the oracle expects a detection.
  std::size_t checks = 0;

  bool ok() const { return failures == 0; }
};

/// Per-instance seed derived from the master seed.
std::uint64_t InstanceSeed(std::uint64_t master, std::uint64_t index);

/// Queue checker verdict and least witness against cut enumeration.
SuiteResult ValidateQueueChecker(const ValidationOptions& o);
/// Lattice node and edge sets against cut enumeration, plus meet/join
/// closure on random node pairs.
SuiteResult ValidateLatticeNodes(const ValidationOptions& o);
/// Lattice detector verdicts against the path oracles for one family.
SuiteResult ValidatePathFamily(const ValidationOptions& o, Family family);
/// Message-free traces have exactly the product number of nodes.
SuiteResult ValidateProductLaw(const ValidationOptions& o);
/// Verdicts with pruning at every complete top equal unpruned verdicts.
SuiteResult ValidatePruning(const ValidationOptions& o);

std::vector<SuiteResult> RunAllSuites(const ValidationOptions& o);

/// Text form of a failing script for counterexample files.
std::string DescribeCounterexample(const Script& script);

}  // namespace ctxwatch::oracle

#endif  // CTXWATCH_ORACLE_VALIDATE_HPP_
