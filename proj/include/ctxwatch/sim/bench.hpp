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

#ifndef CTXWATCH_SIM_BENCH_HPP_
#define CTXWATCH_SIM_BENCH_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace ctxwatch::sim {

enum class BenchKind { kConjunctive, kRegex };

struct BenchGrid {
  BenchKind kind = BenchKind::kConjunctive;
  std::vector<std::size_t> processes;
  std::vector<std::size_t> predicates;
};

inline constexpr std::size_t kMaxConjunctivePredicates = 200;
inline constexpr std::size_t kMaxConjunctiveProcesses = 40;
inline constexpr std::size_t kMaxRegexProcesses = 6;
inline constexpr std::size_t kMaxRegexPredicates = 20;

/**
 * "conjunctive" and "regex" select the default grids; a suffix overrides the
 * axes, e.g. "conjunctive:processes=10,20;predicates=1,50". Throws
 * kInvalidConfig for bad syntax or a grid beyond the desk limits.
 */
BenchGrid ParseGrid(std::string_view text);

/// One cell of the grid.
struct BenchRow {
  BenchKind kind = BenchKind::kConjunctive;
  std::size_t predicates = 0;
  std::size_t processes = 0;
  /// Mean wall time per state delivery inside the checkers, microseconds.
  double mean_latency_us = 0.0;
  /// Largest lattice of any group (0 for queue checkers).
  std::size_t lattice_nodes = 0;
  std::uint64_t states_ingested = 0;
  /// Queue operations per ingested state (queue checkers only).
  double queue_ops_per_state = 0.0;
  std::size_t detections = 0;
  double wall_ms = 0.0;
};

struct BenchOptions {
  std::uint64_t seed = 1;
  /// Simulated duration of the conjunctive scenario.
  double conjunctive_horizon_ms = 5000.0;
  /// Heartbeats per robot to the monitor in the regex scenario.
  std::size_t regex_heartbeats = 8;
};

std::vector<BenchRow> RunBench(const BenchGrid& grid, const BenchOptions& options = {});

std::string_view BenchKindName(BenchKind k);
/// Header: kind,predicates,processes,mean_latency_us,lattice_nodes,
/// states_ingested,queue_ops_per_state,detections,wall_ms
std::string FormatBenchCsv(const std::vector<BenchRow>& rows);
std::string FormatBenchTable(const std::vector<BenchRow>& rows);

}  // namespace ctxwatch::sim

#endif  // CTXWATCH_SIM_BENCH_HPP_
