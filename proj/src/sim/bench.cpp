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

#include "ctxwatch/sim/bench.hpp"

#include <chrono>
#include <charconv>

#include <fmt/format.h>

#include "ctxwatch/error.hpp"
#include "ctxwatch/sim/scenario.hpp"
#include "ctxwatch/sim/simulator.hpp"

namespace ctxwatch::sim {

namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, what);
}

std::vector<std::size_t> ParseList(std::string_view text) {
  std::vector<std::size_t> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto comma = text.find(',', start);
    if (comma == std::string_view::npos) comma = text.size();
    auto item = text.substr(start, comma - start);
    std::size_t v = 0;
    auto [p, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (ec != std::errc() || p != item.data() + item.size() || v == 0) {
      Invalid("bad grid value '" + std::string(item) + "'");
    }
    out.push_back(v);
    start = comma + 1;
  }
  return out;
}

void CheckLimits(const BenchGrid& g) {
  for (auto p : g.processes) {
    if (g.kind == BenchKind::kConjunctive && p > kMaxConjunctiveProcesses) {
      Invalid(fmt::format("conjunctive grid allows at most {} processes", kMaxConjunctiveProcesses));
    }
    if (g.kind == BenchKind::kRegex && (p > kMaxRegexProcesses || p < 2)) {
      Invalid(fmt::format("regex grid allows 2..{} processes", kMaxRegexProcesses));
    }
  }
  for (auto q : g.predicates) {
    if (g.kind == BenchKind::kConjunctive && q > kMaxConjunctivePredicates) {
      Invalid(fmt::format("conjunctive grid allows at most {} predicates",
                          kMaxConjunctivePredicates));
    }
    if (g.kind == BenchKind::kRegex && q > kMaxRegexPredicates) {
      Invalid(fmt::format("regex grid allows at most {} predicates", kMaxRegexPredicates));
    }
  }
}

}  // namespace

std::string_view BenchKindName(BenchKind k) {
  return k == BenchKind::kConjunctive ? "conjunctive" : "regex";
}

BenchGrid ParseGrid(std::string_view text) {
  BenchGrid g;
  auto colon = text.find(':');
  auto kind = text.substr(0, colon);
  if (kind == "conjunctive") {
    g = BenchGrid{BenchKind::kConjunctive, {10, 20, 40}, {1, 50, 200}};
  } else if (kind == "regex") {
    g = BenchGrid{BenchKind::kRegex, {3, 4, 5, 6}, {1}};
  } else {
    Invalid("unknown grid kind '" + std::string(kind) + "'");
  }
  if (colon != std::string_view::npos) {
    auto rest = text.substr(colon + 1);
    std::size_t start = 0;
    while (start < rest.size()) {
      auto semi = rest.find(';', start);
      if (semi == std::string_view::npos) semi = rest.size();
      auto part = rest.substr(start, semi - start);
      start = semi + 1;
      auto eq = part.find('=');
      if (eq == std::string_view::npos) Invalid("grid axis needs '=': " + std::string(part));
      auto key = part.substr(0, eq);
      auto values = ParseList(part.substr(eq + 1));
      if (key == "processes") {
        g.processes = values;
      } else if (key == "predicates") {
        g.predicates = values;
      } else {
        Invalid("unknown grid axis '" + std::string(key) + "'");
      }
    }
  }
  CheckLimits(g);
  return g;
}

std::vector<BenchRow> RunBench(const BenchGrid& grid, const BenchOptions& options) {
  CheckLimits(grid);
  std::vector<BenchRow> rows;
  for (auto n : grid.processes) {
    for (auto q : grid.predicates) {
      ScenarioConfig cfg;
      std::vector<spec::PredicateSpec> specs;
      if (grid.kind == BenchKind::kConjunctive) {
        cfg = LeakActivityScenario(n, options.conjunctive_horizon_ms, options.seed);
        for (std::size_t j = 0; j < q; ++j) specs.push_back(LeakSpec(n, fmt::format("phi1-{}", j)));
      } else {
        cfg = GatewayScenario(n, true, options.seed, options.regex_heartbeats);
        for (std::size_t j = 0; j < q; ++j) {
          auto s = GatewaySpec(n);
          s.name += fmt::format("-{}", j);
          specs.push_back(std::move(s));
        }
      }
      auto t0 = std::chrono::steady_clock::now();
      // Continuous mode keeps every checker working for the whole run.
      auto result = RunScenario(cfg, specs, RunOptions{detect::DetectionMode::kContinuous});
      BenchRow row;
      row.kind = grid.kind;
      row.predicates = q;
      row.processes = n;
      row.wall_ms =
          std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
      double latency_sum = 0.0;
      std::uint64_t queue_ops = 0;
      for (const auto& g : result.groups) {
        const auto& st = g.stats;
        row.states_ingested += st.states_ingested;
        row.lattice_nodes = std::max(row.lattice_nodes, st.max_lattice_nodes);
        queue_ops += st.queue_operations;
        row.detections += g.notifications.size();
        if (st.states_ingested) {
          latency_sum += std::chrono::duration<double, std::micro>(st.ingest_time).count() /
                         static_cast<double>(st.states_ingested);
        }
      }
      if (!result.groups.empty()) latency_sum /= static_cast<double>(result.groups.size());
      row.mean_latency_us = latency_sum;
      if (row.states_ingested) {
        row.queue_ops_per_state =
            static_cast<double>(queue_ops) / static_cast<double>(row.states_ingested);
      }
      rows.push_back(row);
    }
  }
  return rows;
}

std::string FormatBenchCsv(const std::vector<BenchRow>& rows) {
  std::string out =
      "kind,predicates,processes,mean_latency_us,lattice_nodes,states_ingested,"
      "queue_ops_per_state,detections,wall_ms\n";
  for (const auto& r : rows) {
    out += fmt::format("{},{},{},{:.3f},{},{},{:.3f},{},{:.1f}\n", BenchKindName(r.kind),
                       r.predicates, r.processes, r.mean_latency_us, r.lattice_nodes,
                       r.states_ingested, r.queue_ops_per_state, r.detections, r.wall_ms);
  }
  return out;
}

std::string FormatBenchTable(const std::vector<BenchRow>& rows) {
  std::string out = fmt::format("{:<12} {:>5} {:>5} {:>14} {:>10} {:>10} {:>9} {:>6} {:>10}\n",
                                "kind", "preds", "procs", "latency(us)", "nodes", "states",
                                "ops/state", "hits", "wall(ms)");
  for (const auto& r : rows) {
    out += fmt::format("{:<12} {:>5} {:>5} {:>14.3f} {:>10} {:>10} {:>9.3f} {:>6} {:>10.1f}\n",
                       BenchKindName(r.kind), r.predicates, r.processes, r.mean_latency_us,
                       r.lattice_nodes, r.states_ingested, r.queue_ops_per_state, r.detections,
                       r.wall_ms);
  }
  return out;
}

}  // namespace ctxwatch::sim
