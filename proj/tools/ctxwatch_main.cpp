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

// Command-line front end: run scenarios, replay traces, validate the
// detectors against brute-force oracles and benchmark scaling trends.
//
// Exit codes: 0 success, 1 runtime error or failed validation, 2 invalid
// input (missing file, parse error, bad configuration).

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ranges.h>
#include <spdlog/spdlog.h>

#include "ctxwatch/error.hpp"
#include "ctxwatch/oracle/validate.hpp"
#include "ctxwatch/sim/bench.hpp"
#include "ctxwatch/sim/scenario.hpp"
#include "ctxwatch/sim/simulator.hpp"
#include "ctxwatch/spec/spec_xml.hpp"
#include "ctxwatch/trace/replay.hpp"
#include "ctxwatch/trace/trace_io.hpp"

namespace {

using namespace ctxwatch;

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitInvalid = 2;

/// Input problems the user can fix; everything else is a runtime error.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

bool IsInputError(ErrorCode code) {
  switch (code) {
    case ErrorCode::kParseError:
    case ErrorCode::kUnknownSymbol:
    case ErrorCode::kDuplicateSymbol:
    case ErrorCode::kUnsupportedPredicateType:
    case ErrorCode::kInvalidConfig:
    case ErrorCode::kUnresolvedResource:
    case ErrorCode::kMissingProvider:
      return true;
    default:
      return false;
  }
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw std::runtime_error("cannot write '" + path + "'");
}

std::vector<spec::PredicateSpec> LoadSpecs(const std::vector<std::string>& paths) {
  std::vector<spec::PredicateSpec> specs;
  for (const auto& p : paths) {
    try {
      specs.push_back(spec::ParseSpecification(ReadFile(p)));
    } catch (const Error& e) {
      if (!IsInputError(e.code())) throw;
      throw InputError(p + ": " + e.what());
    }
  }
  return specs;
}

detect::DetectionMode ParseMode(const std::string& mode) {
  return mode == "continuous" ? detect::DetectionMode::kContinuous
                              : detect::DetectionMode::kOnce;
}

struct RunArgs {
  std::string scenario;
  std::vector<std::string> specs;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string mode = "once";
};

int CmdRun(const RunArgs& a) {
  sim::ScenarioConfig cfg;
  try {
    cfg = sim::ParseScenario(ReadFile(a.scenario));
  } catch (const Error& e) {
    throw InputError(a.scenario + ": " + e.what());
  }
  if (a.seed) cfg.seed = *a.seed;
  auto specs = LoadSpecs(a.specs);
  auto result = sim::RunScenario(cfg, specs, sim::RunOptions{ParseMode(a.mode)});
  if (!a.out.empty()) WriteFile(a.out, result.trace.ToText());
  for (const auto& g : result.groups) {
    for (const auto& n : g.notifications) {
      fmt::print("NOTIFY {} {} cut={} simTime={}{}\n", g.group, g.name,
                 fmt::join(n.witness, ","), n.sim_time_ms,
                 n.at_finalization ? " final" : "");
    }
    fmt::print("GROUP {} {} states={} notifications={} finalized={}\n", g.group, g.name,
               g.stats.states_ingested, g.notifications.size(), g.finalized ? 1 : 0);
  }
  return kExitOk;
}

int CmdReplay(const std::string& path, const std::vector<std::string>& spec_paths,
              const std::string& mode) {
  auto specs = LoadSpecs(spec_paths);
  trace::Trace t;
  try {
    t = trace::Trace::Parse(ReadFile(path));
  } catch (const Error& e) {
    throw InputError(path + ": " + e.what());
  }
  fmt::print("{}", trace::FormatVerdicts(trace::Replay(t, specs, ParseMode(mode))));
  return kExitOk;
}

struct ValidateArgs {
  oracle::ValidationOptions options;
  std::string inject_fault;
  std::string counterexample = "counterexample.trace";
};

int CmdValidate(ValidateArgs a) {
  if (a.inject_fault == "skip-elimination") {
    a.options.skip_elimination = true;
  } else if (!a.inject_fault.empty()) {
    throw InputError("unknown fault '" + a.inject_fault + "'");
  }
  if (a.options.min_processes == 0 || a.options.min_processes > a.options.max_processes ||
      a.options.max_states == 0) {
    throw InputError("invalid validation sizes");
  }
  fmt::print("seed {}\n", a.options.seed);
  bool ok = true;
  for (const auto& r : oracle::RunAllSuites(a.options)) {
    fmt::print("{:<16} {} instances={} checks={} failures={} time={:.2f}s\n", r.name,
               r.ok() ? "PASS" : "FAIL", r.instances, r.checks, r.failures, r.seconds);
    if (r.ok()) continue;
    fmt::print("  {}\n", r.detail);
    if (ok && !r.counterexample.empty()) {
      WriteFile(a.counterexample, r.counterexample);
      fmt::print("  counterexample written to {}\n", a.counterexample);
    }
    ok = false;
  }
  return ok ? kExitOk : kExitRuntime;
}

int CmdBench(const std::string& grid_text, const std::string& format, const std::string& out,
             std::uint64_t seed) {
  sim::BenchGrid grid;
  try {
    grid = sim::ParseGrid(grid_text);
  } catch (const Error& e) {
    throw InputError(e.what());
  }
  sim::BenchOptions options;
  options.seed = seed;
  auto rows = sim::RunBench(grid, options);
  auto text = format == "csv" ? sim::FormatBenchCsv(rows) : sim::FormatBenchTable(rows);
  if (out.empty()) {
    fmt::print("{}", text);
  } else {
    WriteFile(out, text);
    fmt::print("{} rows written to {}\n", rows.size(), out);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Context-aware predicate detection over simulated devices"};
  app.require_subcommand(1);
  bool verbose = false;
  app.add_flag("-v,--verbose", verbose, "Debug logging");

  RunArgs run;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario with predicates registered");
  run_cmd->add_option("--scenario", run.scenario, "Scenario file")->required();
  run_cmd->add_option("--spec", run.specs, "Predicate specification (repeatable)")->required();
  run_cmd->add_option("--seed", run.seed, "Overrides the scenario seed");
  run_cmd->add_option("--out", run.out, "Trace output file");
  run_cmd->add_option("--mode", run.mode, "Detection mode")
      ->check(CLI::IsMember({"once", "continuous"}));

  std::string trace_path;
  std::vector<std::string> replay_specs;
  std::string replay_mode = "once";
  auto* replay_cmd = app.add_subcommand("replay", "Replay a recorded trace through fresh checkers");
  replay_cmd->add_option("trace", trace_path, "Trace file")->required();
  replay_cmd->add_option("--spec", replay_specs, "Specification per group, in order")->required();
  replay_cmd->add_option("--mode", replay_mode, "Detection mode")
      ->check(CLI::IsMember({"once", "continuous"}));

  ValidateArgs val;
  auto& vo = val.options;
  auto* validate_cmd = app.add_subcommand("validate", "Check the detectors against oracles");
  validate_cmd->add_option("--seed", vo.seed, "Master seed");
  validate_cmd->add_option("--queue-traces", vo.queue_traces, "Queue checker traces");
  validate_cmd->add_option("--lattice-traces", vo.lattice_traces, "Lattice construction traces");
  validate_cmd->add_option("--pairs", vo.meet_join_pairs, "Meet/join pairs");
  validate_cmd->add_option("--instances", vo.path_instances, "Instances per path family");
  validate_cmd->add_option("--product-vectors", vo.product_vectors, "Product law size vectors");
  validate_cmd->add_option("--prune-traces", vo.prune_traces, "Pruning traces");
  validate_cmd->add_option("--min-processes", vo.min_processes, "Smallest group");
  validate_cmd->add_option("--max-processes", vo.max_processes, "Largest group");
  validate_cmd->add_option("--max-states", vo.max_states, "States per process");
  validate_cmd->add_option("--inject-fault", val.inject_fault, "Mutation: skip-elimination");
  validate_cmd->add_option("--counterexample", val.counterexample,
                           "Where to write the first minimized counterexample");

  std::string grid = "conjunctive";
  std::string format = "text";
  std::string bench_out;
  std::uint64_t bench_seed = 1;
  auto* bench_cmd = app.add_subcommand("bench", "Measure latency and lattice growth");
  bench_cmd->add_option("--grid", grid, "conjunctive|regex[:processes=..;predicates=..]");
  bench_cmd->add_option("--format", format, "Report format")
      ->check(CLI::IsMember({"text", "csv"}));
  bench_cmd->add_option("--out", bench_out, "Report file");
  bench_cmd->add_option("--seed", bench_seed, "Scenario seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitInvalid;
  }
  spdlog::set_level(verbose ? spdlog::level::debug : spdlog::level::warn);

  try {
    if (*run_cmd) return CmdRun(run);
    if (*replay_cmd) return CmdReplay(trace_path, replay_specs, replay_mode);
    if (*validate_cmd) return CmdValidate(val);
    if (*bench_cmd) return CmdBench(grid, format, bench_out, bench_seed);
  } catch (const InputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInvalid;
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return IsInputError(e.code()) ? kExitInvalid : kExitRuntime;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitOk;
}
