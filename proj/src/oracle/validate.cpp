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

#include "ctxwatch/oracle/validate.hpp"

#include <algorithm>
#include <chrono>
#include <functional>
#include <set>

#include <fmt/format.h>

#include "ctxwatch/detect/conjunctive_checker.hpp"
#include "ctxwatch/detect/lattice_checker.hpp"
#include "ctxwatch/oracle/cut_oracle.hpp"
#include "ctxwatch/oracle/path_oracles.hpp"
#include "ctxwatch/spec/spec_xml.hpp"
#include "ctxwatch/trace/trace_io.hpp"

namespace ctxwatch::oracle {

namespace {

using Check = std::function<std::optional<std::string>(const Script&)>;

class Timer {
 public:
  Timer() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

void Feed(detect::Checker& c, const Delivery& d) {
  if (d.terminate) {
    c.TerminateAfter(d.process, d.count);
  } else {
    c.Deliver(d.state);
  }
}

std::optional<std::string> Guard(const std::function<std::optional<std::string>()>& f) {
  try {
    return f();
  } catch (const std::exception& e) {
    return std::string("exception: ") + e.what();
  }
}

std::string Commented(const std::string& text) {
  std::string out;
  std::size_t start = 0;
  while (start < text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string::npos) end = text.size();
    out += "# " + text.substr(start, end - start) + "\n";
    start = end + 1;
  }
  return out;
}

// Runs one instance and, on the first failure, shrinks it.
void RunInstance(SuiteResult& r, std::uint64_t seed, const Script& script,
                 const Check& check, const spec::PredicateSpec* spec) {
  ++r.instances;
  auto err = check(script);
  if (!err) return;
  ++r.failures;
  if (r.failures > 1) return;
  r.detail = fmt::format("seed {}: {}", seed, *err);
  Script small = Shrink(script, [&](const Script& s) { return check(s).has_value(); });
  auto small_err = check(small);
  r.counterexample = fmt::format("# suite {} seed {}\n# {}\n", r.name, seed,
                                 small_err ? *small_err : *err);
  if (spec) r.counterexample += Commented(spec::SerializeSpecification(*spec));
  r.counterexample += DescribeCounterexample(small);
}

std::optional<std::size_t> FirstMatch(const CutSpace& space,
                                      const std::vector<Cut>& tops,
                                      const std::function<bool(std::size_t)>& ok) {
  for (const auto& t : tops) {
    auto i = space.IndexOf(t);
    if (i && ok(*i)) return i;
  }
  return std::nullopt;
}

std::string Describe(const std::optional<Cut>& c) {
  return c ? detect::CutToString(*c) : std::string("none");
}

ScriptOptions Options(const ValidationOptions& o) {
  ScriptOptions s;
  s.min_processes = o.min_processes;
  s.max_processes = std::max(o.min_processes, o.max_processes);
  s.max_states = o.max_states;
  return s;
}

}  // namespace

std::uint64_t InstanceSeed(std::uint64_t master, std::uint64_t index) {
  std::uint64_t z = master + (index + 1) * 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

std::string DescribeCounterexample(const Script& script) {
  std::string out = "# script " + script.ToString() + "\n";
  auto t = Execute(script);
  for (const auto& line : t.states) {
    for (const auto& s : line) out += trace::FormatRecord(trace::Record::State(s)) + "\n";
  }
  return out;
}

SuiteResult ValidateQueueChecker(const ValidationOptions& o) {
  SuiteResult r;
  r.name = "queue-checker";
  Timer timer;
  for (std::size_t k = 0; k < o.queue_traces; ++k) {
    const auto seed = InstanceSeed(o.seed, k);
    std::mt19937_64 rng(seed);
    Script script = RandomScript(rng, Options(o));
    auto spec = RandomSpec(rng, script.n, Family::kPosConjunctive);
    bool positive = false;
    Check check = [&](const Script& s) {
      return Guard([&]() -> std::optional<std::string> {
        auto t = Execute(s);
        CutSpace space(t);
        const auto& sp = spec.alphabet.front();
        std::mt19937_64 order_rng(seed ^ 0x5bd1e995u);
        auto order = (seed & 1) ? Scramble(t.deliveries, order_rng)
                                : Interleave(t.deliveries, order_rng);
        detect::ConjunctiveChecker c(t.n, sp, detect::DetectionMode::kOnce,
                                     {o.skip_elimination});
        for (const auto& d : order) Feed(c, d);
        c.CheckDrained();
        auto expected = LeastSatisfying(space, sp);
        positive = expected.has_value();
        auto got = c.detections();
        std::optional<Cut> witness;
        if (!got.empty()) witness = got.front().witness;
        if (witness != expected) {
          return fmt::format("witness {} but oracle least cut {}",
                             Describe(witness), Describe(expected));
        }
        const auto st = c.stats();
        if (st.operations() > 4 * t.n * std::max<std::uint64_t>(1, st.states_ingested)) {
          return fmt::format("{} queue operations for {} states", st.operations(),
                             st.states_ingested);
        }
        return std::nullopt;
      });
    };
    RunInstance(r, seed, script, check, &spec);
    r.checks += positive;
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult ValidateLatticeNodes(const ValidationOptions& o) {
  SuiteResult r;
  r.name = "lattice-nodes";
  Timer timer;
  const std::size_t pairs_per_trace =
      o.lattice_traces ? (o.meet_join_pairs + o.lattice_traces - 1) / o.lattice_traces : 0;
  for (std::size_t k = 0; k < o.lattice_traces; ++k) {
    const auto seed = InstanceSeed(o.seed ^ 0x1a77, k);
    std::mt19937_64 rng(seed);
    Script script = RandomScript(rng, Options(o));
    auto spec = RandomSpec(rng, script.n, Family::kPosRegex);
    std::size_t pairs_done = 0;
    Check check = [&](const Script& s) {
      return Guard([&]() -> std::optional<std::string> {
        pairs_done = 0;
        auto t = Execute(s);
        CutSpace space(t);
        std::mt19937_64 order_rng(seed ^ 0x2545f491u);
        auto order = (seed & 1) ? Scramble(t.deliveries, order_rng)
                                : Interleave(t.deliveries, order_rng);
        detect::LatticeChecker c(spec, detect::DetectionMode::kContinuous);
        const auto& lat = c.lattice();
        for (const auto& d : order) {
          Feed(c, d);
          std::size_t expected = 0;
          for (const auto& cut : space.cuts()) {
            bool inside = true;
            for (std::size_t j = 0; j < cut.size(); ++j) {
              inside = inside && cut[j] < lat.incorporated(j);
            }
            expected += inside;
          }
          if (lat.size() != expected) {
            return fmt::format("{} nodes over the received prefix, oracle {}",
                               lat.size(), expected);
          }
        }
        if (lat.size() != space.size()) {
          return fmt::format("{} nodes, oracle {}", lat.size(), space.size());
        }
        for (std::size_t i = 0; i < space.size(); ++i) {
          auto id = lat.Find(space.cuts()[i]);
          if (!id) return "missing node " + detect::CutToString(space.cuts()[i]);
          const auto& node = lat.node(*id);
          std::set<Cut> have, want;
          for (auto s : node.succ) have.insert(lat.node(s).cut);
          for (auto s : space.succ(i)) want.insert(space.cuts()[s]);
          if (have != want) return "successors differ at " + detect::CutToString(node.cut);
          for (auto s : node.succ) {
            if (lat.node(s).level != node.level + 1) return "level jump";
          }
          auto label = OracleLabel(space, i, spec.alphabet);
          if (node.label != label) return "label differs at " + detect::CutToString(node.cut);
        }
        auto ids = lat.SortedNodes();
        if (lat.node(ids.front()).level != 0 ||
            (ids.size() > 1 && lat.node(ids[1]).level == 0)) {
          return std::string("bottom is not the unique level-0 node");
        }
        std::uniform_int_distribution<std::size_t> pick(0, ids.size() - 1);
        for (std::size_t p = 0; p < pairs_per_trace; ++p) {
          const auto& a = lat.node(ids[pick(order_rng)]).cut;
          const auto& b = lat.node(ids[pick(order_rng)]).cut;
          if (!lat.Find(Meet(a, b)) || !lat.Find(Join(a, b))) {
            return "meet/join of " + detect::CutToString(a) + " and " +
                   detect::CutToString(b) + " missing";
          }
          ++pairs_done;
        }
        return std::nullopt;
      });
    };
    RunInstance(r, seed, script, check, &spec);
    r.checks += pairs_done;
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult ValidatePathFamily(const ValidationOptions& o, Family family) {
  SuiteResult r;
  r.name = std::string(FamilyName(family));
  Timer timer;
  const bool ctl = family == Family::kCtl;
  ScriptOptions so = Options(o);
  std::size_t limit = o.max_nodes;
  if (ctl) {
    so.max_processes = std::min<std::size_t>(so.max_processes, 3);
    so.min_processes = std::min(so.min_processes, so.max_processes);
    so.max_states = std::min<std::size_t>(so.max_states, 5);
    limit = o.max_ctl_nodes;
  }
  for (std::size_t k = 0; k < o.path_instances; ++k) {
    const auto seed = InstanceSeed(o.seed ^ (0x9a7 + static_cast<int>(family)), k);
    std::mt19937_64 rng(seed);
    Script script;
    while (true) {
      script = RandomScript(rng, so);
      if (CutSpace(Execute(script)).size() <= limit) break;
    }
    auto spec = RandomSpec(rng, script.n, family);
    bool positive = false;
    Check check = [&](const Script& s) {
      return Guard([&]() -> std::optional<std::string> {
        auto t = Execute(s);
        CutSpace space(t);
        std::mt19937_64 order_rng(seed ^ 0x68e31da4u);
        auto order = Interleave(t.deliveries, order_rng);
        detect::LatticeChecker c(spec, detect::DetectionMode::kOnce);
        for (const auto& d : order) Feed(c, d);
        auto got = c.detections();
        std::optional<Cut> witness;
        if (!got.empty()) witness = got.front().witness;
        const auto tops = CompleteTopsInOrder(space, order);
        const auto& sp = spec.alphabet.front();

        std::optional<Cut> expected;
        switch (family) {
          case Family::kDefConjunctive:
          case Family::kDefRelational: {
            auto covered = PathsCovered(space, sp);
            auto hit = FirstMatch(space, tops, [&](std::size_t i) { return covered[i]; });
            if (hit) expected = space.cuts()[*hit];
            break;
          }
          case Family::kPosRelational:
          case Family::kPosConjunctive: {
            bool any = false;
            for (std::size_t i = 0; i < space.size(); ++i) any = any || space.Satisfies(i, sp);
            positive = any;
            if (any != witness.has_value()) {
              return fmt::format("Pos verdict {} but oracle {}", witness.has_value(), any);
            }
            if (witness) {
              auto i = space.IndexOf(*witness);
              if (!i || !space.Satisfies(*i, sp)) {
                return "witness " + detect::CutToString(*witness) + " does not satisfy";
              }
            }
            return std::nullopt;
          }
          case Family::kPosRegex:
          case Family::kDefRegex: {
            std::vector<spec::Letter> labels(space.size());
            for (std::size_t i = 0; i < space.size(); ++i) {
              labels[i] = OracleLabel(space, i, spec.alphabet);
            }
            Derivatives d(spec.contextual.regex);
            auto at = PathDerivatives(space, labels, d);
            const bool pos = family == Family::kPosRegex;
            auto hit = FirstMatch(space, tops, [&](std::size_t i) {
              auto nullable = [&](int s) { return d.Nullable(s); };
              return pos ? std::any_of(at[i].begin(), at[i].end(), nullable)
                         : std::all_of(at[i].begin(), at[i].end(), nullable);
            });
            if (hit) expected = space.cuts()[*hit];
            break;
          }
          case Family::kCtl: {
            std::vector<std::set<spec::Letter>> atoms(space.size());
            for (std::size_t i = 0; i < space.size(); ++i) {
              for (const auto& a : spec.alphabet) {
                if (space.Satisfies(i, a)) atoms[i].insert(a.letter);
              }
            }
            bool holds = CtlHolds(space, spec.contextual.ctl, atoms);
            positive = holds;
            if (!c.finalized()) return std::string("not finalized");
            if (holds != witness.has_value()) {
              return fmt::format("CTL verdict {} but oracle {} for {}",
                                 witness.has_value(), holds,
                                 spec::ToString(spec.contextual.ctl));
            }
            return std::nullopt;
          }
        }
        positive = expected.has_value();
        if (witness != expected) {
          return fmt::format("witness {} but oracle {}", Describe(witness),
                             Describe(expected));
        }
        return std::nullopt;
      });
    };
    RunInstance(r, seed, script, check, &spec);
    r.checks += positive;
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult ValidateProductLaw(const ValidationOptions& o) {
  SuiteResult r;
  r.name = "product-law";
  Timer timer;
  for (std::size_t k = 0; k < o.product_vectors; ++k) {
    const auto seed = InstanceSeed(o.seed ^ 0x9d0d, k);
    std::mt19937_64 rng(seed);
    std::size_t n = std::uniform_int_distribution<std::size_t>(
        std::max<std::size_t>(1, o.min_processes), std::max<std::size_t>(1, o.max_processes))(rng);
    std::vector<std::size_t> events(n);
    for (auto& e : events) e = std::uniform_int_distribution<std::size_t>(0, 5)(rng);
    Script script = ProductScript(events, rng);
    auto spec = RandomSpec(rng, n, Family::kPosRegex);
    ++r.instances;
    auto err = Guard([&]() -> std::optional<std::string> {
      auto t = Execute(script);
      std::mt19937_64 order_rng(seed);
      detect::LatticeChecker c(spec, detect::DetectionMode::kContinuous);
      for (const auto& d : Scramble(t.deliveries, order_rng)) Feed(c, d);
      std::uint64_t expected = 1;
      for (auto e : events) expected *= e + 1;
      if (c.lattice().size() != expected || CutSpace(t).size() != expected) {
        return fmt::format("sizes {}: lattice {} oracle {} product {}",
                           fmt::join(events, ","), c.lattice().size(),
                           CutSpace(t).size(), expected);
      }
      return std::nullopt;
    });
    if (err) {
      if (++r.failures == 1) r.detail = fmt::format("seed {}: {}", seed, *err);
    }
  }
  r.seconds = timer.seconds();
  return r;
}

SuiteResult ValidatePruning(const ValidationOptions& o) {
  SuiteResult r;
  r.name = "pruning";
  Timer timer;
  static constexpr Family kFamilies[] = {Family::kDefConjunctive, Family::kPosRegex,
                                         Family::kDefRegex, Family::kDefRelational};
  for (std::size_t k = 0; k < o.prune_traces; ++k) {
    const auto seed = InstanceSeed(o.seed ^ 0x9e11, k);
    std::mt19937_64 rng(seed);
    Script script = RandomScript(rng, Options(o));
    auto spec = RandomSpec(rng, script.n, kFamilies[k % 4]);
    std::size_t removed = 0;
    Check check = [&](const Script& s) {
      return Guard([&]() -> std::optional<std::string> {
        removed = 0;
        auto t = Execute(s);
        std::mt19937_64 order_rng(seed);
        auto order = Interleave(t.deliveries, order_rng);
        detect::LatticeChecker plain(spec, detect::DetectionMode::kContinuous);
        detect::LatticeChecker pruned(spec, detect::DetectionMode::kContinuous);
        for (const auto& d : order) {
          Feed(plain, d);
          Feed(pruned, d);
          if (auto top = pruned.lattice().CompleteTop()) {
            removed += pruned.Prune(pruned.lattice().node(*top).cut);
          }
        }
        auto a = plain.detections();
        auto b = pruned.detections();
        std::vector<Cut> wa, wb;
        for (const auto& d : a) wa.push_back(d.witness);
        for (const auto& d : b) wb.push_back(d.witness);
        if (wa != wb) {
          return fmt::format("{} verdicts unpruned, {} pruned", wa.size(), wb.size());
        }
        return std::nullopt;
      });
    };
    RunInstance(r, seed, script, check, &spec);
    r.checks += removed;
  }
  r.seconds = timer.seconds();
  return r;
}

std::vector<SuiteResult> RunAllSuites(const ValidationOptions& o) {
  std::vector<SuiteResult> out;
  out.push_back(ValidateQueueChecker(o));
  out.push_back(ValidateLatticeNodes(o));
  for (auto f : {Family::kDefConjunctive, Family::kPosRegex, Family::kDefRegex,
                 Family::kCtl, Family::kPosRelational, Family::kDefRelational}) {
    out.push_back(ValidatePathFamily(o, f));
  }
  out.push_back(ValidateProductLaw(o));
  out.push_back(ValidatePruning(o));
  return out;
}

}  // namespace ctxwatch::oracle
