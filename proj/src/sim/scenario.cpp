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

#include "ctxwatch/sim/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "ctxwatch/error.hpp"

namespace ctxwatch::sim {

namespace {

[[noreturn]] void Invalid(const std::string& what) {
  throw Error(ErrorCode::kInvalidConfig, what);
}

std::vector<std::string> Split(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

std::string_view Trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

double Number(std::string_view text) {
  auto v = AsNumber(ParseScalarLiteral(text));
  if (!v) Invalid("expected a number, got '" + std::string(text) + "'");
  return *v;
}

double Positive(std::string_view text) {
  double v = Number(text);
  if (!(v > 0)) Invalid("expected a positive number, got '" + std::string(text) + "'");
  return v;
}

std::uint64_t Unsigned(std::string_view text) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (ec != std::errc() || p != text.data() + text.size()) {
    Invalid("expected an unsigned integer, got '" + std::string(text) + "'");
  }
  return v;
}

DeviceConfig* FindDevice(ScenarioConfig& cfg, std::string_view type) {
  for (auto& d : cfg.devices) {
    if (d.context_type == type) return &d;
  }
  return nullptr;
}

Generator ParseGenerator(const std::vector<std::string>& w) {
  Generator g;
  const std::string& kind = w[2];
  if (kind == "constant") {
    if (w.size() != 4) Invalid("constant takes one value");
    g.kind = Generator::Kind::kConstant;
    g.value = ParseScalarLiteral(w[3]);
  } else if (kind == "activity") {
    g.kind = Generator::Kind::kActivity;
    for (std::size_t i = 3; i < w.size(); ++i) {
      if (w[i].rfind("on=", 0) == 0) {
        g.mean_on_ms = Number(w[i].substr(3));
      } else if (w[i].rfind("off=", 0) == 0) {
        g.mean_off_ms = Number(w[i].substr(4));
      } else {
        Invalid("unknown activity argument '" + w[i] + "'");
      }
    }
  } else if (kind == "script") {
    g.kind = Generator::Kind::kScript;
    for (std::size_t i = 3; i < w.size(); ++i) {
      auto colon = w[i].find(':');
      if (colon == std::string::npos) Invalid("script step '" + w[i] + "' lacks ':'");
      g.steps.emplace_back(Number(w[i].substr(0, colon)),
                           ParseScalarLiteral(w[i].substr(colon + 1)));
      if (g.steps.size() > 1 && g.steps.back().first < g.steps[g.steps.size() - 2].first) {
        Invalid("script steps out of order");
      }
    }
  } else if (kind == "uniform") {
    if (w.size() != 5) Invalid("uniform takes two bounds");
    g.kind = Generator::Kind::kUniform;
    g.lo = ParseScalarLiteral(w[3]);
    g.hi = ParseScalarLiteral(w[4]);
  } else {
    Invalid("unknown generator '" + kind + "'");
  }
  return g;
}

std::string Num(double v) { return fmt::format("{}", v); }

std::string FormatGenerator(const Generator& g) {
  switch (g.kind) {
    case Generator::Kind::kConstant:
      return "constant " + ScalarToString(g.value);
    case Generator::Kind::kActivity: {
      std::string out = "activity";
      if (g.mean_on_ms > 0) out += " on=" + Num(g.mean_on_ms);
      if (g.mean_off_ms > 0) out += " off=" + Num(g.mean_off_ms);
      return out;
    }
    case Generator::Kind::kScript: {
      std::string out = "script";
      for (const auto& [t, v] : g.steps) out += " " + Num(t) + ":" + ScalarToString(v);
      return out;
    }
    case Generator::Kind::kUniform:
      return "uniform " + ScalarToString(g.lo) + " " + ScalarToString(g.hi);
  }
  return {};
}

}  // namespace

void ValidateScenario(const ScenarioConfig& cfg) {
  if (cfg.devices.empty()) Invalid("scenario has no devices");
  if (!(cfg.sample_period_ms > 0)) Invalid("sample_period_ms must be positive");
  if (!(cfg.delay_mean_ms > 0)) Invalid("delay_mean_ms must be positive");
  if (!(cfg.horizon_ms > 0)) Invalid("horizon_ms must be positive");
  if (!(cfg.activity_mean_on_ms > 0) || !(cfg.activity_mean_off_ms > 0)) {
    Invalid("activity means must be positive");
  }
  if (cfg.heartbeat_ms < 0) Invalid("heartbeat_ms must not be negative");
  std::set<std::string> types;
  for (const auto& d : cfg.devices) {
    if (d.context_type.empty() || d.context_type.find_first_of(" \t=#") != std::string::npos) {
      Invalid("bad device name '" + d.context_type + "'");
    }
    if (!types.insert(d.context_type).second) Invalid("device '" + d.context_type + "' twice");
    std::set<std::string> names;
    for (const auto& v : d.variables) {
      if (!names.insert(v.name).second) {
        Invalid("variable '" + v.name + "' twice on " + d.context_type);
      }
      const auto& g = v.generator;
      auto check_word = [&](const Scalar& x) {
        if (ScalarToString(x).find_first_of(" \t#") != std::string::npos) {
          Invalid("value of " + v.name + " must not contain blanks or '#'");
        }
      };
      check_word(g.value);
      for (const auto& step : g.steps) check_word(step.second);
      switch (g.kind) {
        case Generator::Kind::kActivity:
          if (g.mean_on_ms < 0 || g.mean_off_ms < 0) Invalid("negative activity mean");
          break;
        case Generator::Kind::kScript:
          if (g.steps.empty()) Invalid("empty script for " + v.name);
          if (!std::is_sorted(g.steps.begin(), g.steps.end(),
                              [](const auto& a, const auto& b) { return a.first < b.first; })) {
            Invalid("script steps of " + v.name + " out of order");
          }
          break;
        case Generator::Kind::kUniform:
          if (!AsNumber(g.lo) || !AsNumber(g.hi) || *AsNumber(g.hi) < *AsNumber(g.lo)) {
            Invalid("bad uniform bounds for " + v.name);
          }
          break;
        case Generator::Kind::kConstant:
          break;
      }
    }
  }
  for (const auto& m : cfg.messages) {
    if (!types.count(m.src) || !types.count(m.dst)) {
      Invalid("route " + m.src + " -> " + m.dst + " names an unknown device");
    }
    if (m.src == m.dst) Invalid("route from " + m.src + " to itself");
    if (m.times_ms.empty() && !(m.mean_interval_ms > 0)) {
      Invalid("route " + m.src + " -> " + m.dst + " needs a positive interval or times");
    }
  }
}

ScenarioConfig ParseScenario(std::string_view text) {
  ScenarioConfig cfg;
  cfg.devices.clear();
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = Trim(line);
    if (line.empty()) continue;
    try {
      auto eq = line.find('=');
      if (eq == std::string_view::npos) Invalid("expected key = value");
      std::string key(Trim(line.substr(0, eq)));
      std::string_view value = Trim(line.substr(eq + 1));
      if (key == "name") {
        cfg.name = std::string(value);
      } else if (key == "seed") {
        cfg.seed = Unsigned(value);
      } else if (key == "sample_period_ms") {
        cfg.sample_period_ms = Positive(value);
      } else if (key == "activity_mean_on_ms") {
        cfg.activity_mean_on_ms = Positive(value);
      } else if (key == "activity_mean_off_ms") {
        cfg.activity_mean_off_ms = Positive(value);
      } else if (key == "delay_mean_ms") {
        cfg.delay_mean_ms = Positive(value);
      } else if (key == "heartbeat_ms") {
        cfg.heartbeat_ms = Number(value);
        if (cfg.heartbeat_ms < 0) Invalid("heartbeat_ms must not be negative");
      } else if (key == "horizon_ms") {
        cfg.horizon_ms = Positive(value);
      } else if (key == "max_samples") {
        cfg.max_samples = Unsigned(value);
      } else if (key == "device") {
        if (FindDevice(cfg, value)) Invalid("device '" + std::string(value) + "' twice");
        cfg.devices.push_back(DeviceConfig{std::string(value), {}});
      } else if (key == "var") {
        auto w = Split(value);
        if (w.size() < 3) Invalid("var needs <device> <name> <generator>");
        auto* d = FindDevice(cfg, w[0]);
        if (!d) Invalid("var for undeclared device '" + w[0] + "'");
        d->variables.push_back(VariableConfig{w[1], ParseGenerator(w)});
      } else if (key == "message") {
        auto w = Split(value);
        if (w.size() < 4) Invalid("message needs <src> <dst> every|at ...");
        MessageRoute m{w[0], w[1], 0.0, {}};
        if (w[2] == "every" && w.size() == 4) {
          m.mean_interval_ms = Number(w[3]);
        } else if (w[2] == "at") {
          for (std::size_t i = 3; i < w.size(); ++i) m.times_ms.push_back(Number(w[i]));
        } else {
          Invalid("message mode must be 'every <ms>' or 'at <t>...'");
        }
        cfg.messages.push_back(std::move(m));
      } else {
        Invalid("unknown key '" + key + "'");
      }
    } catch (const Error& e) {
      throw Error(ErrorCode::kInvalidConfig,
                  fmt::format("line {}: {}", line_no,
                              std::string(e.what()).substr(ErrorCodeName(e.code()).size() + 2)));
    }
  }
  ValidateScenario(cfg);
  return cfg;
}

std::string FormatScenario(const ScenarioConfig& cfg) {
  std::string out;
  out += "name = " + cfg.name + "\n";
  out += fmt::format("seed = {}\n", cfg.seed);
  out += "sample_period_ms = " + Num(cfg.sample_period_ms) + "\n";
  out += "activity_mean_on_ms = " + Num(cfg.activity_mean_on_ms) + "\n";
  out += "activity_mean_off_ms = " + Num(cfg.activity_mean_off_ms) + "\n";
  out += "delay_mean_ms = " + Num(cfg.delay_mean_ms) + "\n";
  out += "heartbeat_ms = " + Num(cfg.heartbeat_ms) + "\n";
  out += "horizon_ms = " + Num(cfg.horizon_ms) + "\n";
  out += fmt::format("max_samples = {}\n", cfg.max_samples);
  for (const auto& d : cfg.devices) {
    out += "device = " + d.context_type + "\n";
    for (const auto& v : d.variables) {
      out += "var = " + d.context_type + " " + v.name + " " + FormatGenerator(v.generator) + "\n";
    }
  }
  for (const auto& m : cfg.messages) {
    out += "message = " + m.src + " " + m.dst;
    if (m.times_ms.empty()) {
      out += " every " + Num(m.mean_interval_ms);
    } else {
      out += " at";
      for (double t : m.times_ms) out += " " + Num(t);
    }
    out += "\n";
  }
  return out;
}

VariableMap InitialValues(const DeviceConfig& d) {
  VariableMap out;
  for (const auto& v : d.variables) {
    const auto& g = v.generator;
    switch (g.kind) {
      case Generator::Kind::kConstant:
        out[v.name] = g.value;
        break;
      case Generator::Kind::kActivity:
        out[v.name] = false;
        break;
      case Generator::Kind::kScript:
        out[v.name] = g.steps.front().second;
        break;
      case Generator::Kind::kUniform:
        out[v.name] = g.lo;
        break;
    }
  }
  return out;
}

namespace {

Generator Script(std::vector<std::pair<double, Scalar>> steps) {
  Generator g;
  g.kind = Generator::Kind::kScript;
  g.steps = std::move(steps);
  return g;
}

std::string Robot(const char* prefix, std::size_t i) {
  return fmt::format("{}_R{}", prefix, i + 1);
}

}  // namespace

ScenarioConfig PlantLeakScenario(bool overlap, std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.name = overlap ? "plant-leak-overlap" : "plant-leak-separated";
  cfg.seed = seed;
  cfg.sample_period_ms = 4.0;
  cfg.activity_mean_on_ms = 3000.0;
  cfg.activity_mean_off_ms = 600.0;
  cfg.delay_mean_ms = 0.1;
  cfg.heartbeat_ms = 20.0;
  cfg.horizon_ms = 600.0;
  for (std::size_t i = 0; i < 3; ++i) {
    // Overlap: [100,300], [150,350], [200,400]. Separated: 50 ms windows
    // starting at 100, 200, 300 with a handoff after each window.
    double on = overlap ? 100.0 + 50.0 * i : 100.0 + 100.0 * i;
    double off = overlap ? on + 200.0 : on + 50.0;
    cfg.devices.push_back(DeviceConfig{
        Robot("leak", i),
        {VariableConfig{"leak", Script({{0.0, false}, {on, true}, {off, false}})}}});
  }
  if (!overlap) {
    cfg.messages.push_back(MessageRoute{"leak_R1", "leak_R2", 0.0, {160.0}});
    cfg.messages.push_back(MessageRoute{"leak_R2", "leak_R3", 0.0, {260.0}});
  }
  return cfg;
}

ScenarioConfig GatewayScenario(std::size_t robots, bool in_order,
                               std::uint64_t seed, std::size_t heartbeats) {
  if (robots < 2) Invalid("the gateway scenario needs at least two robots");
  ScenarioConfig cfg;
  cfg.name = fmt::format("gateway-{}-{}", robots, in_order ? "in-order" : "violation");
  cfg.seed = seed;
  cfg.sample_period_ms = 4.0;
  cfg.activity_mean_on_ms = 3000.0;
  cfg.activity_mean_off_ms = 600.0;
  cfg.delay_mean_ms = 0.1;
  cfg.horizon_ms = 100.0 * static_cast<double>(robots) + 200.0;

  std::vector<std::size_t> order(robots);
  for (std::size_t i = 0; i < robots; ++i) order[i] = i;
  if (!in_order) std::swap(order[0], order[1]);

  std::vector<double> pass(robots);
  for (std::size_t k = 0; k < robots; ++k) pass[order[k]] = 100.0 + 100.0 * k;
  for (std::size_t i = 0; i < robots; ++i) {
    cfg.devices.push_back(DeviceConfig{
        Robot("zone", i),
        {VariableConfig{"zone", Script({{0.0, std::string("A")}, {pass[i], std::string("B")}})}}});
  }
  // Each robot hands the gateway over once it is through.
  for (std::size_t k = 0; k + 1 < robots; ++k) {
    cfg.messages.push_back(MessageRoute{Robot("zone", order[k]), Robot("zone", order[k + 1]),
                                        0.0, {pass[order[k]] + 20.0}});
  }
  if (heartbeats > 0) {
    Generator ok;
    ok.value = std::string("ok");
    cfg.devices.push_back(DeviceConfig{"monitor", {VariableConfig{"status", ok}}});
    const double gap = cfg.horizon_ms / static_cast<double>(heartbeats);
    for (std::size_t i = 0; i < robots; ++i) {
      cfg.messages.push_back(MessageRoute{Robot("zone", i), "monitor", gap, {}});
    }
  }
  return cfg;
}

ScenarioConfig LeakActivityScenario(std::size_t robots, double horizon_ms,
                                    std::uint64_t seed) {
  ScenarioConfig cfg;
  cfg.name = fmt::format("leak-activity-{}", robots);
  cfg.seed = seed;
  cfg.sample_period_ms = 4.0;
  cfg.activity_mean_on_ms = 3000.0;
  cfg.activity_mean_off_ms = 600.0;
  cfg.delay_mean_ms = 0.1;
  cfg.heartbeat_ms = 100.0;
  cfg.horizon_ms = horizon_ms;
  for (std::size_t i = 0; i < robots; ++i) {
    Generator g;
    g.kind = Generator::Kind::kActivity;
    cfg.devices.push_back(DeviceConfig{Robot("leak", i), {VariableConfig{"leak", g}}});
  }
  return cfg;
}

spec::PredicateSpec LeakSpec(std::size_t robots, std::string name) {
  spec::PredicateSpec s;
  s.name = std::move(name);
  spec::SnapshotPredicate sp;
  sp.letter = 'a';
  for (std::size_t i = 0; i < robots; ++i) {
    sp.conjuncts.push_back(spec::LocalPredicate{
        Robot("leak", i), spec::BoolExpr::Atom("leak", spec::RelOp::kEq, true), 0});
  }
  s.alphabet.push_back(std::move(sp));
  s.contextual.kind = spec::ContextualPredicate::Kind::kSingle;
  s.contextual.letter = 'a';
  s.contextual.modality = spec::Modality::kPos;
  spec::ResolveProcesses(s);
  return s;
}

spec::PredicateSpec GatewaySpec(std::size_t robots) {
  if (robots < 1 || robots > 25) Invalid("gateway spec supports 1..25 robots");
  spec::PredicateSpec s;
  s.name = fmt::format("gateway-order-{}", robots);
  std::string body;
  for (std::size_t j = 0; j <= robots; ++j) {
    spec::SnapshotPredicate sp;
    sp.letter = static_cast<spec::Letter>('a' + j);
    for (std::size_t i = 0; i < robots; ++i) {
      sp.conjuncts.push_back(spec::LocalPredicate{
          Robot("zone", i),
          spec::BoolExpr::Atom("zone", spec::RelOp::kEq, std::string(i < j ? "B" : "A")),
          0});
    }
    s.alphabet.push_back(std::move(sp));
    body += fmt::format("{0}*{0}", static_cast<char>('a' + j));
  }
  s.contextual.kind = spec::ContextualPredicate::Kind::kRegex;
  s.contextual.regex = spec::ParseRegex(body);
  s.contextual.modality = spec::Modality::kDef;
  spec::ResolveProcesses(s);
  return s;
}

}  // namespace ctxwatch::sim
