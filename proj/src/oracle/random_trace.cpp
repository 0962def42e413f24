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

#include "ctxwatch/oracle/random_trace.hpp"

#include <algorithm>
#include <deque>
#include <memory>

#include <fmt/format.h>

#include "ctxwatch/eca/collecting_process.hpp"

namespace ctxwatch::oracle {

namespace {

std::size_t Pick(std::mt19937_64& rng, std::size_t n) {
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
}

class Recorder : public eca::StateSink {
 public:
  explicit Recorder(std::vector<Delivery>& out) : out_(out) {}
  void Deliver(const LocalState& opened) override {
    out_.push_back(Delivery{false, opened, opened.owner, 0});
  }
  void Terminated(ProcessId owner, const VectorClock& final_clock) override {
    out_.push_back(Delivery{true, {}, owner, final_clock.at(owner)});
  }

 private:
  std::vector<Delivery>& out_;
};

}  // namespace

std::string Script::ToString() const {
  std::string out = fmt::format("n={} init=", n);
  for (std::size_t i = 0; i < initial.size(); ++i) {
    out += fmt::format("{}{}", i ? "," : "", initial[i]);
  }
  for (const auto& s : steps) {
    switch (s.kind) {
      case Step::Kind::kSample:
        out += fmt::format(" P{}:x={}", s.process, s.value);
        break;
      case Step::Kind::kSend:
        out += fmt::format(" P{}->P{}", s.process, s.peer);
        break;
      case Step::Kind::kReceive:
        out += fmt::format(" P{}<-#{}", s.process, s.peer);
        break;
    }
  }
  return out;
}

Script RandomScript(std::mt19937_64& rng, const ScriptOptions& o) {
  Script script;
  script.n = o.min_processes +
             Pick(rng, o.max_processes - o.min_processes + 1);
  std::uniform_int_distribution<std::int64_t> value(0, o.max_value);
  for (std::size_t i = 0; i < script.n; ++i) script.initial.push_back(value(rng));

  std::vector<std::size_t> budget(script.n);
  for (auto& b : budget) b = Pick(rng, o.max_states);  // events per process
  std::vector<std::size_t> pending(script.n, 0);
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const double p_msg = o.messages && script.n > 1
                           ? o.message_weight / (1.0 + o.message_weight)
                           : 0.0;
  while (true) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < script.n; ++i) {
      if (budget[i] > 0) live.push_back(i);
    }
    if (live.empty()) break;
    std::size_t p = live[Pick(rng, live.size())];
    Step step;
    step.process = p;
    if (coin(rng) < p_msg) {
      if (pending[p] > 0 && coin(rng) < 0.5) {
        step.kind = Step::Kind::kReceive;
        step.peer = Pick(rng, pending[p]);
        --pending[p];
      } else {
        step.kind = Step::Kind::kSend;
        step.peer = (p + 1 + Pick(rng, script.n - 1)) % script.n;
        ++pending[step.peer];
      }
    } else {
      step.kind = Step::Kind::kSample;
      step.value = value(rng);
    }
    --budget[p];
    script.steps.push_back(step);
  }
  return script;
}

Script ProductScript(const std::vector<std::size_t>& sizes,
                     std::mt19937_64& rng, std::int64_t max_value) {
  Script script;
  script.n = sizes.size();
  std::uniform_int_distribution<std::int64_t> value(0, max_value);
  for (std::size_t i = 0; i < script.n; ++i) script.initial.push_back(value(rng));
  std::vector<std::size_t> left = sizes;
  while (true) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < script.n; ++i) {
      if (left[i] > 0) live.push_back(i);
    }
    if (live.empty()) break;
    std::size_t p = live[Pick(rng, live.size())];
    --left[p];
    script.steps.push_back(Step{Step::Kind::kSample, p, 0, value(rng)});
  }
  return script;
}

std::vector<std::size_t> ExecutedTrace::Sizes() const {
  std::vector<std::size_t> out;
  for (const auto& s : states) out.push_back(s.size());
  return out;
}

ExecutedTrace Execute(const Script& script) {
  ExecutedTrace t;
  t.script = script;
  t.n = script.n;
  t.receives.resize(t.n);
  Recorder recorder(t.deliveries);

  std::vector<std::unique_ptr<eca::CollectingProcess>> procs;
  for (std::size_t i = 0; i < t.n; ++i) {
    spec::ProcessSubscription sub;
    sub.context_type = "P" + std::to_string(i);
    sub.passthrough_vars = {"x"};
    procs.push_back(std::make_unique<eca::CollectingProcess>(
        ProcessId{i}, t.n, std::move(sub)));
    procs.back()->AttachSink(&recorder);
    std::int64_t init = i < script.initial.size() ? script.initial[i] : 0;
    procs.back()->Start(VariableMap{{"x", Scalar{init}}});
  }

  struct InFlight {
    CausalMessage msg;
    ExecutedTrace::SendRef ref;
  };
  std::vector<std::deque<InFlight>> pending(t.n);
  std::uint64_t next_id = 0;
  for (const auto& s : script.steps) {
    if (s.process >= t.n) continue;
    auto& proc = *procs[s.process];
    switch (s.kind) {
      case Step::Kind::kSample:
        proc.OnSample("x", Scalar{s.value});
        t.receives[s.process].push_back(std::nullopt);
        break;
      case Step::Kind::kSend: {
        if (s.peer >= t.n || s.peer == s.process) break;
        auto msg = proc.OnSendMsg(ProcessId{s.peer}, next_id++);
        t.receives[s.process].push_back(std::nullopt);
        pending[s.peer].push_back(
            InFlight{msg, {s.process, t.receives[s.process].size()}});
        break;
      }
      case Step::Kind::kReceive: {
        auto& box = pending[s.process];
        if (box.empty()) break;
        auto it = box.begin() + static_cast<std::ptrdiff_t>(s.peer % box.size());
        InFlight m = *it;
        box.erase(it);
        proc.OnReceiveMsg(m.msg);
        t.receives[s.process].push_back(m.ref);
        break;
      }
    }
  }
  for (auto& p : procs) p->Terminate();

  t.states.resize(t.n);
  for (const auto& d : t.deliveries) {
    if (d.terminate) continue;
    auto& line = t.states[d.state.owner.index];
    if (!line.empty()) line.back().end = d.state.begin;
    line.push_back(d.state);
  }
  for (std::size_t i = 0; i < t.n; ++i) {
    auto& last = t.states[i].back();
    last.end = procs[i]->clock();
  }
  return t;
}

std::vector<Delivery> Interleave(const std::vector<Delivery>& in,
                                 std::mt19937_64& rng) {
  std::vector<std::deque<Delivery>> lanes;
  for (const auto& d : in) {
    std::size_t p = d.terminate ? d.process.index : d.state.owner.index;
    if (lanes.size() <= p) lanes.resize(p + 1);
    lanes[p].push_back(d);
  }
  std::vector<Delivery> out;
  out.reserve(in.size());
  while (true) {
    std::vector<std::size_t> live;
    for (std::size_t i = 0; i < lanes.size(); ++i) {
      if (!lanes[i].empty()) live.push_back(i);
    }
    if (live.empty()) break;
    auto& lane = lanes[live[Pick(rng, live.size())]];
    out.push_back(std::move(lane.front()));
    lane.pop_front();
  }
  return out;
}

std::vector<Delivery> Scramble(const std::vector<Delivery>& in,
                               std::mt19937_64& rng) {
  std::vector<Delivery> states, terms;
  for (const auto& d : in) (d.terminate ? terms : states).push_back(d);
  std::shuffle(states.begin(), states.end(), rng);
  states.insert(states.end(), terms.begin(), terms.end());
  return states;
}

}  // namespace ctxwatch::oracle
