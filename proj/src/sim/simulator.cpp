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

#include "ctxwatch/sim/simulator.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "ctxwatch/error.hpp"

namespace ctxwatch::sim {

void TraceRecorder::OnLifecycle(broker::GroupId g, const std::string& event) {
  blocks_[g].push_back(trace::Record::Lifecycle(g, event));
}

void TraceRecorder::OnState(broker::GroupId g, const LocalState& opened) {
  blocks_[g].push_back(trace::Record::State(opened));
}

void TraceRecorder::OnSend(broker::GroupId g, const CausalMessage& m) {
  blocks_[g].push_back(trace::Record::Send(m));
}

void TraceRecorder::OnReceive(broker::GroupId g, const CausalMessage& m) {
  blocks_[g].push_back(trace::Record::Recv(m));
}

void TraceRecorder::OnDetection(broker::GroupId g, const broker::Notification& n) {
  blocks_[g].push_back(trace::Record::Notify(g, n.witness, n.sim_time_ms));
  notifications_[g].push_back(n);
}

trace::Trace TraceRecorder::Build() const {
  trace::Trace t;
  for (const auto& [g, records] : blocks_) {
    t.records.insert(t.records.end(), records.begin(), records.end());
  }
  return t;
}

const std::vector<broker::Notification>& TraceRecorder::notifications(
    broker::GroupId g) const {
  static const std::vector<broker::Notification> kNone;
  auto it = notifications_.find(g);
  return it == notifications_.end() ? kNone : it->second;
}

struct Simulator::DeviceState {
  const DeviceConfig* config;
  Rng rng;
  std::vector<std::unique_ptr<ActivitySchedule>> activities;
  std::uint64_t samples = 0;
};

Simulator::Simulator(ScenarioConfig cfg, broker::Broker& broker)
    : cfg_(std::move(cfg)), broker_(broker) {
  ValidateScenario(cfg_);
  routes_ = cfg_.messages;
  if (cfg_.heartbeat_ms > 0 && cfg_.devices.size() > 1) {
    for (std::size_t i = 0; i < cfg_.devices.size(); ++i) {
      routes_.push_back(MessageRoute{cfg_.devices[i].context_type,
                                     cfg_.devices[(i + 1) % cfg_.devices.size()].context_type,
                                     cfg_.heartbeat_ms,
                                     {}});
    }
  }
  for (std::size_t d = 0; d < cfg_.devices.size(); ++d) {
    auto state = std::make_unique<DeviceState>(
        DeviceState{&cfg_.devices[d], Rng::Stream(cfg_.seed, d), {}, 0});
    for (const auto& v : cfg_.devices[d].variables) {
      std::unique_ptr<ActivitySchedule> a;
      if (v.generator.kind == Generator::Kind::kActivity) {
        double on = v.generator.mean_on_ms > 0 ? v.generator.mean_on_ms : cfg_.activity_mean_on_ms;
        double off =
            v.generator.mean_off_ms > 0 ? v.generator.mean_off_ms : cfg_.activity_mean_off_ms;
        a = std::make_unique<ActivitySchedule>(on, off);
      }
      state->activities.push_back(std::move(a));
    }
    devices_.push_back(std::move(state));
  }
  for (std::size_t r = 0; r < routes_.size(); ++r) {
    route_rngs_.push_back(Rng::Stream(cfg_.seed, (std::uint64_t{1} << 32) + r));
  }
  broker_.SetSimClock([this] { return now_; });
}

Simulator::~Simulator() { broker_.SetSimClock(nullptr); }

void Simulator::RegisterProviders() {
  for (const auto& d : cfg_.devices) {
    broker::ContextProviderConfig p;
    p.context_type = d.context_type;
    p.device_id = d.context_type;
    p.location = cfg_.name;
    p.initial = InitialValues(d);
    broker_.RegisterProvider(p);
  }
}

void Simulator::Push(double time, Kind kind, std::size_t index) {
  queue_.push(Event{time, order_++, kind, index});
}

Scalar Simulator::Value(std::size_t device, std::size_t var) {
  auto& dev = *devices_[device];
  const auto& g = dev.config->variables[var].generator;
  switch (g.kind) {
    case Generator::Kind::kConstant:
      return g.value;
    case Generator::Kind::kActivity:
      return dev.activities[var]->At(dev.rng, now_);
    case Generator::Kind::kScript: {
      Scalar v = g.steps.front().second;
      for (const auto& [t, value] : g.steps) {
        if (t > now_) break;
        v = value;
      }
      return v;
    }
    case Generator::Kind::kUniform: {
      if (KindOf(g.lo) == ScalarKind::kInteger && KindOf(g.hi) == ScalarKind::kInteger) {
        return dev.rng.UniformInt(std::get<std::int64_t>(g.lo), std::get<std::int64_t>(g.hi));
      }
      return dev.rng.Uniform(*AsNumber(g.lo), *AsNumber(g.hi));
    }
  }
  return g.value;
}

void Simulator::Run() {
  const double horizon = cfg_.horizon_ms;
  for (std::size_t d = 0; d < devices_.size(); ++d) {
    // A random phase keeps devices from sampling in lockstep.
    Push(devices_[d]->rng.Uniform(0.0, cfg_.sample_period_ms), Kind::kSample, d);
  }
  for (std::size_t r = 0; r < routes_.size(); ++r) {
    if (routes_[r].times_ms.empty()) {
      Push(DrawExponential(route_rngs_[r], routes_[r].mean_interval_ms), Kind::kSend, r);
    } else {
      for (double t : routes_[r].times_ms) Push(t, Kind::kSend, r);
    }
  }

  while (!queue_.empty()) {
    Event e = queue_.top();
    queue_.pop();
    if (e.kind != Kind::kDeliver && e.time >= horizon) continue;
    now_ = e.time;
    ++events_;
    switch (e.kind) {
      case Kind::kSample: {
        auto& dev = *devices_[e.index];
        if (cfg_.max_samples && dev.samples >= cfg_.max_samples) break;
        ++dev.samples;
        const auto& vars = dev.config->variables;
        for (std::size_t v = 0; v < vars.size(); ++v) {
          broker_.Publish(dev.config->context_type, vars[v].name, Value(e.index, v));
        }
        Push(now_ + cfg_.sample_period_ms, Kind::kSample, e.index);
        break;
      }
      case Kind::kSend: {
        const auto& route = routes_[e.index];
        auto id = next_message_++;
        auto envelope = broker_.Send(route.src, route.dst, id);
        in_flight_.emplace(id, std::move(envelope));
        Push(now_ + DrawExponential(route_rngs_[e.index], cfg_.delay_mean_ms), Kind::kDeliver,
             id);
        if (route.times_ms.empty()) {
          Push(now_ + DrawExponential(route_rngs_[e.index], route.mean_interval_ms), Kind::kSend,
               e.index);
        }
        break;
      }
      case Kind::kDeliver: {
        auto it = in_flight_.find(e.index);
        broker_.Receive(it->second);
        in_flight_.erase(it);
        break;
      }
    }
  }
  now_ = std::max(now_, horizon);
  for (auto g : broker_.Groups()) broker_.FinishCollectors(g);
  broker_.Flush();
}

RunResult RunScenario(const ScenarioConfig& cfg,
                      const std::vector<spec::PredicateSpec>& specs,
                      RunOptions options) {
  broker::BrokerOptions bo;
  bo.mode = options.mode;
  bo.skip_elimination = options.skip_elimination;
  broker::Broker broker(bo);
  TraceRecorder recorder;
  broker.SetObserver(&recorder);
  Simulator sim(cfg, broker);
  sim.RegisterProviders();
  std::vector<broker::GroupId> ids;
  for (const auto& s : specs) ids.push_back(broker.RegisterPredicate(s, nullptr));
  sim.Run();

  RunResult result;
  result.end_time_ms = sim.now();
  result.events = sim.events_executed();
  for (std::size_t i = 0; i < ids.size(); ++i) {
    GroupReport r;
    r.group = ids[i];
    r.name = specs[i].name;
    r.stats = broker.Stats(ids[i]);
    r.notifications = recorder.notifications(ids[i]);
    r.finalized = broker.GroupChecker(ids[i]).finalized();
    result.groups.push_back(std::move(r));
  }
  for (auto g : ids) broker.UnregisterPredicate(g);
  broker.SetObserver(nullptr);
  result.trace = recorder.Build();
  result.lifecycle = broker.lifecycle_log();
  spdlog::debug("scenario '{}': {} events, {} messages", cfg.name, sim.events_executed(),
                sim.messages_sent());
  return result;
}

}  // namespace ctxwatch::sim
