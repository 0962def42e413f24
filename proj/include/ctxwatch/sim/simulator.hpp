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

#ifndef CTXWATCH_SIM_SIMULATOR_HPP_
#define CTXWATCH_SIM_SIMULATOR_HPP_

#include <cstdint>
#include <map>
#include <memory>
#include <queue>
#include <vector>

#include "ctxwatch/broker/broker.hpp"
#include "ctxwatch/sim/random.hpp"
#include "ctxwatch/sim/scenario.hpp"
#include "ctxwatch/trace/trace_io.hpp"

namespace ctxwatch::sim {

/// Records the per-group streams of a broker as trace blocks.
class TraceRecorder : public broker::GroupObserver {
 public:
  void OnLifecycle(broker::GroupId g, const std::string& event) override;
  void OnState(broker::GroupId g, const LocalState& opened) override;
  void OnSend(broker::GroupId g, const CausalMessage& m) override;
  void OnReceive(broker::GroupId g, const CausalMessage& m) override;
  void OnDetection(broker::GroupId g, const broker::Notification& n) override;

  /// One block per group in id order, each opened by its checker-start.
  trace::Trace Build() const;
  const std::vector<broker::Notification>& notifications(broker::GroupId g) const;

 private:
  std::map<broker::GroupId, std::vector<trace::Record>> blocks_;
  std::map<broker::GroupId, std::vector<broker::Notification>> notifications_;
};

/**
 * Single-threaded discrete-event simulation of the devices of a scenario.
 * Events run in (time, insertion order); message delays are exponential and
 * independent, so messages of one route may overtake each other.
 */
class Simulator {
 public:
  /// Throws kInvalidConfig.
  Simulator(ScenarioConfig cfg, broker::Broker& broker);
  ~Simulator();

  /// One provider per device, with the time-zero values as initial values.
  void RegisterProviders();
  /// Samples and sends until the horizon, delivers the messages still in
  /// flight, then terminates the collectors of every registered group.
  void Run();

  double now() const { return now_; }
  std::uint64_t events_executed() const { return events_; }
  std::uint64_t messages_sent() const { return next_message_; }

 private:
  enum class Kind { kSample, kSend, kDeliver };
  struct Event {
    double time;
    std::uint64_t order;
    Kind kind;
    std::size_t index;
    bool operator>(const Event& o) const {
      return time != o.time ? time > o.time : order > o.order;
    }
  };
  struct DeviceState;

  void Push(double time, Kind kind, std::size_t index);
  Scalar Value(std::size_t device, std::size_t var);

  ScenarioConfig cfg_;
  broker::Broker& broker_;
  std::vector<MessageRoute> routes_;
  std::vector<std::unique_ptr<DeviceState>> devices_;
  std::vector<Rng> route_rngs_;
  std::priority_queue<Event, std::vector<Event>, std::greater<>> queue_;
  std::map<std::size_t, broker::Envelope> in_flight_;
  double now_ = 0.0;
  std::uint64_t order_ = 0;
  std::uint64_t events_ = 0;
  std::uint64_t next_message_ = 0;
};

struct RunOptions {
  detect::DetectionMode mode = detect::DetectionMode::kOnce;
  bool skip_elimination = false;
};

struct GroupReport {
  broker::GroupId group = 0;
  std::string name;
  broker::GroupStats stats;
  std::vector<broker::Notification> notifications;
  bool finalized = false;
};

struct RunResult {
  trace::Trace trace;
  std::vector<GroupReport> groups;
  double end_time_ms = 0.0;
  std::uint64_t events = 0;
  std::vector<broker::LifecycleEvent> lifecycle;
};

/// Registers the specifications on a fresh broker, runs the scenario and
/// unregisters them again.
RunResult RunScenario(const ScenarioConfig& cfg,
                      const std::vector<spec::PredicateSpec>& specs,
                      RunOptions options = {});

}  // namespace ctxwatch::sim

#endif  // CTXWATCH_SIM_SIMULATOR_HPP_
