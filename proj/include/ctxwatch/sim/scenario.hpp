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

#ifndef CTXWATCH_SIM_SCENARIO_HPP_
#define CTXWATCH_SIM_SCENARIO_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ctxwatch/core/scalar.hpp"
#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::sim {

/// How a device produces the value of one variable over simulated time.
struct Generator {
  enum class Kind { kConstant, kActivity, kScript, kUniform };
  Kind kind = Kind::kConstant;
  Scalar value;  // kConstant
  /// kActivity: exponential on/off holding times; 0 = the scenario defaults.
  double mean_on_ms = 0.0;
  double mean_off_ms = 0.0;
  /// kScript: (time, value) steps, sorted by time; the value before the
  /// first step is the first step's value.
  std::vector<std::pair<double, Scalar>> steps;
  /// kUniform: drawn on every sample; integers when both bounds are.
  Scalar lo;
  Scalar hi;

  friend bool operator==(const Generator&, const Generator&) = default;
};

struct VariableConfig {
  std::string name;
  Generator generator;
  friend bool operator==(const VariableConfig&, const VariableConfig&) = default;
};

struct DeviceConfig {
  std::string context_type;
  std::vector<VariableConfig> variables;
  friend bool operator==(const DeviceConfig&, const DeviceConfig&) = default;
};

/// A message route: periodic sends with exponential gaps, or scripted times.
struct MessageRoute {
  std::string src;
  std::string dst;
  double mean_interval_ms = 0.0;
  std::vector<double> times_ms;
  friend bool operator==(const MessageRoute&, const MessageRoute&) = default;
};

struct ScenarioConfig {
  std::string name = "scenario";
  std::uint64_t seed = 1;
  std::vector<DeviceConfig> devices;
  double sample_period_ms = 400.0;
  double activity_mean_on_ms = 300000.0;
  double activity_mean_off_ms = 60000.0;
  double delay_mean_ms = 10.0;
  /// Adds a ring of heartbeat routes (device i to device i+1) with this mean
  /// interval; 0 disables it.
  double heartbeat_ms = 0.0;
  std::vector<MessageRoute> messages;
  double horizon_ms = 60000.0;
  /// Optional cap on samples per device; 0 = none.
  std::uint64_t max_samples = 0;

  friend bool operator==(const ScenarioConfig&, const ScenarioConfig&) = default;
};

/// Throws kInvalidConfig naming the first problem.
void ValidateScenario(const ScenarioConfig& cfg);

/**
 * Parses the flat key=value form. '#' starts a comment. Repeated keys
 * `device`, `var` and `message` accumulate:
 *
 *   device = leak_R1
 *   var = leak_R1 leak activity on=3000 off=600
 *   var = leak_R1 leak script 0:false 100:true 200:false
 *   var = temp_R1 temperature uniform 20 30
 *   var = zone_R1 zone constant A
 *   message = leak_R1 leak_R2 every 50
 *   message = leak_R1 leak_R2 at 160 260
 *
 * Throws kInvalidConfig with the line number.
 */
ScenarioConfig ParseScenario(std::string_view text);
std::string FormatScenario(const ScenarioConfig& cfg);

/// Variable values at time zero, per device.
VariableMap InitialValues(const DeviceConfig& d);

/// Three robots that either all see the leak at overlapping times or see it
/// one after another, with a handoff message separating the intervals.
ScenarioConfig PlantLeakScenario(bool overlap, std::uint64_t seed);

/// Robots "zone_R1".."zone_Rk" pass a gateway from workshop A to B. In order,
/// each robot passes after receiving the handoff of its predecessor; the
/// violation lets R2 go first. Every robot also sends `heartbeats` messages
/// to a monitoring device outside the group.
ScenarioConfig GatewayScenario(std::size_t robots, bool in_order,
                               std::uint64_t seed, std::size_t heartbeats = 0);

/// Robots "leak_R1".."leak_Rn" with exponential leak activities and a ring
/// heartbeat, scaled down by 100 from the plant parameters.
ScenarioConfig LeakActivityScenario(std::size_t robots, double horizon_ms,
                                    std::uint64_t seed);

/// All robots see the leak: one conjunctive letter over leak_R1..leak_Rn.
spec::PredicateSpec LeakSpec(std::size_t robots, std::string name = "phi1");

/// Def(a*a b*b ...) over k+1 letters; letter j means robots 1..j are in B and
/// the others in A.
spec::PredicateSpec GatewaySpec(std::size_t robots);

}  // namespace ctxwatch::sim

#endif  // CTXWATCH_SIM_SCENARIO_HPP_
