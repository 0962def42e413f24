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

#ifndef CTXWATCH_BROKER_BROKER_HPP_
#define CTXWATCH_BROKER_BROKER_HPP_

#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <string_view>
#include <thread>
#include <vector>

#include "ctxwatch/core/local_state.hpp"
#include "ctxwatch/detect/checker.hpp"
#include "ctxwatch/eca/collecting_process.hpp"
#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::broker {

/// What a device announces when it joins: the context type it provides,
/// where it is, and the variables it reports with their initial values.
struct ContextProviderConfig {
  std::string context_type;
  std::string device_id;
  std::string location;
  VariableMap initial;
  /// Minimum change of a pass-through variable that counts as an event.
  double change_threshold = 0.0;
};

/**
 * Parses a provider document:
 *
 *   <provider contextType="leak_R1" device="R1" location="workshop-A">
 *     <variable name="leak" type="bool" initial="false"/>
 *   </provider>
 *
 * Throws kParseError.
 */
ContextProviderConfig ParseProviderConfig(std::string_view document);

struct ProviderHandle {
  std::uint64_t id = 0;
  std::string context_type;
  std::string device_id;
  std::string location;
};

using GroupId = std::uint64_t;

enum class GroupStatus { kCreating, kRunning, kNotified, kStopped };
std::string_view GroupStatusName(GroupStatus s);

struct Notification {
  GroupId group = 0;
  detect::Cut witness;
  bool at_finalization = false;
  double sim_time_ms = 0.0;
  std::chrono::system_clock::time_point wall_time;
};

using Callback = std::function<void(const Notification&)>;

/// One entry of the lifecycle log: checker-start, collector-start:<pid>,
/// collector-stop:<pid>, checker-stop.
struct LifecycleEvent {
  GroupId group = 0;
  std::string event;
};

/// A physical message between two devices. It carries one piggybacked clock
/// for every group in which both ends participate.
struct Envelope {
  std::string src;
  std::string dst;
  std::uint64_t id = 0;
  std::vector<std::pair<GroupId, CausalMessage>> piggybacks;
};

/// Receives the raw per-group stream, e.g. to record a trace. Called on the
/// thread that drove the event, before notification dispatch.
class GroupObserver {
 public:
  virtual ~GroupObserver() = default;
  virtual void OnLifecycle(GroupId g, const std::string& event) = 0;
  virtual void OnState(GroupId g, const LocalState& opened) = 0;
  virtual void OnSend(GroupId g, const CausalMessage& m) = 0;
  virtual void OnReceive(GroupId g, const CausalMessage& m) = 0;
  virtual void OnDetection(GroupId g, const Notification& n) = 0;
};

/// Ingest figures for benchmarking.
struct GroupStats {
  std::uint64_t states_ingested = 0;
  /// Wall time spent inside the checker for state deliveries.
  std::chrono::nanoseconds ingest_time{0};
  std::size_t max_lattice_nodes = 0;
  std::uint64_t queue_operations = 0;
};

struct BrokerOptions {
  detect::DetectionMode mode = detect::DetectionMode::kOnce;
  std::size_t queue_capacity = 1024;
  bool skip_elimination = false;
};

/**
 * Registration facade and lifecycle manager.
 *
 * Registering a predicate parses it, checks that every context type has a
 * provider, starts the checker and only then creates and starts one
 * collecting process per participating device. Unregistering stops the
 * collectors before the checker. Callbacks run on a dedicated dispatch thread
 * fed by a bounded queue that drops its oldest entry when full.
 */
class Broker {
 public:
  explicit Broker(BrokerOptions options = {});
  ~Broker();
  Broker(const Broker&) = delete;
  Broker& operator=(const Broker&) = delete;

  /// Throws kAlreadyRegistered.
  ProviderHandle RegisterProvider(const ContextProviderConfig& cfg);
  /// Throws kMissingProvider.
  void UnregisterProvider(std::string_view context_type);
  std::optional<ProviderHandle> Lookup(std::string_view context_type) const;

  /// Throws kParseError and friends from the parser, kUnresolvedResource
  /// when a context type has no provider. Nothing survives a failure.
  GroupId RegisterPredicate(std::string_view document, Callback callback);
  GroupId RegisterPredicate(spec::PredicateSpec spec, Callback callback);
  /// Throws kNoSuchGroup.
  void UnregisterPredicate(GroupId g);

  /// Terminates the group's collectors so the checker can finalize, without
  /// stopping the checker.
  void FinishCollectors(GroupId g);

  /// A device reports a sample. Every running collector for the context
  /// type that watches the variable sees it.
  void Publish(std::string_view context_type, const std::string& var,
               const Scalar& value);
  /// The sending device's event; see Envelope.
  Envelope Send(std::string_view src, std::string_view dst, std::uint64_t id);
  void Receive(const Envelope& e);

  GroupStatus Status(GroupId g) const;
  const spec::PredicateSpec& Spec(GroupId g) const;
  const detect::Checker& GroupChecker(GroupId g) const;
  GroupStats Stats(GroupId g) const;
  std::vector<GroupId> Groups() const;

  /// Source of the simulated time stamped on notifications.
  void SetSimClock(std::function<double()> clock);
  void SetObserver(GroupObserver* observer);

  std::vector<LifecycleEvent> lifecycle_log() const;
  /// Blocks until every queued notification was dispatched. A no-op on the
  /// dispatch thread itself.
  void Flush();
  std::uint64_t dropped_notifications() const;
  std::uint64_t suppressed_notifications() const;

 private:
  struct Group;
  class GroupSink;

  Group& Find(GroupId g);
  const Group& Find(GroupId g) const;
  void Log(GroupId g, std::string event);
  void StopCollectors(Group& grp);
  void Enqueue(Notification n, Callback cb);
  void DispatchLoop();

  BrokerOptions options_;
  mutable std::recursive_mutex mu_;
  std::map<std::string, ProviderHandle, std::less<>> providers_;
  std::map<std::string, VariableMap, std::less<>> current_values_;
  std::map<std::string, double, std::less<>> thresholds_;
  std::map<GroupId, std::unique_ptr<Group>> groups_;
  std::vector<LifecycleEvent> log_;
  std::uint64_t next_provider_ = 1;
  GroupId next_group_ = 1;
  std::function<double()> sim_clock_;
  GroupObserver* observer_ = nullptr;

  mutable std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::condition_variable idle_cv_;
  std::deque<std::pair<Notification, Callback>> queue_;
  bool dispatching_ = false;
  bool shutdown_ = false;
  std::uint64_t dropped_ = 0;
  std::uint64_t suppressed_ = 0;
  std::thread dispatcher_;
};

}  // namespace ctxwatch::broker

#endif  // CTXWATCH_BROKER_BROKER_HPP_
