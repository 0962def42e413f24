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

#include "ctxwatch/broker/broker.hpp"

#include <algorithm>
#include <atomic>

#include <spdlog/spdlog.h>

#include "ctxwatch/detect/conjunctive_checker.hpp"
#include "ctxwatch/detect/lattice_checker.hpp"
#include "ctxwatch/error.hpp"
#include "ctxwatch/spec/spec_xml.hpp"
#include "xml/xml_util.hpp"

namespace ctxwatch::broker {

std::string_view GroupStatusName(GroupStatus s) {
  switch (s) {
    case GroupStatus::kCreating: return "creating";
    case GroupStatus::kRunning: return "running";
    case GroupStatus::kNotified: return "notified";
    case GroupStatus::kStopped: return "stopped";
  }
  return "?";
}

ContextProviderConfig ParseProviderConfig(std::string_view document) {
  xml::Document doc(document);
  auto root = doc.Root();
  if (root.name() != "provider") root.Fail("expected <provider>");
  ContextProviderConfig cfg;
  cfg.context_type = root.RequireAttr("contextType");
  cfg.device_id = root.Attr("device").value_or(cfg.context_type);
  cfg.location = root.Attr("location").value_or("");
  if (auto t = root.Attr("threshold")) {
    auto v = AsNumber(ParseScalarLiteral(*t));
    if (!v || *v < 0) root.Fail("threshold must be a non-negative number");
    cfg.change_threshold = *v;
  }
  for (const auto& var : root.Children("variable")) {
    auto name = var.RequireAttr("name");
    auto text = var.RequireAttr("initial");
    Scalar value;
    if (auto type = var.Attr("type")) {
      auto kind = ParseScalarKind(*type);
      if (!kind) var.Fail("unknown type '" + *type + "'");
      if (*kind == ScalarKind::kString) {
        value = text;
      } else {
        value = ParseScalarLiteral(text);
        if (KindOf(value) != *kind &&
            !(*kind == ScalarKind::kDecimal && KindOf(value) == ScalarKind::kInteger)) {
          var.Fail("initial value '" + text + "' is not a " + *type);
        }
        if (*kind == ScalarKind::kDecimal) value = *AsNumber(value);
      }
    } else {
      value = ParseScalarLiteral(text);
    }
    if (!cfg.initial.emplace(name, value).second) {
      var.Fail("variable '" + name + "' declared twice");
    }
  }
  return cfg;
}

struct Broker::Group {
  GroupId id = 0;
  spec::PredicateSpec spec;
  std::unique_ptr<detect::Checker> checker;
  std::unique_ptr<GroupSink> sink;
  std::vector<std::unique_ptr<eca::CollectingProcess>> collectors;
  Callback callback;
  std::atomic<GroupStatus> status{GroupStatus::kCreating};
  GroupStats stats;

  bool active() const {
    auto s = status.load();
    return s == GroupStatus::kRunning || s == GroupStatus::kNotified;
  }
};

class Broker::GroupSink : public eca::StateSink {
 public:
  GroupSink(Broker* broker, Group* group) : broker_(broker), group_(group) {}

  void Deliver(const LocalState& opened) override {
    if (broker_->observer_) broker_->observer_->OnState(group_->id, opened);
    auto t0 = std::chrono::steady_clock::now();
    group_->checker->Deliver(opened);
    auto& st = group_->stats;
    st.ingest_time += std::chrono::steady_clock::now() - t0;
    ++st.states_ingested;
    if (auto* lc = dynamic_cast<const detect::LatticeChecker*>(group_->checker.get())) {
      st.max_lattice_nodes = std::max(st.max_lattice_nodes, lc->lattice().size());
    }
  }

  void Terminated(ProcessId owner, const VectorClock& final_clock) override {
    group_->checker->Terminated(owner, final_clock);
  }

 private:
  Broker* broker_;
  Group* group_;
};

Broker::Broker(BrokerOptions options) : options_(options) {
  if (options_.queue_capacity == 0) {
    throw Error(ErrorCode::kInvalidConfig, "notification queue capacity must be positive");
  }
  dispatcher_ = std::thread([this] { DispatchLoop(); });
}

Broker::~Broker() {
  {
    std::lock_guard lock(queue_mu_);
    shutdown_ = true;
  }
  queue_cv_.notify_all();
  dispatcher_.join();
}

ProviderHandle Broker::RegisterProvider(const ContextProviderConfig& cfg) {
  std::lock_guard lock(mu_);
  if (cfg.context_type.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "provider without context type");
  }
  if (providers_.count(cfg.context_type)) {
    throw Error(ErrorCode::kAlreadyRegistered, cfg.context_type);
  }
  ProviderHandle h{next_provider_++, cfg.context_type, cfg.device_id, cfg.location};
  providers_.emplace(cfg.context_type, h);
  current_values_[cfg.context_type] = cfg.initial;
  thresholds_[cfg.context_type] = cfg.change_threshold;
  return h;
}

void Broker::UnregisterProvider(std::string_view context_type) {
  std::lock_guard lock(mu_);
  auto it = providers_.find(context_type);
  if (it == providers_.end()) {
    throw Error(ErrorCode::kMissingProvider, std::string(context_type));
  }
  providers_.erase(it);
  current_values_.erase(current_values_.find(context_type));
  thresholds_.erase(thresholds_.find(context_type));
}

std::optional<ProviderHandle> Broker::Lookup(std::string_view context_type) const {
  std::lock_guard lock(mu_);
  auto it = providers_.find(context_type);
  if (it == providers_.end()) return std::nullopt;
  return it->second;
}

GroupId Broker::RegisterPredicate(std::string_view document, Callback callback) {
  return RegisterPredicate(spec::ParseSpecification(document), std::move(callback));
}

GroupId Broker::RegisterPredicate(spec::PredicateSpec spec, Callback callback) {
  std::lock_guard lock(mu_);
  if (spec.processes.empty()) spec::ResolveProcesses(spec);
  auto subs = spec::ExtractLocalPredicates(spec);

  // Resolve everything before creating anything.
  for (std::size_t i = 0; i < spec.processes.size(); ++i) {
    const auto& type = spec.processes[i];
    auto values = current_values_.find(type);
    if (!providers_.count(type) || values == current_values_.end()) {
      throw Error(ErrorCode::kUnresolvedResource, "no provider for '" + type + "'");
    }
    auto sub = subs.find(i);
    if (sub == subs.end()) continue;
    for (const auto& v : sub->second.Variables()) {
      if (!values->second.count(v)) {
        throw Error(ErrorCode::kUnresolvedResource,
                    "provider '" + type + "' does not report '" + v + "'");
      }
    }
  }

  const GroupId id = next_group_++;
  auto owned = std::make_unique<Group>();
  Group& grp = *owned;
  grp.id = id;
  grp.spec = std::move(spec);
  grp.callback = std::move(callback);
  grp.checker = detect::MakeChecker(grp.spec, options_.mode, options_.skip_elimination);
  grp.sink = std::make_unique<GroupSink>(this, &grp);
  grp.checker->SetListener([this, &grp](const detect::Detection& d) {
    Notification n{grp.id, d.witness, d.at_finalization,
                   sim_clock_ ? sim_clock_() : 0.0, std::chrono::system_clock::now()};
    if (grp.status.load() == GroupStatus::kStopped) {
      std::lock_guard q(queue_mu_);
      ++suppressed_;
      return;
    }
    if (observer_) observer_->OnDetection(grp.id, n);
    if (options_.mode == detect::DetectionMode::kOnce) {
      auto expected = GroupStatus::kRunning;
      grp.status.compare_exchange_strong(expected, GroupStatus::kNotified);
    }
    Enqueue(std::move(n), grp.callback);
  });
  groups_.emplace(id, std::move(owned));

  try {
    Log(id, "checker-start");
    const std::size_t n = grp.spec.processes.size();
    for (std::size_t i = 0; i < n; ++i) {
      spec::ProcessSubscription sub;
      if (auto it = subs.find(i); it != subs.end()) sub = it->second;
      sub.context_type = grp.spec.processes[i];
      auto c = std::make_unique<eca::CollectingProcess>(
          ProcessId{i}, n, std::move(sub), thresholds_[grp.spec.processes[i]]);
      c->AttachSink(grp.sink.get());
      grp.collectors.push_back(std::move(c));
    }
    grp.status = GroupStatus::kRunning;
    for (std::size_t i = 0; i < n; ++i) {
      Log(id, "collector-start:" + std::to_string(i));
      grp.collectors[i]->Start(current_values_.at(grp.spec.processes[i]));
    }
  } catch (...) {
    grp.status = GroupStatus::kStopped;
    grp.checker->Halt();
    Log(id, "checker-stop");
    groups_.erase(id);
    throw;
  }
  spdlog::debug("group {} '{}' running with {} collectors", id, groups_.at(id)->spec.name,
                groups_.at(id)->collectors.size());
  return id;
}

void Broker::StopCollectors(Group& grp) {
  for (std::size_t i = 0; i < grp.collectors.size(); ++i) {
    auto& c = *grp.collectors[i];
    if (!c.started() || c.terminated()) continue;
    c.Terminate();
    Log(grp.id, "collector-stop:" + std::to_string(i));
  }
}

void Broker::FinishCollectors(GroupId g) {
  std::lock_guard lock(mu_);
  StopCollectors(Find(g));
}

void Broker::UnregisterPredicate(GroupId g) {
  {
    std::lock_guard lock(mu_);
    auto& grp = Find(g);
    if (grp.status.load() == GroupStatus::kStopped) {
      throw Error(ErrorCode::kNoSuchGroup, "group " + std::to_string(g) + " already stopped");
    }
    StopCollectors(grp);
    grp.checker->Halt();
    Log(g, "checker-stop");
  }
  // Verdicts reached before the checker stopped still reach the application.
  if (std::this_thread::get_id() != dispatcher_.get_id()) Flush();
  std::lock_guard lock(mu_);
  Find(g).status = GroupStatus::kStopped;
  groups_.erase(g);
}

void Broker::Publish(std::string_view context_type, const std::string& var,
                     const Scalar& value) {
  std::lock_guard lock(mu_);
  auto values = current_values_.find(context_type);
  if (values == current_values_.end()) {
    throw Error(ErrorCode::kMissingProvider, std::string(context_type));
  }
  values->second[var] = value;
  for (auto& [id, grp] : groups_) {
    if (!grp->active()) continue;
    auto p = grp->spec.ProcessIndex(context_type);
    if (!p) continue;
    auto& c = *grp->collectors[*p];
    if (c.terminated()) continue;
    const auto& vars = c.variables();
    if (!std::binary_search(vars.begin(), vars.end(), var)) continue;
    c.OnSample(var, value);
  }
}

Envelope Broker::Send(std::string_view src, std::string_view dst, std::uint64_t id) {
  std::lock_guard lock(mu_);
  if (!providers_.count(src)) throw Error(ErrorCode::kMissingProvider, std::string(src));
  if (!providers_.count(dst)) throw Error(ErrorCode::kMissingProvider, std::string(dst));
  Envelope e{std::string(src), std::string(dst), id, {}};
  for (auto& [gid, grp] : groups_) {
    if (!grp->active()) continue;
    auto s = grp->spec.ProcessIndex(src);
    if (!s || grp->collectors[*s]->terminated()) continue;
    auto& c = *grp->collectors[*s];
    if (auto d = grp->spec.ProcessIndex(dst)) {
      auto m = c.OnSendMsg(ProcessId{*d}, id);
      if (observer_) observer_->OnSend(gid, m);
      e.piggybacks.emplace_back(gid, std::move(m));
    } else {
      c.OnExternalSend();
    }
  }
  return e;
}

void Broker::Receive(const Envelope& e) {
  std::lock_guard lock(mu_);
  for (const auto& [gid, m] : e.piggybacks) {
    auto it = groups_.find(gid);
    if (it == groups_.end() || !it->second->active()) continue;
    auto& c = *it->second->collectors.at(m.dst.index);
    if (c.terminated()) continue;
    c.OnReceiveMsg(m);
    if (observer_) observer_->OnReceive(gid, m);
  }
}

GroupStatus Broker::Status(GroupId g) const {
  std::lock_guard lock(mu_);
  auto it = groups_.find(g);
  if (it == groups_.end()) return GroupStatus::kStopped;
  return it->second->status.load();
}

const spec::PredicateSpec& Broker::Spec(GroupId g) const {
  std::lock_guard lock(mu_);
  return Find(g).spec;
}

const detect::Checker& Broker::GroupChecker(GroupId g) const {
  std::lock_guard lock(mu_);
  return *Find(g).checker;
}

GroupStats Broker::Stats(GroupId g) const {
  std::lock_guard lock(mu_);
  const auto& grp = Find(g);
  GroupStats st = grp.stats;
  if (auto* q = dynamic_cast<const detect::ConjunctiveChecker*>(grp.checker.get())) {
    st.queue_operations = q->stats().operations();
  }
  return st;
}

std::vector<GroupId> Broker::Groups() const {
  std::lock_guard lock(mu_);
  std::vector<GroupId> out;
  for (const auto& [id, grp] : groups_) out.push_back(id);
  return out;
}

void Broker::SetSimClock(std::function<double()> clock) {
  std::lock_guard lock(mu_);
  sim_clock_ = std::move(clock);
}

void Broker::SetObserver(GroupObserver* observer) {
  std::lock_guard lock(mu_);
  observer_ = observer;
}

std::vector<LifecycleEvent> Broker::lifecycle_log() const {
  std::lock_guard lock(mu_);
  return log_;
}

std::uint64_t Broker::dropped_notifications() const {
  std::lock_guard lock(queue_mu_);
  return dropped_;
}

std::uint64_t Broker::suppressed_notifications() const {
  std::lock_guard lock(queue_mu_);
  return suppressed_;
}

Broker::Group& Broker::Find(GroupId g) {
  auto it = groups_.find(g);
  if (it == groups_.end()) {
    throw Error(ErrorCode::kNoSuchGroup, "group " + std::to_string(g));
  }
  return *it->second;
}

const Broker::Group& Broker::Find(GroupId g) const {
  return const_cast<Broker*>(this)->Find(g);
}

void Broker::Log(GroupId g, std::string event) {
  if (observer_) observer_->OnLifecycle(g, event);
  log_.push_back(LifecycleEvent{g, std::move(event)});
}

void Broker::Enqueue(Notification n, Callback cb) {
  std::lock_guard lock(queue_mu_);
  if (queue_.size() >= options_.queue_capacity) {
    ++dropped_;
    spdlog::warn("notification queue full, dropping verdict of group {}",
                 queue_.front().first.group);
    queue_.pop_front();
  }
  queue_.emplace_back(std::move(n), std::move(cb));
  queue_cv_.notify_one();
}

void Broker::DispatchLoop() {
  std::unique_lock lock(queue_mu_);
  while (true) {
    queue_cv_.wait(lock, [this] { return shutdown_ || !queue_.empty(); });
    if (queue_.empty()) break;
    auto [n, cb] = std::move(queue_.front());
    queue_.pop_front();
    dispatching_ = true;
    lock.unlock();
    if (Status(n.group) == GroupStatus::kStopped) {
      std::lock_guard q(queue_mu_);
      ++suppressed_;
    } else if (cb) {
      try {
        cb(n);
      } catch (const std::exception& e) {
        spdlog::error("callback of group {} failed: {}", n.group, e.what());
      } catch (...) {
        spdlog::error("callback of group {} failed", n.group);
      }
    }
    lock.lock();
    dispatching_ = false;
    idle_cv_.notify_all();
  }
}

void Broker::Flush() {
  if (std::this_thread::get_id() == dispatcher_.get_id()) return;
  std::unique_lock lock(queue_mu_);
  idle_cv_.wait(lock, [this] { return queue_.empty() && !dispatching_; });
}

}  // namespace ctxwatch::broker
