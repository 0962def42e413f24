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

#include "ctxwatch/eca/collecting_process.hpp"

#include <algorithm>
#include <cmath>

#include "ctxwatch/error.hpp"

namespace ctxwatch::eca {

EventFilter::EventFilter(std::vector<spec::LocalPredicate> conditions,
                         std::vector<std::string> passthrough_vars,
                         double change_threshold)
    : conditions_(std::move(conditions)),
      passthrough_vars_(std::move(passthrough_vars)),
      change_threshold_(change_threshold) {
  if (change_threshold_ < 0) {
    throw Error(ErrorCode::kInvalidConfig, "negative change threshold");
  }
}

void EventFilter::Prime(const VariableMap& initial) {
  values_ = initial;
  last_emitted_ = initial;
  truth_ = Evaluate();
}

std::vector<bool> EventFilter::Evaluate() const {
  std::vector<bool> out;
  out.reserve(conditions_.size());
  for (const auto& c : conditions_) out.push_back(spec::EvalLocal(c, values_));
  return out;
}

bool EventFilter::IsPassthrough(const std::string& var) const {
  return std::find(passthrough_vars_.begin(), passthrough_vars_.end(), var) !=
         passthrough_vars_.end();
}

bool EventFilter::Offer(const std::string& var, const Scalar& value) {
  values_[var] = value;
  bool fire = false;
  if (IsPassthrough(var)) {
    if (change_threshold_ == 0.0) {
      fire = true;
    } else {
      auto now = AsNumber(value);
      auto before = AsNumber(last_emitted_[var]);
      fire = !now || !before || std::fabs(*now - *before) >= change_threshold_;
    }
  }
  if (!conditions_.empty()) {
    auto next = Evaluate();
    if (next != truth_) fire = true;
    truth_ = std::move(next);
  }
  if (fire) last_emitted_ = values_;
  return fire;
}

CollectingProcess::CollectingProcess(ProcessId pid, std::size_t group_size,
                                     spec::ProcessSubscription subscription,
                                     double change_threshold)
    : pid_(pid),
      subscription_(std::move(subscription)),
      variables_(subscription_.Variables()),
      filter_(subscription_.conditions, subscription_.passthrough_vars,
              change_threshold),
      clock_(VectorClock::Zero(group_size)) {
  clock_.at(pid_);  // range check
}

void CollectingProcess::Start(const VariableMap& initial) {
  if (started_) {
    throw Error(ErrorCode::kInvariantViolation, "process already started");
  }
  VariableMap values;
  for (const auto& v : variables_) {
    auto it = initial.find(v);
    if (it == initial.end()) {
      throw Error(ErrorCode::kMissingContext,
                  "no initial value for '" + v + "' on " + context_type());
    }
    values.emplace(v, it->second);
  }
  filter_.Prime(values);
  current_ = LocalState{pid_, 0, clock_, std::nullopt, filter_.values(),
                        filter_.primary_truth()};
  started_ = true;
  if (sink_) sink_->Deliver(current_);
}

void CollectingProcess::RequireRunning() const {
  if (!started_ || terminated_) {
    throw Error(ErrorCode::kInvariantViolation,
                "process " + context_type() + " is not running");
  }
}

Emission CollectingProcess::Advance(const VectorClock& next_clock) {
  clock_ = next_clock;
  LocalState closed = current_;
  closed.end = clock_;
  current_ = LocalState{pid_, closed.seq + 1, clock_, std::nullopt,
                        filter_.values(), filter_.primary_truth()};
  if (sink_) sink_->Deliver(current_);
  return Emission{std::move(closed), current_};
}

std::optional<Emission> CollectingProcess::OnSample(const std::string& var,
                                                    const Scalar& value) {
  RequireRunning();
  if (!std::binary_search(variables_.begin(), variables_.end(), var)) {
    throw Error(ErrorCode::kMissingProvider,
                "'" + var + "' is not collected by " + context_type());
  }
  if (!filter_.Offer(var, value)) return std::nullopt;
  return Advance(clock_.Tick(pid_));
}

CausalMessage CollectingProcess::OnSendMsg(ProcessId dst,
                                           std::uint64_t message_id) {
  RequireRunning();
  Advance(clock_.Tick(pid_));
  return CausalMessage{pid_, dst, message_id, clock_};
}

void CollectingProcess::OnExternalSend() {
  RequireRunning();
  Advance(clock_.Tick(pid_));
}

Emission CollectingProcess::OnReceiveMsg(const CausalMessage& m) {
  RequireRunning();
  if (m.dst != pid_) {
    throw Error(ErrorCode::kMisroutedMessage,
                "message " + std::to_string(m.id) + " for process " +
                    std::to_string(m.dst.index) + " delivered to " +
                    std::to_string(pid_.index));
  }
  return Advance(clock_.Merge(m.piggyback).Tick(pid_));
}

LocalState CollectingProcess::Terminate() {
  RequireRunning();
  clock_ = clock_.Tick(pid_);
  current_.end = clock_;
  terminated_ = true;
  if (sink_) sink_->Terminated(pid_, clock_);
  return current_;
}

}  // namespace ctxwatch::eca
