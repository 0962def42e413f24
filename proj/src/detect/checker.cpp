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

#include "ctxwatch/detect/checker.hpp"

#include <charconv>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "ctxwatch/error.hpp"

namespace ctxwatch::detect {

std::string CutToString(const Cut& cut) {
  return fmt::format("{}", fmt::join(cut, ","));
}

Cut ParseCut(std::string_view text) {
  Cut out;
  const char* p = text.data();
  const char* end = text.data() + text.size();
  while (true) {
    std::uint64_t v = 0;
    auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc()) {
      throw Error(ErrorCode::kParseError, "bad cut '" + std::string(text) + "'");
    }
    out.push_back(v);
    if (next == end) break;
    if (*next != ',') {
      throw Error(ErrorCode::kParseError, "bad cut '" + std::string(text) + "'");
    }
    p = next + 1;
  }
  return out;
}

bool StrictlyAbove(const Cut& a, const Cut& b) {
  if (a.size() != b.size() || a == b) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) return false;
  }
  return true;
}

std::string_view DetectionModeName(DetectionMode m) {
  return m == DetectionMode::kOnce ? "once" : "continuous";
}

std::optional<DetectionMode> ParseDetectionMode(std::string_view name) {
  if (name == "once") return DetectionMode::kOnce;
  if (name == "continuous") return DetectionMode::kContinuous;
  return std::nullopt;
}

Checker::Checker(std::size_t n, DetectionMode mode)
    : mode_(mode),
      buffers_(n),
      expected_count_(n),
      terminated_(n, false) {}

void Checker::SetListener(DetectionListener listener) {
  std::lock_guard lock(mu_);
  listener_ = std::move(listener);
}

void Checker::Deliver(const LocalState& opened) {
  std::lock_guard lock(mu_);
  if (terminated_.at(opened.owner.index)) {
    throw Error(ErrorCode::kInvariantViolation,
                "state after terminate on P" + std::to_string(opened.owner.index));
  }
  if (buffers_.TakeInOrder(opened)) {
    OnState(opened);
  } else {
    for (const auto& s : buffers_.Offer(opened)) OnState(s);
  }
  if (pending_terminations_) ApplyPendingTerminations();
}

void Checker::Terminated(ProcessId owner, const VectorClock& final_clock) {
  TerminateAfter(owner, final_clock.at(owner));
}

void Checker::TerminateAfter(ProcessId p, std::uint64_t state_count) {
  std::lock_guard lock(mu_);
  if (p.index >= terminated_.size()) {
    throw Error(ErrorCode::kInvalidProcess, std::to_string(p.index));
  }
  if (terminated_[p.index] || expected_count_[p.index]) {
    throw Error(ErrorCode::kInvariantViolation,
                "P" + std::to_string(p.index) + " terminated twice");
  }
  expected_count_[p.index] = state_count;
  ++pending_terminations_;
  ApplyPendingTerminations();
}

void Checker::ApplyPendingTerminations() {
  for (std::size_t p = 0; p < terminated_.size(); ++p) {
    if (terminated_[p] || !expected_count_[p]) continue;
    if (buffers_.next_expected(ProcessId{p}) < *expected_count_[p]) continue;
    terminated_[p] = true;
    ++terminated_total_;
    --pending_terminations_;
    OnTerminate(ProcessId{p});
  }
  if (!finalized_ && terminated_total_ == terminated_.size()) {
    finalized_ = true;
    OnFinalize();
  }
}

void Checker::CheckDrained() const {
  std::lock_guard lock(mu_);
  buffers_.CheckDrained();
  for (std::size_t p = 0; p < terminated_.size(); ++p) {
    if (expected_count_[p] && !terminated_[p]) {
      throw Error(ErrorCode::kStalledStream,
                  "P" + std::to_string(p) + " terminated after " +
                      std::to_string(*expected_count_[p]) +
                      " states but only " +
                      std::to_string(buffers_.next_expected(ProcessId{p})) +
                      " arrived");
    }
  }
}

bool Checker::finalized() const {
  std::lock_guard lock(mu_);
  return finalized_;
}

std::vector<Detection> Checker::detections() const {
  std::lock_guard lock(mu_);
  return detections_;
}

bool Checker::detected() const {
  std::lock_guard lock(mu_);
  return !detections_.empty();
}

void Checker::Halt() {
  std::lock_guard lock(mu_);
  halted_ = true;
}

bool Checker::Report(Detection d) {
  if (done()) return false;
  if (!detections_.empty() && !StrictlyAbove(d.witness, detections_.back().witness)) {
    return false;
  }
  detections_.push_back(d);
  if (listener_) listener_(detections_.back());
  return true;
}

}  // namespace ctxwatch::detect
