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

#include "ctxwatch/core/vector_clock.hpp"

#include <algorithm>

#include "ctxwatch/error.hpp"

namespace ctxwatch {

VectorClock VectorClock::Zero(std::size_t n) {
  if (n == 0) {
    throw Error(ErrorCode::kInvalidGroupSize, "group size must be at least 1");
  }
  return VectorClock(std::vector<Counter>(n, 0));
}

VectorClock VectorClock::FromComponents(std::vector<Counter> components) {
  if (components.empty()) {
    throw Error(ErrorCode::kInvalidGroupSize, "empty clock");
  }
  return VectorClock(std::move(components));
}

VectorClock::Counter VectorClock::at(ProcessId p) const {
  if (p.index >= components_.size()) {
    throw Error(ErrorCode::kInvalidProcess,
                "process " + std::to_string(p.index) + " outside group of " +
                    std::to_string(components_.size()));
  }
  return components_[p.index];
}

VectorClock VectorClock::Tick(ProcessId p) const {
  if (p.index >= components_.size()) {
    throw Error(ErrorCode::kInvalidProcess,
                "process " + std::to_string(p.index) + " outside group of " +
                    std::to_string(components_.size()));
  }
  VectorClock next = *this;
  ++next.components_[p.index];
  return next;
}

VectorClock VectorClock::Merge(const VectorClock& other) const {
  CheckSameSize(other);
  VectorClock merged = *this;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    merged.components_[i] = std::max(components_[i], other.components_[i]);
  }
  return merged;
}

bool VectorClock::Leq(const VectorClock& other) const {
  CheckSameSize(other);
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (components_[i] > other.components_[i]) return false;
  }
  return true;
}

bool VectorClock::ConcurrentWith(const VectorClock& other) const {
  return !Leq(other) && !other.Leq(*this);
}

std::string VectorClock::ToString() const {
  std::string out;
  for (std::size_t i = 0; i < components_.size(); ++i) {
    if (i > 0) out.push_back(',');
    out += std::to_string(components_[i]);
  }
  return out;
}

void VectorClock::CheckSameSize(const VectorClock& other) const {
  if (components_.size() != other.components_.size()) {
    throw Error(ErrorCode::kIncompatibleClocks,
                "clock lengths " + std::to_string(components_.size()) +
                    " and " + std::to_string(other.components_.size()));
  }
}

}  // namespace ctxwatch
