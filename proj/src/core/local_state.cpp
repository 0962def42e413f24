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

#include "ctxwatch/core/local_state.hpp"

#include "ctxwatch/error.hpp"

namespace ctxwatch {

VectorClock::Counter LocalState::EndCounter() const {
  if (end) return end->at(owner);
  return begin.at(owner) + 1;
}

bool HappenedBefore(const LocalState& s, const LocalState& t) {
  if (s.begin.size() != t.begin.size()) {
    throw Error(ErrorCode::kIncompatibleClocks,
                "states from groups of different size");
  }
  return s.EndCounter() <= t.begin.at(s.owner);
}

bool StatesConsistent(const LocalState& s, const LocalState& t) {
  if (s.owner == t.owner) {
    throw Error(ErrorCode::kInvalidPair,
                "both states belong to process " +
                    std::to_string(s.owner.index));
  }
  return !HappenedBefore(s, t) && !HappenedBefore(t, s);
}

}  // namespace ctxwatch
