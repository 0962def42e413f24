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

#include "ctxwatch/detect/fifo_buffers.hpp"

#include <string>

#include "ctxwatch/error.hpp"

namespace ctxwatch::detect {

FifoBuffers::FifoBuffers(std::size_t n) : next_(n, 0), pending_(n) {
  if (n == 0) throw Error(ErrorCode::kInvalidGroupSize, "empty group");
}

bool FifoBuffers::TakeInOrder(const LocalState& s) {
  const std::size_t p = s.owner.index;
  if (p >= next_.size() || s.seq != next_[p] || !pending_[p].empty()) return false;
  ++next_[p];
  return true;
}

std::vector<LocalState> FifoBuffers::Offer(LocalState s) {
  const std::size_t p = s.owner.index;
  if (p >= next_.size()) {
    throw Error(ErrorCode::kInvalidProcess,
                "state owner " + std::to_string(p) + " outside group of " +
                    std::to_string(next_.size()));
  }
  if (s.seq < next_[p] || pending_[p].count(s.seq)) {
    throw Error(ErrorCode::kDuplicateState,
                "(P" + std::to_string(p) + "," + std::to_string(s.seq) + ")");
  }
  std::vector<LocalState> out;
  if (s.seq != next_[p]) {
    pending_[p].emplace(s.seq, std::move(s));
    return out;
  }
  out.push_back(std::move(s));
  ++next_[p];
  auto& held = pending_[p];
  for (auto it = held.begin(); it != held.end() && it->first == next_[p];
       it = held.erase(it)) {
    out.push_back(std::move(it->second));
    ++next_[p];
  }
  return out;
}

std::size_t FifoBuffers::held() const {
  std::size_t total = 0;
  for (const auto& h : pending_) total += h.size();
  return total;
}

void FifoBuffers::CheckDrained() const {
  for (std::size_t p = 0; p < pending_.size(); ++p) {
    if (pending_[p].empty()) continue;
    throw Error(ErrorCode::kStalledStream,
                "P" + std::to_string(p) + " waits for seq " +
                    std::to_string(next_[p]) + " with " +
                    std::to_string(pending_[p].size()) + " state(s) held");
  }
}

std::vector<LocalState> DrainReorderBuffer(std::size_t n,
                                           std::vector<LocalState> raw) {
  FifoBuffers buffers(n);
  std::vector<LocalState> out;
  out.reserve(raw.size());
  for (auto& s : raw) {
    for (auto& d : buffers.Offer(std::move(s))) out.push_back(std::move(d));
  }
  buffers.CheckDrained();
  return out;
}

}  // namespace ctxwatch::detect
