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

#include "ctxwatch/oracle/cut_oracle.hpp"

#include <algorithm>
#include <deque>

#include "ctxwatch/error.hpp"

namespace ctxwatch::oracle {

CutSpace::CutSpace(const ExecutedTrace& trace)
    : trace_(&trace), sizes_(trace.Sizes()) {
  const std::size_t n = sizes_.size();
  Cut c(n, 0);
  // Odometer over the full product.
  while (true) {
    if (Consistent(c)) cuts_.push_back(c);
    std::size_t j = 0;
    while (j < n && ++c[j] == sizes_[j]) c[j++] = 0;
    if (j == n) break;
  }
  std::sort(cuts_.begin(), cuts_.end(), [](const Cut& a, const Cut& b) {
    std::uint64_t la = 0, lb = 0;
    for (auto v : a) la += v;
    for (auto v : b) lb += v;
    return la != lb ? la < lb : a < b;
  });
  for (std::size_t i = 0; i < cuts_.size(); ++i) index_.emplace(cuts_[i], i);
  succ_.resize(cuts_.size());
  pred_.resize(cuts_.size());
  for (std::size_t i = 0; i < cuts_.size(); ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      Cut up = cuts_[i];
      ++up[j];
      if (auto k = IndexOf(up)) {
        succ_[i].push_back(*k);
        pred_[*k].push_back(i);
      }
    }
  }
}

bool CutSpace::Consistent(const Cut& c) const {
  for (std::size_t j = 0; j < c.size(); ++j) {
    // State c[j] on j follows events 1..c[j].
    for (std::uint64_t m = 0; m < c[j]; ++m) {
      const auto& from = trace_->receives[j][m];
      if (from && from->event > c[from->process]) return false;
    }
  }
  return true;
}

std::optional<std::size_t> CutSpace::IndexOf(const Cut& c) const {
  auto it = index_.find(c);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<const LocalState*> CutSpace::States(std::size_t i) const {
  std::vector<const LocalState*> out;
  for (std::size_t j = 0; j < cuts_[i].size(); ++j) {
    out.push_back(&trace_->states[j][cuts_[i][j]]);
  }
  return out;
}

bool CutSpace::Satisfies(std::size_t i, const spec::SnapshotPredicate& sp) const {
  auto states = States(i);
  return spec::EvalSnapshot(sp, states);
}

Cut Meet(const Cut& a, const Cut& b) {
  Cut out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::min(a[i], b[i]);
  return out;
}

Cut Join(const Cut& a, const Cut& b) {
  Cut out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

std::uint64_t ProductCount(const std::vector<std::size_t>& sizes) {
  std::uint64_t p = 1;
  for (auto s : sizes) p *= s;
  return p;
}

std::optional<Cut> LeastSatisfying(const CutSpace& space,
                                   const spec::SnapshotPredicate& sp) {
  std::vector<Cut> hits;
  for (std::size_t i = 0; i < space.size(); ++i) {
    if (space.Satisfies(i, sp)) hits.push_back(space.cuts()[i]);
  }
  if (hits.empty()) return std::nullopt;
  Cut least = hits.front();
  for (const auto& h : hits) least = Meet(least, h);
  if (std::find(hits.begin(), hits.end(), least) == hits.end()) {
    throw Error(ErrorCode::kInvariantViolation,
                "satisfying cuts have no least element");
  }
  return least;
}

std::vector<bool> PathsCovered(const CutSpace& space,
                               const spec::SnapshotPredicate& sp) {
  std::vector<bool> avoid(space.size(), false);
  std::deque<std::size_t> queue;
  if (!space.Satisfies(space.bottom(), sp)) {
    avoid[space.bottom()] = true;
    queue.push_back(space.bottom());
  }
  while (!queue.empty()) {
    auto i = queue.front();
    queue.pop_front();
    for (auto s : space.succ(i)) {
      if (!avoid[s] && !space.Satisfies(s, sp)) {
        avoid[s] = true;
        queue.push_back(s);
      }
    }
  }
  std::vector<bool> covered(space.size());
  for (std::size_t i = 0; i < space.size(); ++i) covered[i] = !avoid[i];
  return covered;
}

std::vector<Cut> CompleteTopsInOrder(const CutSpace& space,
                                     const std::vector<Delivery>& deliveries) {
  std::vector<std::uint64_t> count(space.n(), 0);
  std::vector<Cut> out;
  for (const auto& d : deliveries) {
    if (d.terminate) continue;
    ++count[d.state.owner.index];
    if (std::any_of(count.begin(), count.end(),
                    [](std::uint64_t c) { return c == 0; })) {
      continue;
    }
    Cut top(space.n());
    for (std::size_t j = 0; j < top.size(); ++j) top[j] = count[j] - 1;
    if (space.IndexOf(top)) out.push_back(top);
  }
  return out;
}

spec::Letter OracleLabel(const CutSpace& space, std::size_t i,
                         const std::vector<spec::SnapshotPredicate>& alphabet) {
  spec::Letter found = spec::kSinkLetter;
  int hits = 0;
  for (const auto& sp : alphabet) {
    if (space.Satisfies(i, sp)) {
      found = sp.letter;
      ++hits;
    }
  }
  return hits == 1 ? found : spec::kSinkLetter;
}

}  // namespace ctxwatch::oracle
