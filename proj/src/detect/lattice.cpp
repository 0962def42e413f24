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

#include "ctxwatch/detect/lattice.hpp"

#include <algorithm>
#include <deque>
#include <unordered_set>

#include "ctxwatch/error.hpp"

namespace ctxwatch::detect {

namespace {

bool CutOrder(const LatticeNode& a, const LatticeNode& b) {
  if (a.level != b.level) return a.level < b.level;
  return a.cut < b.cut;
}

std::uint64_t LevelOf(const Cut& c) {
  std::uint64_t sum = 0;
  for (auto v : c) sum += v;
  return sum;
}

void Erase(std::vector<NodeId>& v, NodeId id) {
  v.erase(std::remove(v.begin(), v.end(), id), v.end());
}

}  // namespace

std::size_t CutHash::operator()(const Cut& c) const noexcept {
  std::uint64_t h = 1469598103934665603ull;
  for (auto v : c) {
    h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
    h *= 1099511628211ull;
  }
  return static_cast<std::size_t>(h);
}

std::string LabelText(spec::Letter a) {
  return a == spec::kSinkLetter ? std::string("⊥") : std::string(1, a);
}

Lattice::Lattice(std::size_t n)
    : states_(n), incorporated_(n, 0), terminated_(n, false), by_position_(n) {
  if (n == 0) throw Error(ErrorCode::kInvalidGroupSize, "empty group");
}

std::vector<NodeId> Lattice::AddState(const LocalState& s) {
  const std::size_t p = s.owner.index;
  if (p >= states_.size()) {
    throw Error(ErrorCode::kInvalidProcess, std::to_string(p));
  }
  auto& line = states_[p];
  if (s.seq < line.size()) {
    throw Error(ErrorCode::kDuplicateState,
                "(P" + std::to_string(p) + "," + std::to_string(s.seq) + ")");
  }
  if (s.seq > line.size() || terminated_[p]) {
    throw Error(ErrorCode::kInvariantViolation,
                "state (P" + std::to_string(p) + "," + std::to_string(s.seq) +
                    ") out of order");
  }
  if (!line.empty() && !line.back().end) line.back().end = s.begin;
  line.push_back(s);

  if (bottom_) return Expand(p);
  for (const auto& l : states_) {
    if (l.empty()) return {};
  }
  BuildBottom();
  std::vector<NodeId> created{*bottom_};
  for (std::size_t q = 0; q < states_.size(); ++q) {
    while (incorporated_[q] < states_[q].size()) {
      auto more = Expand(q);
      created.insert(created.end(), more.begin(), more.end());
    }
  }
  return created;
}

void Lattice::MarkTerminated(ProcessId p) { terminated_.at(p.index) = true; }

bool Lattice::all_terminated() const {
  return std::all_of(terminated_.begin(), terminated_.end(),
                     [](bool t) { return t; });
}

NodeId Lattice::bottom() const {
  if (!bottom_) throw Error(ErrorCode::kInvariantViolation, "empty lattice");
  return *bottom_;
}

void Lattice::BuildBottom() {
  for (auto& c : incorporated_) c = 1;
  bottom_ = CreateNode(Cut(states_.size(), 0));
}

bool Lattice::Consistent(const Cut& cut) const {
  const std::size_t n = cut.size();
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!StatesConsistent(states_[a][cut[a]], states_[b][cut[b]])) return false;
    }
  }
  return true;
}

std::vector<NodeId> Lattice::Expand(std::size_t i) {
  const std::uint64_t k = incorporated_[i]++;
  const std::size_t n = states_.size();
  const LocalState& fresh = states_[i][k];

  // A candidate differs from a consistent cut in one component only.
  auto consistent_at = [&](const Cut& c, std::size_t changed) {
    const LocalState& s = changed == i ? fresh : states_[changed][c[changed]];
    for (std::size_t j = 0; j < n; ++j) {
      if (j != changed && !StatesConsistent(s, states_[j][c[j]])) return false;
    }
    return true;
  };

  std::unordered_set<Cut, CutHash> seen;
  std::deque<Cut> frontier;
  static const std::vector<NodeId> kNone;
  const auto& seeds =
      k - 1 < by_position_[i].size() ? by_position_[i][k - 1] : kNone;
  for (NodeId y : seeds) {
    Cut c = nodes_[y].cut;
    c[i] = k;
    if (consistent_at(c, i) && seen.insert(c).second) frontier.push_back(c);
  }
  while (!frontier.empty()) {
    Cut c = std::move(frontier.front());
    frontier.pop_front();
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i || c[j] + 1 >= incorporated_[j]) continue;
      Cut next = c;
      ++next[j];
      if (!seen.count(next) && consistent_at(next, j)) {
        seen.insert(next);
        frontier.push_back(std::move(next));
      }
    }
  }

  std::vector<Cut> cuts(seen.begin(), seen.end());
  std::sort(cuts.begin(), cuts.end(), [](const Cut& a, const Cut& b) {
    auto la = LevelOf(a), lb = LevelOf(b);
    return la != lb ? la < lb : a < b;
  });
  std::vector<NodeId> created;
  created.reserve(cuts.size());
  for (auto& c : cuts) created.push_back(CreateNode(std::move(c)));
  return created;
}

NodeId Lattice::CreateNode(Cut cut) {
  if (index_.count(cut)) {
    throw Error(ErrorCode::kInvariantViolation,
                "node " + CutToString(cut) + " created twice");
  }
  const auto id = static_cast<NodeId>(nodes_.size());
  LatticeNode node;
  node.level = LevelOf(cut);
  for (std::size_t j = 0; j < cut.size(); ++j) {
    if (cut[j] == 0) continue;
    Cut below = cut;
    --below[j];
    auto it = index_.find(below);
    if (it == index_.end()) continue;
    node.pred.push_back(it->second);
    nodes_[it->second].succ.push_back(id);
  }
  for (std::size_t j = 0; j < cut.size(); ++j) {
    auto& slots = by_position_[j];
    if (slots.size() <= cut[j]) slots.resize(cut[j] + 1);
    slots[cut[j]].push_back(id);
  }
  index_.emplace(cut, id);
  node.cut = std::move(cut);
  nodes_.push_back(std::move(node));
  return id;
}

std::optional<NodeId> Lattice::CompleteTop() const {
  if (!bottom_) return std::nullopt;
  Cut top(states_.size());
  for (std::size_t j = 0; j < top.size(); ++j) top[j] = incorporated_[j] - 1;
  return Find(top);
}

std::optional<NodeId> Lattice::Find(const Cut& cut) const {
  auto it = index_.find(cut);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::vector<NodeId> Lattice::SortedNodes() const {
  std::vector<NodeId> ids;
  ids.reserve(index_.size());
  for (const auto& [cut, id] : index_) ids.push_back(id);
  std::sort(ids.begin(), ids.end(), [&](NodeId a, NodeId b) {
    return CutOrder(nodes_[a], nodes_[b]);
  });
  return ids;
}

std::size_t Lattice::retained_states() const {
  std::size_t total = 0;
  for (const auto& l : states_) total += l.size();
  return total;
}

std::vector<const LocalState*> Lattice::CutStates(const Cut& cut) const {
  std::vector<const LocalState*> out(cut.size());
  for (std::size_t j = 0; j < cut.size(); ++j) out[j] = &states_[j][cut[j]];
  return out;
}

std::size_t Lattice::PruneBelow(const Cut& cut) {
  auto target = Find(cut);
  if (!target) {
    throw Error(ErrorCode::kPruneRejected,
                "cut " + CutToString(cut) + " is not a lattice node");
  }
  auto below = [&](const Cut& c) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (c[j] > cut[j]) return false;
    }
    return true;
  };
  auto may_grow = [&](const Cut& c) {
    for (std::size_t j = 0; j < c.size(); ++j) {
      if (!terminated_[j] && c[j] + 1 == incorporated_[j]) return true;
    }
    return false;
  };

  std::vector<NodeId> candidates;
  for (const auto& [c, id] : index_) {
    if (id != *target && below(c)) candidates.push_back(id);
  }
  std::sort(candidates.begin(), candidates.end(), [&](NodeId a, NodeId b) {
    return nodes_[a].level > nodes_[b].level;
  });
  std::unordered_set<NodeId> removable{*target};
  std::vector<NodeId> doomed;
  for (NodeId id : candidates) {
    const auto& node = nodes_[id];
    if (may_grow(node.cut)) continue;
    bool all = std::all_of(node.succ.begin(), node.succ.end(),
                           [&](NodeId s) { return removable.count(s) > 0; });
    if (!all) continue;
    removable.insert(id);
    doomed.push_back(id);
  }

  for (NodeId id : doomed) {
    auto& node = nodes_[id];
    node.alive = false;
    index_.erase(node.cut);
    for (std::size_t j = 0; j < node.cut.size(); ++j) {
      Erase(by_position_[j][node.cut[j]], id);
    }
    for (NodeId s : node.succ) Erase(nodes_[s].pred, id);
    for (NodeId p : node.pred) Erase(nodes_[p].succ, id);
    node.succ.clear();
    node.pred.clear();
  }
  if (bottom_ && !nodes_[*bottom_].alive) bottom_ = *target;
  return doomed.size();
}

std::string Lattice::Dump() const {
  std::string out;
  auto order = SortedNodes();
  for (NodeId id : order) {
    const auto& node = nodes_[id];
    out += "NODE " + CutToString(node.cut) + " level=" +
           std::to_string(node.level) + " label=" + LabelText(node.label) + "\n";
  }
  for (NodeId id : order) {
    std::vector<NodeId> succ = nodes_[id].succ;
    std::sort(succ.begin(), succ.end(), [&](NodeId a, NodeId b) {
      return CutOrder(nodes_[a], nodes_[b]);
    });
    for (NodeId s : succ) {
      out += "EDGE " + CutToString(nodes_[id].cut) + " -> " +
             CutToString(nodes_[s].cut) + "\n";
    }
  }
  return out;
}

}  // namespace ctxwatch::detect
