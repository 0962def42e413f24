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

#include "ctxwatch/trace/replay.hpp"

#include <map>
#include <memory>

#include "ctxwatch/detect/lattice_checker.hpp"
#include "ctxwatch/error.hpp"

namespace ctxwatch::trace {

namespace {

constexpr std::string_view kStopPrefix = "collector-stop:";
constexpr std::string_view kStartPrefix = "collector-start:";

GroupVerdicts& Slot(std::vector<GroupVerdicts>& out, std::uint64_t g) {
  for (auto& v : out) {
    if (v.group == g) return v;
  }
  out.push_back(GroupVerdicts{g, {}, false});
  return out.back();
}

}  // namespace

std::vector<GroupVerdicts> Replay(const Trace& trace,
                                  const std::vector<spec::PredicateSpec>& specs,
                                  detect::DetectionMode mode) {
  struct Live {
    std::unique_ptr<detect::Checker> checker;
    std::vector<std::uint64_t> seen;
  };
  std::vector<GroupVerdicts> out;
  std::map<std::uint64_t, Live> groups;
  Live* current = nullptr;
  std::uint64_t current_id = 0;

  auto finish = [&]() {
    if (!current) return;
    auto& v = Slot(out, current_id);
    for (const auto& d : current->checker->detections()) {
      v.witnesses.push_back(d.witness);
    }
    v.finalized = current->checker->finalized();
  };

  for (const auto& r : trace.records) {
    switch (r.kind) {
      case Record::Kind::kLifecycle: {
        if (r.event == "checker-start") {
          finish();
          if (groups.count(r.group)) {
            throw Error(ErrorCode::kInvalidConfig,
                        "group " + std::to_string(r.group) + " started twice");
          }
          if (groups.size() >= specs.size()) {
            throw Error(ErrorCode::kInvalidConfig,
                        "trace has more groups than specifications");
          }
          const auto& spec = specs[groups.size()];
          Live live{detect::MakeChecker(spec, mode),
                    std::vector<std::uint64_t>(spec.processes.size(), 0)};
          current = &groups.emplace(r.group, std::move(live)).first->second;
          current_id = r.group;
          Slot(out, r.group);
        } else if (r.event.rfind(kStopPrefix, 0) == 0) {
          if (!current || r.group != current_id) break;
          auto pid = std::stoull(r.event.substr(kStopPrefix.size()));
          if (pid >= current->seen.size()) {
            throw Error(ErrorCode::kInvalidProcess, r.event);
          }
          current->checker->TerminateAfter(ProcessId{pid}, current->seen[pid]);
        }
        break;
      }
      case Record::Kind::kState: {
        if (!current) {
          throw Error(ErrorCode::kParseError, "STATE before any checker-start");
        }
        auto p = r.state.owner.index;
        if (p >= current->seen.size()) {
          throw Error(ErrorCode::kInvalidProcess,
                      "state of P" + std::to_string(p) + " outside group");
        }
        ++current->seen[p];
        current->checker->Deliver(r.state);
        break;
      }
      default:
        break;
    }
  }
  finish();
  return out;
}

std::vector<GroupVerdicts> RecordedVerdicts(const Trace& trace) {
  std::vector<GroupVerdicts> out;
  std::map<std::uint64_t, std::size_t> terminated;
  for (const auto& r : trace.records) {
    if (r.kind == Record::Kind::kLifecycle) {
      if (r.event == "checker-start") Slot(out, r.group);
      if (r.event.rfind(kStopPrefix, 0) == 0) ++terminated[r.group];
    } else if (r.kind == Record::Kind::kNotify) {
      Slot(out, r.group).witnesses.push_back(r.cut);
    }
  }
  // A group is finalized when every collector it started has terminated.
  std::map<std::uint64_t, std::size_t> collectors;
  for (const auto& r : trace.records) {
    if (r.kind == Record::Kind::kLifecycle &&
        r.event.rfind(kStartPrefix, 0) == 0) {
      ++collectors[r.group];
    }
  }
  for (auto& v : out) {
    v.finalized = collectors[v.group] > 0 &&
                  terminated[v.group] == collectors[v.group];
  }
  return out;
}

std::string FormatVerdicts(const std::vector<GroupVerdicts>& verdicts) {
  std::string out;
  for (const auto& v : verdicts) {
    for (const auto& w : v.witnesses) {
      out += "VERDICT " + std::to_string(v.group) +
             " cut=" + detect::CutToString(w) + "\n";
    }
    if (v.finalized) {
      out += "FINAL " + std::to_string(v.group) + " " +
             (v.witnesses.empty() ? "undetermined" : "detected") + "\n";
    }
  }
  return out;
}

}  // namespace ctxwatch::trace
