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

#ifndef CTXWATCH_TRACE_TRACE_IO_HPP_
#define CTXWATCH_TRACE_TRACE_IO_HPP_

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "ctxwatch/core/local_state.hpp"
#include "ctxwatch/detect/checker.hpp"

namespace ctxwatch::trace {

/**
 * One line of a trace file. Fields are space separated:
 *
 *   STATE <pid> <seq> begin=<c0,c1,...> end=<...|open> truth=<0|1> vars=<k=v;...>
 *   SEND <src> <dst> <msgid> vc=<...>
 *   RECV <dst> <src> <msgid> vc=<...>
 *   NOTIFY <groupId> cut=<i0,...> simTime=<ms>
 *   LIFECYCLE <groupId> <event>
 *
 * String values in vars are double-quoted with %XX escapes for bytes that
 * would break the line structure.
 */
struct Record {
  enum class Kind { kState, kSend, kRecv, kNotify, kLifecycle };

  Kind kind = Kind::kState;
  LocalState state;           // kState
  ProcessId from;             // kSend: src, kRecv: dst
  ProcessId to;               // kSend: dst, kRecv: src
  std::uint64_t message_id = 0;
  VectorClock clock;          // kSend / kRecv
  std::uint64_t group = 0;    // kNotify / kLifecycle
  detect::Cut cut;            // kNotify
  double sim_time_ms = 0.0;   // kNotify
  std::string event;          // kLifecycle

  static Record State(LocalState s);
  static Record Send(const CausalMessage& m);
  static Record Recv(const CausalMessage& m);
  static Record Notify(std::uint64_t group, detect::Cut cut, double sim_time_ms);
  static Record Lifecycle(std::uint64_t group, std::string event);

  friend bool operator==(const Record&, const Record&) = default;
};

std::string FormatRecord(const Record& r);
/// Throws kParseError.
Record ParseRecord(std::string_view line);

std::string FormatValue(const Scalar& v);
Scalar ParseValue(std::string_view text);

struct Trace {
  std::vector<Record> records;

  std::string ToText() const;
  /// Throws kParseError with the 1-based line number of the bad line.
  static Trace Parse(std::string_view text);
};

}  // namespace ctxwatch::trace

#endif  // CTXWATCH_TRACE_TRACE_IO_HPP_
