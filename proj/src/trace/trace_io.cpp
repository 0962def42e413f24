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

#include "ctxwatch/trace/trace_io.hpp"

#include <charconv>

#include <fmt/format.h>

#include "ctxwatch/error.hpp"

namespace ctxwatch::trace {

namespace {

bool NeedsEscape(unsigned char c) {
  return c <= 0x20 || c == 0x7f || c == '%' || c == ';' || c == '=' ||
         c == '"';
}

std::string Escape(std::string_view s) {
  std::string out;
  for (unsigned char c : s) {
    if (NeedsEscape(c)) {
      out += fmt::format("%{:02X}", c);
    } else {
      out.push_back(static_cast<char>(c));
    }
  }
  return out;
}

[[noreturn]] void Bad(std::string_view what, std::string_view text) {
  throw Error(ErrorCode::kParseError,
              std::string(what) + " '" + std::string(text) + "'");
}

int HexDigit(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

std::string Unescape(std::string_view s) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] != '%') {
      out.push_back(s[i]);
      continue;
    }
    if (i + 2 >= s.size()) Bad("bad escape in", s);
    int hi = HexDigit(s[i + 1]), lo = HexDigit(s[i + 2]);
    if (hi < 0 || lo < 0) Bad("bad escape in", s);
    out.push_back(static_cast<char>(hi * 16 + lo));
    i += 2;
  }
  return out;
}

std::vector<std::string_view> Split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos
                                      ? std::string_view::npos
                                      : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::uint64_t ParseU64(std::string_view s) {
  std::uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) Bad("bad integer", s);
  return v;
}

std::string_view Field(std::string_view token, std::string_view key) {
  if (token.size() < key.size() + 1 || token.substr(0, key.size()) != key ||
      token[key.size()] != '=') {
    Bad("expected " + std::string(key) + "=, got", token);
  }
  return token.substr(key.size() + 1);
}

VectorClock ParseClock(std::string_view s) {
  std::vector<VectorClock::Counter> c;
  for (auto part : Split(s, ',')) c.push_back(ParseU64(part));
  return VectorClock::FromComponents(std::move(c));
}

std::string FormatVars(const VariableMap& vars) {
  std::string out;
  for (const auto& [k, v] : vars) {
    if (!out.empty()) out += ';';
    out += Escape(k) + "=" + FormatValue(v);
  }
  return out;
}

VariableMap ParseVars(std::string_view s) {
  VariableMap out;
  if (s.empty()) return out;
  for (auto item : Split(s, ';')) {
    auto eq = item.find('=');
    if (eq == std::string_view::npos) Bad("bad variable", item);
    out[Unescape(item.substr(0, eq))] = ParseValue(item.substr(eq + 1));
  }
  return out;
}

}  // namespace

std::string FormatValue(const Scalar& v) {
  if (const auto* s = std::get_if<std::string>(&v)) {
    return "\"" + Escape(*s) + "\"";
  }
  return ScalarToString(v);
}

Scalar ParseValue(std::string_view text) {
  if (!text.empty() && text.front() == '"') {
    if (text.size() < 2 || text.back() != '"') Bad("unterminated string", text);
    return Unescape(text.substr(1, text.size() - 2));
  }
  Scalar v = ParseScalarLiteral(text);
  if (KindOf(v) == ScalarKind::kString) Bad("unquoted string value", text);
  return v;
}

Record Record::State(LocalState s) {
  Record r;
  r.kind = Kind::kState;
  r.state = std::move(s);
  return r;
}

Record Record::Send(const CausalMessage& m) {
  Record r;
  r.kind = Kind::kSend;
  r.from = m.src;
  r.to = m.dst;
  r.message_id = m.id;
  r.clock = m.piggyback;
  return r;
}

Record Record::Recv(const CausalMessage& m) {
  Record r = Send(m);
  r.kind = Kind::kRecv;
  r.from = m.dst;
  r.to = m.src;
  return r;
}

Record Record::Notify(std::uint64_t group, detect::Cut cut, double sim_time_ms) {
  Record r;
  r.kind = Kind::kNotify;
  r.group = group;
  r.cut = std::move(cut);
  r.sim_time_ms = sim_time_ms;
  return r;
}

Record Record::Lifecycle(std::uint64_t group, std::string event) {
  Record r;
  r.kind = Kind::kLifecycle;
  r.group = group;
  r.event = std::move(event);
  return r;
}

std::string FormatRecord(const Record& r) {
  switch (r.kind) {
    case Record::Kind::kState: {
      const auto& s = r.state;
      return fmt::format("STATE {} {} begin={} end={} truth={} vars={}",
                         s.owner.index, s.seq, s.begin.ToString(),
                         s.end ? s.end->ToString() : "open",
                         s.local_pred_truth ? 1 : 0, FormatVars(s.values));
    }
    case Record::Kind::kSend:
    case Record::Kind::kRecv:
      return fmt::format("{} {} {} {} vc={}",
                         r.kind == Record::Kind::kSend ? "SEND" : "RECV",
                         r.from.index, r.to.index, r.message_id,
                         r.clock.ToString());
    case Record::Kind::kNotify:
      return fmt::format("NOTIFY {} cut={} simTime={}", r.group,
                         detect::CutToString(r.cut), r.sim_time_ms);
    case Record::Kind::kLifecycle:
      return fmt::format("LIFECYCLE {} {}", r.group, r.event);
  }
  return {};
}

Record ParseRecord(std::string_view line) {
  if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
  auto t = Split(line, ' ');
  const auto tag = t.front();
  if (tag == "STATE") {
    if (t.size() != 7) Bad("STATE needs 7 fields:", line);
    LocalState s;
    s.owner = ProcessId{ParseU64(t[1])};
    s.seq = ParseU64(t[2]);
    s.begin = ParseClock(Field(t[3], "begin"));
    auto end = Field(t[4], "end");
    if (end != "open") s.end = ParseClock(end);
    auto truth = Field(t[5], "truth");
    if (truth != "0" && truth != "1") Bad("bad truth", truth);
    s.local_pred_truth = truth == "1";
    s.values = ParseVars(Field(t[6], "vars"));
    return Record::State(std::move(s));
  }
  if (tag == "SEND" || tag == "RECV") {
    if (t.size() != 5) Bad("message record needs 5 fields:", line);
    Record r;
    r.kind = tag == "SEND" ? Record::Kind::kSend : Record::Kind::kRecv;
    r.from = ProcessId{ParseU64(t[1])};
    r.to = ProcessId{ParseU64(t[2])};
    r.message_id = ParseU64(t[3]);
    r.clock = ParseClock(Field(t[4], "vc"));
    return r;
  }
  if (tag == "NOTIFY") {
    if (t.size() != 4) Bad("NOTIFY needs 4 fields:", line);
    auto time = Field(t[3], "simTime");
    double ms = 0;
    auto [p, ec] = std::from_chars(time.data(), time.data() + time.size(), ms);
    if (ec != std::errc() || p != time.data() + time.size()) Bad("bad simTime", time);
    return Record::Notify(ParseU64(t[1]), detect::ParseCut(Field(t[2], "cut")), ms);
  }
  if (tag == "LIFECYCLE") {
    if (t.size() != 3 || t[2].empty()) Bad("LIFECYCLE needs 3 fields:", line);
    return Record::Lifecycle(ParseU64(t[1]), std::string(t[2]));
  }
  Bad("unknown record", line);
}

std::string Trace::ToText() const {
  std::string out;
  for (const auto& r : records) {
    out += FormatRecord(r);
    out += '\n';
  }
  return out;
}

Trace Trace::Parse(std::string_view text) {
  Trace trace;
  std::size_t line_no = 0;
  for (auto line : Split(text, '\n')) {
    ++line_no;
    if (line.empty() || line == "\r") continue;
    try {
      trace.records.push_back(ParseRecord(line));
    } catch (const Error& e) {
      // Keep the inner detail without repeating the code name.
      std::string detail = e.what();
      auto prefix = std::string(ErrorCodeName(e.code())) + ": ";
      if (detail.rfind(prefix, 0) == 0) detail.erase(0, prefix.size());
      throw Error(ErrorCode::kParseError, "line " + std::to_string(line_no) + ": " + detail);
    }
  }
  return trace;
}

}  // namespace ctxwatch::trace
