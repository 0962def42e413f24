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

#include "ctxwatch/core/scalar.hpp"

#include <charconv>
#include <cmath>

#include <fmt/format.h>

namespace ctxwatch {

ScalarKind KindOf(const Scalar& value) {
  return static_cast<ScalarKind>(value.index());
}

std::string_view ScalarKindName(ScalarKind kind) {
  switch (kind) {
    case ScalarKind::kBoolean: return "boolean";
    case ScalarKind::kInteger: return "integer";
    case ScalarKind::kDecimal: return "decimal";
    case ScalarKind::kString: return "string";
  }
  return "unknown";
}

std::optional<ScalarKind> ParseScalarKind(std::string_view name) {
  if (name == "boolean" || name == "bool") return ScalarKind::kBoolean;
  if (name == "integer" || name == "int") return ScalarKind::kInteger;
  if (name == "decimal" || name == "double") return ScalarKind::kDecimal;
  if (name == "string") return ScalarKind::kString;
  return std::nullopt;
}

std::optional<double> AsNumber(const Scalar& value) {
  if (const auto* i = std::get_if<std::int64_t>(&value)) {
    return static_cast<double>(*i);
  }
  if (const auto* d = std::get_if<double>(&value)) return *d;
  return std::nullopt;
}

Scalar ParseScalarLiteral(std::string_view text) {
  if (text == "true") return true;
  if (text == "false") return false;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty()) {
    std::int64_t i = 0;
    auto [p, ec] = std::from_chars(first, last, i);
    if (ec == std::errc() && p == last) return i;
    double d = 0;
    auto [q, ec2] = std::from_chars(first, last, d);
    if (ec2 == std::errc() && q == last) return d;
  }
  return std::string(text);
}

std::string ScalarToString(const Scalar& value) {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, bool>) {
          return v ? "true" : "false";
        } else if constexpr (std::is_same_v<T, std::int64_t>) {
          return std::to_string(v);
        } else if constexpr (std::is_same_v<T, double>) {
          std::string s = fmt::format("{}", v);
          if (std::isfinite(v) &&
              s.find_first_of(".e") == std::string::npos) {
            s += ".0";
          }
          return s;
        } else {
          return v;
        }
      },
      value);
}

}  // namespace ctxwatch
