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

#ifndef CTXWATCH_CORE_SCALAR_HPP_
#define CTXWATCH_CORE_SCALAR_HPP_

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

namespace ctxwatch {

/// A context value: leak flags, counters, temperatures, location labels.
using Scalar = std::variant<bool, std::int64_t, double, std::string>;

enum class ScalarKind { kBoolean, kInteger, kDecimal, kString };

using VariableMap = std::map<std::string, Scalar, std::less<>>;

ScalarKind KindOf(const Scalar& value);
std::string_view ScalarKindName(ScalarKind kind);
std::optional<ScalarKind> ParseScalarKind(std::string_view name);

/// Numeric view of integers and decimals; nullopt for booleans and strings.
std::optional<double> AsNumber(const Scalar& value);

/// Infers the type of a literal: true/false, a base-10 integer, a decimal
/// (including inf/-inf), otherwise a string.
Scalar ParseScalarLiteral(std::string_view text);

/// Plain rendering used in diagnostics and XML attributes. Decimals always
/// carry a '.', an exponent or are inf/nan, so ParseScalarLiteral inverts it
/// for every value except strings that look like other kinds.
std::string ScalarToString(const Scalar& value);

}  // namespace ctxwatch

#endif  // CTXWATCH_CORE_SCALAR_HPP_
