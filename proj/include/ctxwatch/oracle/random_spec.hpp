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

#ifndef CTXWATCH_ORACLE_RANDOM_SPEC_HPP_
#define CTXWATCH_ORACLE_RANDOM_SPEC_HPP_

#include <random>
#include <string_view>

#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::oracle {

enum class Family {
  kPosConjunctive,
  kDefConjunctive,
  kPosRelational,
  kDefRelational,
  kPosRegex,
  kDefRegex,
  kCtl,
};

std::string_view FamilyName(Family f);

/**
 * A random resolved specification over processes "P0".."P<n-1>" reading the
 * integer variable x. Letter 'a' always spans every process in index order,
 * so process i of the group is "Pi". Regex and CTL families add 'b'
 * (conjunctive over a subset) and 'c' (relational over a subset).
 */
spec::PredicateSpec RandomSpec(std::mt19937_64& rng, std::size_t n, Family f);

spec::RegexNode RandomRegex(std::mt19937_64& rng, int depth);
spec::CtlFormula RandomCtl(std::mt19937_64& rng, int depth);

}  // namespace ctxwatch::oracle

#endif  // CTXWATCH_ORACLE_RANDOM_SPEC_HPP_
