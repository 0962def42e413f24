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

#ifndef CTXWATCH_ORACLE_PATH_ORACLES_HPP_
#define CTXWATCH_ORACLE_PATH_ORACLES_HPP_

#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "ctxwatch/oracle/cut_oracle.hpp"
#include "ctxwatch/spec/ctl.hpp"
#include "ctxwatch/spec/regex.hpp"

namespace ctxwatch::oracle {

/**
 * Brzozowski derivatives of a regex syntax tree, normalized up to
 * associativity, commutativity and idempotence of union so that the set of
 * derivatives is finite. Independent of the NFA construction.
 */
class Derivatives {
 public:
  explicit Derivatives(const spec::RegexNode& regex);

  int initial() const { return 0; }
  int Derive(int id, spec::Letter a);
  bool Nullable(int id) const { return nullable_[id]; }
  std::size_t size() const { return terms_.size(); }

 private:
  int Intern(spec::RegexNode r);

  std::vector<spec::RegexNode> terms_;
  std::vector<bool> nullable_;
  std::map<std::string, int> ids_;
  std::map<std::pair<int, spec::Letter>, int> cache_;
};

/// Word membership by repeated derivation.
bool MatchesWord(const spec::RegexNode& regex, std::string_view word);

/// For every cut, the derivative states reached by the label words of the
/// paths from bottom to it.
std::vector<std::set<int>> PathDerivatives(
    const CutSpace& space, const std::vector<spec::Letter>& labels,
    Derivatives& d);

/// Words of all bottom-to-`target` paths, for lattices small enough to list.
std::vector<std::string> PathWords(const CutSpace& space,
                                   const std::vector<spec::Letter>& labels,
                                   std::size_t target, std::size_t limit);

/**
 * CTL truth at bottom from the textbook semantics, with the top cut looping
 * to itself. Until operators search explicit paths (a witness for E, a
 * counterexample for A) without memoization, so keep lattices small.
 */
bool CtlHolds(const CutSpace& space, const spec::CtlFormula& f,
              const std::vector<std::set<spec::Letter>>& atoms);

}  // namespace ctxwatch::oracle

#endif  // CTXWATCH_ORACLE_PATH_ORACLES_HPP_
