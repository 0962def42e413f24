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

#include "ctxwatch/oracle/path_oracles.hpp"

#include <algorithm>
#include <functional>

namespace ctxwatch::oracle {

namespace {

using spec::RegexNode;
using K = RegexNode::Kind;

std::string Key(const RegexNode& r) {
  switch (r.kind) {
    case K::kEmpty:
      return "0";
    case K::kEpsilon:
      return "1";
    case K::kLetter:
      return std::string("'") + r.letter;
    case K::kUnion:
    case K::kConcat:
    case K::kStar: {
      std::string out = r.kind == K::kUnion ? "(+" : r.kind == K::kConcat ? "(." : "(*";
      for (const auto& c : r.children) out += " " + Key(c);
      return out + ")";
    }
  }
  return {};
}

bool IsNullable(const RegexNode& r) {
  switch (r.kind) {
    case K::kEmpty:
    case K::kLetter:
      return false;
    case K::kEpsilon:
    case K::kStar:
      return true;
    case K::kUnion:
      return std::any_of(r.children.begin(), r.children.end(), IsNullable);
    case K::kConcat:
      return std::all_of(r.children.begin(), r.children.end(), IsNullable);
  }
  return false;
}

void Flatten(const RegexNode& r, std::vector<RegexNode>& out) {
  if (r.kind == K::kUnion) {
    for (const auto& c : r.children) Flatten(c, out);
  } else if (r.kind != K::kEmpty) {
    out.push_back(r);
  }
}

RegexNode MakeUnion(std::vector<RegexNode> parts) {
  std::vector<RegexNode> flat;
  for (const auto& p : parts) Flatten(p, flat);
  std::vector<std::pair<std::string, RegexNode>> keyed;
  for (auto& f : flat) keyed.emplace_back(Key(f), std::move(f));
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  keyed.erase(std::unique(keyed.begin(), keyed.end(),
                          [](const auto& a, const auto& b) {
                            return a.first == b.first;
                          }),
              keyed.end());
  if (keyed.empty()) return RegexNode::Empty();
  RegexNode acc = keyed.front().second;
  for (std::size_t i = 1; i < keyed.size(); ++i) {
    acc = RegexNode::Union(std::move(acc), keyed[i].second);
  }
  return acc;
}

RegexNode MakeConcat(RegexNode a, RegexNode b) {
  if (a.kind == K::kEmpty || b.kind == K::kEmpty) return RegexNode::Empty();
  if (a.kind == K::kEpsilon) return b;
  if (b.kind == K::kEpsilon) return a;
  return RegexNode::Concat(std::move(a), std::move(b));
}

RegexNode Derive(const RegexNode& r, spec::Letter a) {
  switch (r.kind) {
    case K::kEmpty:
    case K::kEpsilon:
      return RegexNode::Empty();
    case K::kLetter:
      return r.letter == a ? RegexNode::Epsilon() : RegexNode::Empty();
    case K::kUnion: {
      std::vector<RegexNode> parts;
      for (const auto& c : r.children) parts.push_back(Derive(c, a));
      return MakeUnion(std::move(parts));
    }
    case K::kConcat: {
      std::vector<RegexNode> parts;
      parts.push_back(MakeConcat(Derive(r.children[0], a), r.children[1]));
      if (IsNullable(r.children[0])) parts.push_back(Derive(r.children[1], a));
      return MakeUnion(std::move(parts));
    }
    case K::kStar:
      return MakeConcat(Derive(r.children[0], a), r);
  }
  return RegexNode::Empty();
}

}  // namespace

Derivatives::Derivatives(const RegexNode& regex) { Intern(regex); }

int Derivatives::Intern(RegexNode r) {
  auto key = Key(r);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(terms_.size());
  nullable_.push_back(IsNullable(r));
  terms_.push_back(std::move(r));
  ids_.emplace(std::move(key), id);
  return id;
}

int Derivatives::Derive(int id, spec::Letter a) {
  auto key = std::make_pair(id, a);
  auto it = cache_.find(key);
  if (it != cache_.end()) return it->second;
  int next = Intern(oracle::Derive(terms_[id], a));
  cache_.emplace(key, next);
  return next;
}

bool MatchesWord(const RegexNode& regex, std::string_view word) {
  Derivatives d(regex);
  int s = d.initial();
  for (char c : word) s = d.Derive(s, c);
  return d.Nullable(s);
}

std::vector<std::set<int>> PathDerivatives(
    const CutSpace& space, const std::vector<spec::Letter>& labels,
    Derivatives& d) {
  // Cuts are stored in level order, so predecessors come first.
  std::vector<std::set<int>> at(space.size());
  at[space.bottom()].insert(d.Derive(d.initial(), labels[space.bottom()]));
  for (std::size_t i = 1; i < space.size(); ++i) {
    for (auto p : space.pred(i)) {
      for (int s : at[p]) at[i].insert(d.Derive(s, labels[i]));
    }
  }
  return at;
}

std::vector<std::string> PathWords(const CutSpace& space,
                                   const std::vector<spec::Letter>& labels,
                                   std::size_t target, std::size_t limit) {
  std::vector<std::string> words;
  std::string word;
  std::function<void(std::size_t)> walk = [&](std::size_t i) {
    if (words.size() >= limit) return;
    word.push_back(labels[i]);
    if (i == target) {
      words.push_back(word);
    } else {
      for (auto s : space.succ(i)) walk(s);
    }
    word.pop_back();
  };
  walk(space.bottom());
  return words;
}

bool CtlHolds(const CutSpace& space, const spec::CtlFormula& formula,
              const std::vector<std::set<spec::Letter>>& atoms) {
  using CK = spec::CtlFormula::Kind;
  const std::size_t top = space.top();
  std::map<std::pair<const spec::CtlFormula*, std::size_t>, bool> memo;

  auto next = [&](std::size_t x) -> std::vector<std::size_t> {
    if (x == top) return {top};
    return space.succ(x);
  };

  std::function<bool(const spec::CtlFormula&, std::size_t)> eval;
  // Finite path from x along which f holds until g holds.
  std::function<bool(const spec::CtlFormula&, const spec::CtlFormula&,
                     std::size_t)>
      witness = [&](const spec::CtlFormula& f, const spec::CtlFormula& g,
                    std::size_t x) {
        if (eval(g, x)) return true;
        if (!eval(f, x) || x == top) return false;
        for (auto s : space.succ(x)) {
          if (witness(f, g, s)) return true;
        }
        return false;
      };
  // Some infinite path from x violates f U g.
  std::function<bool(const spec::CtlFormula&, const spec::CtlFormula&,
                     std::size_t)>
      counterexample = [&](const spec::CtlFormula& f,
                           const spec::CtlFormula& g, std::size_t x) {
        if (eval(g, x)) return false;
        if (!eval(f, x) || x == top) return true;
        for (auto s : space.succ(x)) {
          if (counterexample(f, g, s)) return true;
        }
        return false;
      };

  eval = [&](const spec::CtlFormula& f, std::size_t x) -> bool {
    auto key = std::make_pair(&f, x);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    bool r = false;
    switch (f.kind) {
      case CK::kTrue:
        r = true;
        break;
      case CK::kAtom:
        r = atoms[x].count(f.letter) > 0;
        break;
      case CK::kAnd:
        r = eval(f.children[0], x) && eval(f.children[1], x);
        break;
      case CK::kNot:
        r = !eval(f.children[0], x);
        break;
      case CK::kExistsNext:
        for (auto s : next(x)) r = r || eval(f.children[0], s);
        break;
      case CK::kForallNext:
        r = true;
        for (auto s : next(x)) r = r && eval(f.children[0], s);
        break;
      case CK::kExistsUntil:
        r = witness(f.children[0], f.children[1], x);
        break;
      case CK::kForallUntil:
        r = !counterexample(f.children[0], f.children[1], x);
        break;
    }
    memo[key] = r;
    return r;
  };
  return eval(formula, space.bottom());
}

}  // namespace ctxwatch::oracle
