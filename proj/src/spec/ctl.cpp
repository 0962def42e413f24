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

#include "ctxwatch/spec/ctl.hpp"

namespace ctxwatch::spec {

namespace {

CtlFormula Make(CtlFormula::Kind kind, std::vector<CtlFormula> children) {
  CtlFormula f;
  f.kind = kind;
  f.children = std::move(children);
  return f;
}

void PostOrder(const CtlFormula& f, std::vector<const CtlFormula*>& out) {
  for (const auto& c : f.children) PostOrder(c, out);
  out.push_back(&f);
}

}  // namespace

CtlFormula CtlFormula::True() { return CtlFormula{}; }

CtlFormula CtlFormula::Atom(Letter a) {
  CtlFormula f;
  f.kind = Kind::kAtom;
  f.letter = a;
  return f;
}

CtlFormula CtlFormula::And(CtlFormula a, CtlFormula b) {
  std::vector<CtlFormula> c;
  c.push_back(std::move(a));
  c.push_back(std::move(b));
  return Make(Kind::kAnd, std::move(c));
}

CtlFormula CtlFormula::Not(CtlFormula a) {
  std::vector<CtlFormula> c;
  c.push_back(std::move(a));
  return Make(Kind::kNot, std::move(c));
}

CtlFormula CtlFormula::ExistsNext(CtlFormula a) {
  std::vector<CtlFormula> c;
  c.push_back(std::move(a));
  return Make(Kind::kExistsNext, std::move(c));
}

CtlFormula CtlFormula::ForallNext(CtlFormula a) {
  std::vector<CtlFormula> c;
  c.push_back(std::move(a));
  return Make(Kind::kForallNext, std::move(c));
}

CtlFormula CtlFormula::ExistsUntil(CtlFormula hold, CtlFormula goal) {
  std::vector<CtlFormula> c;
  c.push_back(std::move(hold));
  c.push_back(std::move(goal));
  return Make(Kind::kExistsUntil, std::move(c));
}

CtlFormula CtlFormula::ForallUntil(CtlFormula hold, CtlFormula goal) {
  std::vector<CtlFormula> c;
  c.push_back(std::move(hold));
  c.push_back(std::move(goal));
  return Make(Kind::kForallUntil, std::move(c));
}

std::string_view CtlElementName(CtlFormula::Kind kind) {
  switch (kind) {
    case CtlFormula::Kind::kTrue: return "true";
    case CtlFormula::Kind::kAtom: return "atom";
    case CtlFormula::Kind::kAnd: return "and";
    case CtlFormula::Kind::kNot: return "not";
    case CtlFormula::Kind::kExistsNext: return "exists-next";
    case CtlFormula::Kind::kForallNext: return "forall-next";
    case CtlFormula::Kind::kExistsUntil: return "exists-until";
    case CtlFormula::Kind::kForallUntil: return "forall-until";
  }
  return "?";
}

std::size_t CtlArity(CtlFormula::Kind kind) {
  switch (kind) {
    case CtlFormula::Kind::kTrue:
    case CtlFormula::Kind::kAtom:
      return 0;
    case CtlFormula::Kind::kNot:
    case CtlFormula::Kind::kExistsNext:
    case CtlFormula::Kind::kForallNext:
      return 1;
    default:
      return 2;
  }
}

std::string ToString(const CtlFormula& f) {
  switch (f.kind) {
    case CtlFormula::Kind::kTrue: return "T";
    case CtlFormula::Kind::kAtom: return std::string(1, f.letter);
    case CtlFormula::Kind::kAnd:
      return "(" + ToString(f.children[0]) + " & " + ToString(f.children[1]) +
             ")";
    case CtlFormula::Kind::kNot: return "!" + ToString(f.children[0]);
    case CtlFormula::Kind::kExistsNext: return "EX " + ToString(f.children[0]);
    case CtlFormula::Kind::kForallNext: return "AX " + ToString(f.children[0]);
    case CtlFormula::Kind::kExistsUntil:
      return "E[" + ToString(f.children[0]) + " U " + ToString(f.children[1]) +
             "]";
    case CtlFormula::Kind::kForallUntil:
      return "A[" + ToString(f.children[0]) + " U " + ToString(f.children[1]) +
             "]";
  }
  return {};
}

void CollectLetters(const CtlFormula& f, std::set<Letter>& out) {
  if (f.kind == CtlFormula::Kind::kAtom) out.insert(f.letter);
  for (const auto& c : f.children) CollectLetters(c, out);
}

std::vector<const CtlFormula*> Subformulae(const CtlFormula& f) {
  std::vector<const CtlFormula*> out;
  PostOrder(f, out);
  return out;
}

}  // namespace ctxwatch::spec
