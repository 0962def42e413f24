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

#include "ctxwatch/spec/bool_expr.hpp"

#include "ctxwatch/error.hpp"

namespace ctxwatch::spec {

std::optional<RelOp> ParseRelOp(std::string_view text) {
  if (text == "<" || text == "lt") return RelOp::kLt;
  if (text == ">" || text == "gt") return RelOp::kGt;
  if (text == "<=" || text == "le" || text == "≤") return RelOp::kLe;
  if (text == ">=" || text == "ge" || text == "≥") return RelOp::kGe;
  if (text == "=" || text == "==" || text == "eq") return RelOp::kEq;
  if (text == "!=" || text == "ne" || text == "≠") return RelOp::kNe;
  return std::nullopt;
}

std::string_view RelOpName(RelOp op) {
  switch (op) {
    case RelOp::kLt: return "lt";
    case RelOp::kGt: return "gt";
    case RelOp::kLe: return "le";
    case RelOp::kGe: return "ge";
    case RelOp::kEq: return "eq";
    case RelOp::kNe: return "ne";
  }
  return "?";
}

std::string_view RelOpSymbol(RelOp op) {
  switch (op) {
    case RelOp::kLt: return "<";
    case RelOp::kGt: return ">";
    case RelOp::kLe: return "<=";
    case RelOp::kGe: return ">=";
    case RelOp::kEq: return "=";
    case RelOp::kNe: return "!=";
  }
  return "?";
}

namespace {

template <typename T>
bool Apply(const T& a, RelOp op, const T& b) {
  switch (op) {
    case RelOp::kLt: return a < b;
    case RelOp::kGt: return a > b;
    case RelOp::kLe: return a <= b;
    case RelOp::kGe: return a >= b;
    case RelOp::kEq: return a == b;
    case RelOp::kNe: return a != b;
  }
  return false;
}

bool IsOrdering(RelOp op) { return op != RelOp::kEq && op != RelOp::kNe; }

}  // namespace

bool CompareScalars(const Scalar& lhs, RelOp op, const Scalar& rhs) {
  auto a = AsNumber(lhs);
  auto b = AsNumber(rhs);
  if (a && b) return Apply(*a, op, *b);

  const auto* sa = std::get_if<std::string>(&lhs);
  const auto* sb = std::get_if<std::string>(&rhs);
  if (sa && sb) return Apply(*sa, op, *sb);

  const auto* ba = std::get_if<bool>(&lhs);
  const auto* bb = std::get_if<bool>(&rhs);
  if (ba && bb && !IsOrdering(op)) return Apply(*ba, op, *bb);

  if (!IsOrdering(op)) return op == RelOp::kNe;
  throw Error(ErrorCode::kTypeError,
              "cannot order " + std::string(ScalarKindName(KindOf(lhs))) +
                  " against " + std::string(ScalarKindName(KindOf(rhs))));
}

BoolExpr BoolExpr::Atom(std::string var, RelOp op, Scalar constant) {
  BoolExpr e;
  e.kind = Kind::kAtom;
  e.var = std::move(var);
  e.op = op;
  e.constant = std::move(constant);
  return e;
}

BoolExpr BoolExpr::And(std::vector<BoolExpr> children) {
  BoolExpr e;
  e.kind = Kind::kAnd;
  e.children = std::move(children);
  return e;
}

BoolExpr BoolExpr::Or(std::vector<BoolExpr> children) {
  BoolExpr e;
  e.kind = Kind::kOr;
  e.children = std::move(children);
  return e;
}

BoolExpr BoolExpr::Not(BoolExpr child) {
  BoolExpr e;
  e.kind = Kind::kNot;
  e.children.push_back(std::move(child));
  return e;
}

bool Evaluate(const BoolExpr& expr, const VariableMap& values) {
  switch (expr.kind) {
    case BoolExpr::Kind::kAtom: {
      auto it = values.find(expr.var);
      if (it == values.end()) {
        throw Error(ErrorCode::kMissingContext,
                    "variable '" + expr.var + "' has no value");
      }
      return CompareScalars(it->second, expr.op, expr.constant);
    }
    case BoolExpr::Kind::kAnd:
      for (const auto& c : expr.children) {
        if (!Evaluate(c, values)) return false;
      }
      return true;
    case BoolExpr::Kind::kOr:
      for (const auto& c : expr.children) {
        if (Evaluate(c, values)) return true;
      }
      return false;
    case BoolExpr::Kind::kNot:
      return !Evaluate(expr.children.at(0), values);
  }
  return false;
}

void CollectVariables(const BoolExpr& expr, std::set<std::string>& out) {
  if (expr.kind == BoolExpr::Kind::kAtom) {
    out.insert(expr.var);
    return;
  }
  for (const auto& c : expr.children) CollectVariables(c, out);
}

std::string ToString(const BoolExpr& expr) {
  switch (expr.kind) {
    case BoolExpr::Kind::kAtom:
      return expr.var + " " + std::string(RelOpSymbol(expr.op)) + " " +
             ScalarToString(expr.constant);
    case BoolExpr::Kind::kNot:
      return "!(" + ToString(expr.children.at(0)) + ")";
    case BoolExpr::Kind::kAnd:
    case BoolExpr::Kind::kOr: {
      std::string sep = expr.kind == BoolExpr::Kind::kAnd ? " && " : " || ";
      std::string out = "(";
      for (std::size_t i = 0; i < expr.children.size(); ++i) {
        if (i > 0) out += sep;
        out += ToString(expr.children[i]);
      }
      return out + ")";
    }
  }
  return {};
}

}  // namespace ctxwatch::spec
