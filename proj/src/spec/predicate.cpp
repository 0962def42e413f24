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

#include "ctxwatch/spec/predicate.hpp"

#include <algorithm>
#include <set>

#include "ctxwatch/error.hpp"

namespace ctxwatch::spec {

std::string_view ModalityName(Modality m) {
  return m == Modality::kPos ? "pos" : "def";
}

std::vector<std::size_t> SnapshotPredicate::Processes() const {
  std::set<std::size_t> out;
  for (const auto& c : conjuncts) out.insert(c.process);
  for (const auto& t : terms) out.insert(t.process);
  return {out.begin(), out.end()};
}

const SnapshotPredicate* PredicateSpec::Find(Letter a) const {
  for (const auto& sp : alphabet) {
    if (sp.letter == a) return &sp;
  }
  return nullptr;
}

std::optional<std::size_t> PredicateSpec::ProcessIndex(
    std::string_view context_type) const {
  auto it = std::find(processes.begin(), processes.end(), context_type);
  if (it == processes.end()) return std::nullopt;
  return static_cast<std::size_t>(it - processes.begin());
}

namespace {

std::string LetterName(Letter a) { return std::string("'") + a + "'"; }

}  // namespace

void ResolveProcesses(PredicateSpec& spec) {
  spec.processes.clear();
  auto intern = [&spec](const std::string& context_type) {
    if (auto idx = spec.ProcessIndex(context_type)) return *idx;
    spec.processes.push_back(context_type);
    return spec.processes.size() - 1;
  };

  std::set<Letter> declared;
  for (auto& sp : spec.alphabet) {
    if (!IsValidLetter(sp.letter)) {
      throw Error(ErrorCode::kInvalidConfig,
                  "letter " + LetterName(sp.letter) + " is not alphanumeric");
    }
    if (!declared.insert(sp.letter).second) {
      throw Error(ErrorCode::kDuplicateSymbol,
                  "letter " + LetterName(sp.letter) + " declared twice");
    }
    if (sp.kind == SnapshotPredicate::Kind::kConjunctive) {
      if (sp.conjuncts.empty()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "conjunctive letter " + LetterName(sp.letter) +
                        " has no local predicate");
      }
      std::set<std::string> seen;
      for (auto& c : sp.conjuncts) {
        if (!seen.insert(c.context_type).second) {
          throw Error(ErrorCode::kInvalidConfig,
                      "letter " + LetterName(sp.letter) +
                          " has two conjuncts on " + c.context_type);
        }
        c.process = intern(c.context_type);
      }
    } else {
      if (sp.terms.empty()) {
        throw Error(ErrorCode::kInvalidConfig,
                    "relational letter " + LetterName(sp.letter) +
                        " has no terms");
      }
      if (sp.relop == RelOp::kNe) {
        throw Error(ErrorCode::kInvalidConfig,
                    "relational predicates support <, >, <=, >=, = only");
      }
      for (auto& t : sp.terms) t.process = intern(t.context_type);
    }
  }
  if (spec.processes.empty()) {
    throw Error(ErrorCode::kInvalidConfig, "specification has no processes");
  }

  std::set<Letter> used;
  const auto& cp = spec.contextual;
  switch (cp.kind) {
    case ContextualPredicate::Kind::kSingle: used.insert(cp.letter); break;
    case ContextualPredicate::Kind::kRegex: CollectLetters(cp.regex, used); break;
    case ContextualPredicate::Kind::kCtl: CollectLetters(cp.ctl, used); break;
  }
  for (Letter a : used) {
    if (!declared.contains(a)) {
      throw Error(ErrorCode::kUnknownSymbol,
                  "letter " + LetterName(a) + " is not a snapshot predicate");
    }
  }
  if (cp.kind == ContextualPredicate::Kind::kCtl) {
    if (cp.modality) {
      throw Error(ErrorCode::kInvalidConfig,
                  "CTL predicates take no Pos/Def modality");
    }
  } else if (!cp.modality) {
    throw Error(ErrorCode::kInvalidConfig, "missing modality");
  }
}

bool EvalLocal(const LocalPredicate& p, const VariableMap& values) {
  return Evaluate(p.expr, values);
}

namespace {

const LocalState& StateFor(CutView cut, std::size_t process) {
  if (process >= cut.size() || cut[process] == nullptr) {
    throw Error(ErrorCode::kIncompleteCut,
                "cut has no state for process " + std::to_string(process));
  }
  return *cut[process];
}

}  // namespace

bool EvalSnapshot(const SnapshotPredicate& sp, CutView cut) {
  if (sp.kind == SnapshotPredicate::Kind::kConjunctive) {
    // Fetch every state first so an incomplete cut is reported even when an
    // earlier conjunct is already false.
    for (const auto& c : sp.conjuncts) StateFor(cut, c.process);
    for (const auto& c : sp.conjuncts) {
      if (!EvalLocal(c, StateFor(cut, c.process).values)) return false;
    }
    return true;
  }
  double sum = 0.0;
  for (const auto& t : sp.terms) {
    const LocalState& s = StateFor(cut, t.process);
    auto it = s.values.find(t.var);
    if (it == s.values.end()) {
      throw Error(ErrorCode::kMissingContext,
                  "variable '" + t.var + "' missing on " + t.context_type);
    }
    auto x = AsNumber(it->second);
    if (!x) {
      throw Error(ErrorCode::kTypeError,
                  "summand " + t.context_type + "." + t.var + " is " +
                      std::string(ScalarKindName(KindOf(it->second))));
    }
    sum += *x;
  }
  return CompareScalars(Scalar(sum), sp.relop, Scalar(sp.bound));
}

Letter LabelOf(std::span<const SnapshotPredicate> alphabet, CutView cut) {
  Letter found = kSinkLetter;
  for (const auto& sp : alphabet) {
    if (EvalSnapshot(sp, cut)) {
      if (found != kSinkLetter) return kSinkLetter;
      found = sp.letter;
    }
  }
  return found;
}

std::vector<std::string> ProcessSubscription::Variables() const {
  std::set<std::string> vars(passthrough_vars.begin(), passthrough_vars.end());
  for (const auto& c : conditions) CollectVariables(c.expr, vars);
  return {vars.begin(), vars.end()};
}

std::map<std::size_t, ProcessSubscription> ExtractLocalPredicates(
    const PredicateSpec& spec) {
  std::map<std::size_t, ProcessSubscription> out;
  for (std::size_t i = 0; i < spec.processes.size(); ++i) {
    out[i].context_type = spec.processes[i];
  }
  for (const auto& sp : spec.alphabet) {
    for (const auto& c : sp.conjuncts) out[c.process].conditions.push_back(c);
    for (const auto& t : sp.terms) {
      auto& vars = out[t.process].passthrough_vars;
      if (std::find(vars.begin(), vars.end(), t.var) == vars.end()) {
        vars.push_back(t.var);
      }
    }
  }
  return out;
}

}  // namespace ctxwatch::spec
