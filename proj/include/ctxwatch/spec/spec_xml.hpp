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

#ifndef CTXWATCH_SPEC_SPEC_XML_HPP_
#define CTXWATCH_SPEC_SPEC_XML_HPP_

#include <string>
#include <string_view>

#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::spec {

/**
 * Parses a predicate specification document.
 *
 *   <specification name="onLeak" modality="pos">
 *     <snapshotPredicates>
 *       <snapshotPredicate letter="a" type="conjunctive">
 *         <localPredicate contextType="leak_R1">
 *           <atom var="leak" relop="eq" const="true"/>
 *         </localPredicate>
 *       </snapshotPredicate>
 *       <snapshotPredicate letter="t" type="relational" relop="gt" bound="72">
 *         <term contextType="temperature_R1" var="temperature"/>
 *       </snapshotPredicate>
 *     </snapshotPredicates>
 *     <contextualPredicate type="single">a</contextualPredicate>
 *   </specification>
 *
 * Local predicate bodies are trees of <and>, <or>, <not> and <atom>. The
 * contextual type is single, regular-expression (body text such as
 * "a*ab*bc*cd*d") or ctl (an element tree of true, atom letter="x", and, not,
 * exists-next, forall-next, exists-until, forall-until).
 *
 * Errors: kParseError (malformed XML or schema violation, reported with
 * element path and line), kUnknownSymbol, kDuplicateSymbol,
 * kUnsupportedPredicateType.
 */
PredicateSpec ParseSpecification(std::string_view document);

/// Inverse of ParseSpecification on the model.
std::string SerializeSpecification(const PredicateSpec& spec);

}  // namespace ctxwatch::spec

#endif  // CTXWATCH_SPEC_SPEC_XML_HPP_
