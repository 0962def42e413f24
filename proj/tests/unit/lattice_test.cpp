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

#include <cmath>
#include <random>
#include <set>

#include <gtest/gtest.h>

#include "ctxwatch/detect/lattice_checker.hpp"
#include "ctxwatch/error.hpp"
#include "ctxwatch/oracle/cut_oracle.hpp"
#include "ctxwatch/spec/spec_xml.hpp"
#include "test_helpers.hpp"

namespace ctxwatch::detect {
namespace {

using namespace ctxwatch::testing;

/// `x <op> value` on process p.
std::string Local(std::size_t p, const std::string& op, int value) {
  return "<localPredicate contextType=\"P" + std::to_string(p) + "\"><atom var=\"x\" relop=\"" +
         op + "\" const=\"" + std::to_string(value) + "\"/></localPredicate>";
}

std::string Letter(char a, const std::string& locals) {
  return std::string("<snapshotPredicate letter=\"") + a + "\" type=\"conjunctive\">" + locals +
         "</snapshotPredicate>";
}

/// Sum of x over P0..P<n-1> compared with a bound.
std::string SumLetter(char a, std::size_t n, const std::string& op, const std::string& bound) {
  std::string out = std::string("<snapshotPredicate letter=\"") + a +
                    "\" type=\"relational\" relop=\"" + op + "\" bound=\"" + bound + "\">";
  for (std::size_t p = 0; p < n; ++p) {
    out += "<term contextType=\"P" + std::to_string(p) + "\" var=\"x\"/>";
  }
  return out + "</snapshotPredicate>";
}

spec::PredicateSpec Doc(const std::string& modality, const std::string& letters,
                        const std::string& type, const std::string& body) {
  std::string m = modality.empty() ? "" : " modality=\"" + modality + "\"";
  return spec::ParseSpecification("<specification name=\"t\"" + m + "><snapshotPredicates>" +
                                  letters + "</snapshotPredicates><contextualPredicate type=\"" +
                                  type + "\">" + body + "</contextualPredicate></specification>");
}

/// Two processes with one sample each, x going 0 -> 1: the diamond
/// (0,0) < (1,0),(0,1) < (1,1).
oracle::ExecutedTrace Diamond() {
  return oracle::Execute(MakeScript(2, {0, 0}, {Sample(0, 1), Sample(1, 1)}));
}

std::set<Cut> NodeCuts(const Lattice& lat) {
  std::set<Cut> out;
  for (auto id : lat.SortedNodes()) out.insert(lat.node(id).cut);
  return out;
}

spec::PredicateSpec AnySpec(std::size_t n) {
  return Doc("pos", SumLetter('a', n, "gt", "100"), "single", "a");
}

TEST(LatticeTest, MessageFreeTwoByTwoHasNineNodes) {
  auto t = oracle::Execute(
      MakeScript(2, {0, 0}, {Sample(0, 1), Sample(1, 1), Sample(0, 2), Sample(1, 2)}));
  LatticeChecker c(AnySpec(2));
  Feed(c, t.deliveries);
  EXPECT_EQ(c.lattice().size(), 9u);
  oracle::CutSpace space(t);
  EXPECT_EQ(NodeCuts(c.lattice()), std::set<Cut>(space.cuts().begin(), space.cuts().end()));
}

TEST(LatticeTest, MessageRemovesCuts) {
  auto t = oracle::Execute(
      MakeScript(2, {0, 0}, {Sample(0, 1), Send(0, 1), Sample(1, 1), Recv(1)}));
  LatticeChecker c(AnySpec(2));
  Feed(c, t.deliveries);
  EXPECT_LT(c.lattice().size(), oracle::ProductCount(t.Sizes()));
  EXPECT_EQ(c.lattice().size(), oracle::CutSpace(t).size());
}

TEST(LatticeTest, DuplicateDeliveryIsRejected) {
  auto t = Diamond();
  LatticeChecker c(AnySpec(2));
  c.Deliver(t.states[0][0]);
  EXPECT_THROW(c.Deliver(t.states[0][0]), Error);
}

TEST(LatticeTest, DiamondDump) {
  auto t = Diamond();
  LatticeChecker c(AnySpec(2));
  Feed(c, t.deliveries);
  EXPECT_EQ(c.lattice().Dump(),
            "NODE 0,0 level=0 label=⊥\n"
            "NODE 0,1 level=1 label=⊥\n"
            "NODE 1,0 level=1 label=⊥\n"
            "NODE 1,1 level=2 label=⊥\n"
            "EDGE 0,0 -> 0,1\n"
            "EDGE 0,0 -> 1,0\n"
            "EDGE 0,1 -> 1,1\n"
            "EDGE 1,0 -> 1,1\n");
}

TEST(LatticeTest, RandomTracesMatchCutEnumerationAndAreClosed) {
  std::mt19937_64 rng(77);
  oracle::ScriptOptions o;
  o.max_processes = 3;
  o.max_states = 5;
  for (int trial = 0; trial < 100; ++trial) {
    auto t = oracle::Execute(oracle::RandomScript(rng, o));
    LatticeChecker c(AnySpec(t.n));
    Feed(c, oracle::Scramble(t.deliveries, rng));
    oracle::CutSpace space(t);
    auto cuts = NodeCuts(c.lattice());
    ASSERT_EQ(cuts, std::set<Cut>(space.cuts().begin(), space.cuts().end()))
        << t.script.ToString();
    for (const auto& a : cuts) {
      const Cut& b = *std::next(cuts.begin(), static_cast<long>(rng() % cuts.size()));
      EXPECT_TRUE(cuts.count(oracle::Meet(a, b)));
      EXPECT_TRUE(cuts.count(oracle::Join(a, b)));
    }
  }
}

TEST(SnapshotDetectorTest, DefiniteAtBottomIsImmediate) {
  auto t = Diamond();
  LatticeChecker c(Doc("def", SumLetter('a', 2, "eq", "0"), "single", "a"));
  c.Deliver(t.states[0][0]);
  c.Deliver(t.states[1][0]);
  ASSERT_TRUE(c.detected());
  EXPECT_EQ(c.detections()[0].witness, (Cut{0, 0}));
}

/// The diamond delivered with P1 ahead of P0, so the observed tops are
/// (0,0), (0,1) and (1,1).
void FeedDiamondP1First(Checker& c, const oracle::ExecutedTrace& t) {
  c.Deliver(t.states[0][0]);
  c.Deliver(t.states[1][0]);
  c.Deliver(t.states[1][1]);
  c.TerminateAfter(ProcessId{1}, 2);
  c.Deliver(t.states[0][1]);
  c.TerminateAfter(ProcessId{0}, 2);
}

TEST(SnapshotDetectorTest, DefiniteWhenBothMiddlesHold) {
  // The verdict is issued at the first observed top all of whose paths meet
  // the predicate, which is the middle node P1 reaches first.
  auto t = Diamond();
  auto spec = Doc("def", SumLetter('a', 2, "eq", "1"), "single", "a");
  LatticeChecker c(spec);
  FeedDiamondP1First(c, t);
  ASSERT_TRUE(c.detected());
  EXPECT_EQ(c.detections()[0].witness, (Cut{0, 1}));
  // Both complete paths are covered as well.
  oracle::CutSpace space(t);
  EXPECT_TRUE(oracle::PathsCovered(space, spec.alphabet[0])[space.top()]);
}

TEST(SnapshotDetectorTest, UndeterminedWhenOnePathAvoidsThePredicate) {
  auto t = Diamond();
  LatticeChecker c(Doc("def", Letter('a', Local(0, "eq", 1) + Local(1, "eq", 0)), "single", "a"));
  FeedDiamondP1First(c, t);
  EXPECT_TRUE(c.finalized());
  EXPECT_FALSE(c.detected());
  LatticeChecker pos(Doc("pos", Letter('a', Local(0, "eq", 1) + Local(1, "eq", 0)), "single", "a"));
  Feed(pos, t.deliveries);
  EXPECT_TRUE(pos.detected());
}

TEST(SnapshotDetectorTest, RelationalPossiblyAndUnboundedBound) {
  // Sums per node: 0, 2, 3, 5. Only the top exceeds 4.
  auto t = oracle::Execute(MakeScript(2, {0, 0}, {Sample(0, 2), Sample(1, 3)}));
  LatticeChecker c(Doc("pos", SumLetter('a', 2, "gt", "4"), "single", "a"));
  Feed(c, t.deliveries);
  ASSERT_TRUE(c.detected());
  EXPECT_EQ(c.detections()[0].witness, (Cut{1, 1}));
  LatticeChecker low(Doc("pos", SumLetter('a', 2, "gt", "-inf"), "single", "a"));
  low.Deliver(t.states[0][0]);
  low.Deliver(t.states[1][0]);
  ASSERT_TRUE(low.detected());
  EXPECT_EQ(low.detections()[0].witness, (Cut{0, 0}));
}

std::string GatewayLetters() {
  std::string out;
  for (int v = 1; v <= 4; ++v) out += Letter(static_cast<char>('a' + v - 1), Local(0, "eq", v));
  return out;
}

TEST(RegexDetectorTest, SingleProcessWordIsAcceptedByBothModalities) {
  auto t = oracle::Execute(MakeScript(
      1, {1}, {Sample(0, 1), Sample(0, 2), Sample(0, 2), Sample(0, 3), Sample(0, 3),
               Sample(0, 4), Sample(0, 4)}));
  for (const char* m : {"pos", "def"}) {
    LatticeChecker c(Doc(m, GatewayLetters(), "regular-expression", "a*ab*bc*cd*d"));
    Feed(c, t.deliveries);
    ASSERT_TRUE(c.detected()) << m;
    // "aabbccd" is the shortest accepted prefix.
    EXPECT_EQ(c.detections()[0].witness, (Cut{6})) << m;
  }
}

TEST(RegexDetectorTest, DiamondWithTwoWords) {
  // P0 decides the letter: a while x0 = 0, b afterwards. The paths spell
  // "abb" (P0 first) and "aab" (P1 first).
  auto letters = Letter('a', Local(0, "eq", 0) + Local(1, "le", 1)) +
                 Letter('b', Local(0, "eq", 1) + Local(1, "le", 1));
  auto t = Diamond();
  LatticeChecker pos(Doc("pos", letters, "regular-expression", "aab"));
  LatticeChecker def(Doc("def", letters, "regular-expression", "aab"));
  Feed(pos, t.deliveries);
  Feed(def, t.deliveries);
  EXPECT_TRUE(pos.detected());
  EXPECT_TRUE(def.finalized());
  EXPECT_FALSE(def.detected());
  LatticeChecker both(Doc("def", letters, "regular-expression", "aab+abb"));
  Feed(both, t.deliveries);
  EXPECT_TRUE(both.detected());
}

TEST(RegexDetectorTest, EmptyPatternNeverDetects) {
  auto spec = Doc("pos", GatewayLetters(), "regular-expression", "a*");
  spec.contextual.regex = spec::RegexNode::Empty();
  auto t = oracle::Execute(MakeScript(1, {1}, {Sample(0, 2)}));
  LatticeChecker c(spec);
  Feed(c, t.deliveries);
  EXPECT_TRUE(c.finalized());
  EXPECT_FALSE(c.detected());
}

TEST(CtlDetectorTest, Examples) {
  auto t = Diamond();
  auto letters = Letter('a', Local(0, "eq", 1) + Local(1, "le", 1));
  auto run = [&](const std::string& body) {
    LatticeChecker c(Doc("", letters, "ctl", body));
    Feed(c, t.deliveries);
    EXPECT_TRUE(c.finalized());
    return c.detected();
  };
  EXPECT_TRUE(run("<true/>"));
  // Every path eventually reaches x0 = 1, at the latest at the top.
  EXPECT_TRUE(run("<forall-until><true/><atom letter=\"a\"/></forall-until>"));
  // The bottom has the a-successor (1,0).
  EXPECT_TRUE(run("<exists-next><atom letter=\"a\"/></exists-next>"));
  EXPECT_FALSE(run("<forall-next><atom letter=\"a\"/></forall-next>"));
  auto never = Letter('a', Local(0, "eq", 5) + Local(1, "le", 1));
  LatticeChecker c(Doc("", never, "ctl", "<exists-next><atom letter=\"a\"/></exists-next>"));
  Feed(c, t.deliveries);
  EXPECT_FALSE(c.detected());
}

TEST(PruneTest, BottomRemovesNothingAndCompletedTopRemovesTheRest) {
  auto t = Diamond();
  LatticeChecker c(AnySpec(2));
  Feed(c, t.deliveries);
  EXPECT_EQ(c.Prune(Cut{0, 0}), 0u);
  EXPECT_EQ(c.Prune(Cut{1, 1}), 3u);
  EXPECT_EQ(c.lattice().size(), 1u);
  EXPECT_THROW(c.Prune(Cut{0, 1}), Error);
}

TEST(PruneTest, CtlRefusesPruningAboveBottom) {
  auto t = Diamond();
  LatticeChecker c(Doc("", Letter('a', Local(0, "eq", 1) + Local(1, "le", 1)), "ctl", "<true/>"));
  Feed(c, t.deliveries);
  EXPECT_THROW(c.Prune(Cut{1, 1}), Error);
  EXPECT_EQ(c.Prune(Cut{0, 0}), 0u);
}

}  // namespace
}  // namespace ctxwatch::detect
