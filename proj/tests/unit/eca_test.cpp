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

#include <random>

#include <gtest/gtest.h>

#include "ctxwatch/eca/collecting_process.hpp"
#include "ctxwatch/error.hpp"
#include "ctxwatch/spec/predicate.hpp"

namespace ctxwatch::eca {
namespace {

class Sink : public StateSink {
 public:
  void Deliver(const LocalState& opened) override { states.push_back(opened); }
  void Terminated(ProcessId, const VectorClock& c) override { final_clock = c; }
  std::vector<LocalState> states;
  std::optional<VectorClock> final_clock;
};

spec::ProcessSubscription LeakCondition(std::string type) {
  spec::ProcessSubscription s;
  s.context_type = std::move(type);
  s.conditions.push_back(
      spec::LocalPredicate{s.context_type, spec::BoolExpr::Atom("leak", spec::RelOp::kEq, true), 0});
  return s;
}

spec::ProcessSubscription PassThrough(std::string type, std::string var) {
  spec::ProcessSubscription s;
  s.context_type = std::move(type);
  s.passthrough_vars = {std::move(var)};
  return s;
}

TEST(CollectingProcessTest, ConditionFiresOnEdgesOnly) {
  Sink sink;
  CollectingProcess p(ProcessId{0}, 1, LeakCondition("leak_R1"));
  p.AttachSink(&sink);
  p.Start({{"leak", false}});
  EXPECT_FALSE(p.OnSample("leak", false));
  EXPECT_FALSE(p.OnSample("leak", false));
  auto e = p.OnSample("leak", true);
  ASSERT_TRUE(e);
  EXPECT_TRUE(e->opened.local_pred_truth);
  EXPECT_FALSE(e->closed.local_pred_truth);
  EXPECT_EQ(sink.states.size(), 2u);
}

TEST(CollectingProcessTest, PassThroughEmitsEverySample) {
  Sink sink;
  CollectingProcess p(ProcessId{0}, 1, PassThrough("temperature_R1", "temperature"));
  p.AttachSink(&sink);
  p.Start({{"temperature", 20.0}});
  for (double t : {20.0, 21.0, 21.0}) EXPECT_TRUE(p.OnSample("temperature", t));
  EXPECT_EQ(sink.states.size(), 4u);
  EXPECT_EQ(sink.states.back().values.at("temperature"), Scalar{21.0});
}

TEST(CollectingProcessTest, ChangeThresholdFiltersSmallSteps) {
  CollectingProcess p(ProcessId{0}, 1, PassThrough("temperature_R1", "temperature"), 0.5);
  p.Start({{"temperature", 20.0}});
  EXPECT_FALSE(p.OnSample("temperature", 20.2));
  EXPECT_FALSE(p.OnSample("temperature", 20.4));
  EXPECT_TRUE(p.OnSample("temperature", 20.5));
  EXPECT_FALSE(p.OnSample("temperature", 20.9));
  EXPECT_THROW(CollectingProcess(ProcessId{0}, 1, PassThrough("t", "v"), -1.0), Error);
}

TEST(CollectingProcessTest, ToggleSequenceNumbersStates) {
  Sink sink;
  CollectingProcess p(ProcessId{0}, 1, LeakCondition("leak_R1"));
  p.AttachSink(&sink);
  p.Start({{"leak", false}});
  int emitted = 0;
  for (bool v : {true, false, true}) emitted += p.OnSample("leak", v).has_value();
  EXPECT_EQ(emitted, 3);
  ASSERT_EQ(sink.states.size(), 4u);
  for (std::uint64_t i = 0; i < 4; ++i) {
    EXPECT_EQ(sink.states[i].seq, i);
    EXPECT_EQ(sink.states[i].begin[0], i);
  }
}

TEST(CollectingProcessTest, ReceiveMergesThenTicks) {
  CollectingProcess a(ProcessId{0}, 2, PassThrough("A", "v"));
  CollectingProcess b(ProcessId{1}, 2, PassThrough("B", "v"));
  a.Start({{"v", std::int64_t{0}}});
  b.Start({{"v", std::int64_t{0}}});
  a.OnSample("v", std::int64_t{1});
  b.OnSample("v", std::int64_t{1});
  b.OnSample("v", std::int64_t{2});
  auto m = a.OnSendMsg(ProcessId{1}, 7);
  EXPECT_EQ(m.piggyback.components(), (std::vector<VectorClock::Counter>{2, 0}));
  auto e = b.OnReceiveMsg(m);
  EXPECT_EQ(e.opened.begin.components(), (std::vector<VectorClock::Counter>{2, 3}));
  EXPECT_EQ(e.closed.end, e.opened.begin);
  EXPECT_THROW(a.OnReceiveMsg(m), Error);
}

TEST(CollectingProcessTest, SendKeepsValuesAndAdvancesOwnComponent) {
  CollectingProcess a(ProcessId{0}, 2, PassThrough("A", "v"));
  a.Start({{"v", std::int64_t{5}}});
  auto before = a.current_state();
  a.OnSendMsg(ProcessId{1}, 0);
  const auto& after = a.current_state();
  EXPECT_EQ(after.values, before.values);
  EXPECT_EQ(after.seq, before.seq + 1);
  EXPECT_EQ(after.begin, before.begin.Tick(ProcessId{0}));
}

TEST(CollectingProcessTest, RoundTripsCountSends) {
  CollectingProcess a(ProcessId{0}, 2, PassThrough("A", "v"));
  CollectingProcess b(ProcessId{1}, 2, PassThrough("B", "v"));
  a.Start({{"v", std::int64_t{0}}});
  b.Start({{"v", std::int64_t{0}}});
  std::mt19937_64 rng(1);
  for (std::uint64_t round = 1; round <= 20; ++round) {
    if (rng() % 2) a.OnSample("v", std::int64_t(round));
    std::uint64_t sends_before = a.clock()[0];
    b.OnReceiveMsg(a.OnSendMsg(ProcessId{1}, 2 * round));
    EXPECT_EQ(b.clock()[0], sends_before + 1);
    a.OnReceiveMsg(b.OnSendMsg(ProcessId{0}, 2 * round + 1));
  }
}

TEST(CollectingProcessTest, LifecycleErrors) {
  Sink sink;
  CollectingProcess p(ProcessId{0}, 1, LeakCondition("leak_R1"));
  p.AttachSink(&sink);
  EXPECT_THROW(p.OnSample("leak", true), Error);
  EXPECT_THROW(p.Start({}), Error);
  p.Start({{"leak", false}});
  EXPECT_THROW(p.OnSample("humidity", 1.0), Error);
  auto last = p.Terminate();
  EXPECT_EQ(sink.final_clock, last.end);
  EXPECT_THROW(p.OnSample("leak", true), Error);
  EXPECT_THROW(CollectingProcess(ProcessId{2}, 2, LeakCondition("x")), Error);
}

}  // namespace
}  // namespace ctxwatch::eca
