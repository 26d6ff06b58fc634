/*
 * Copyright (c) 2026, The ordercheck authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
*/

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "ordercheck/decision_tree.hpp"

namespace ordercheck {
namespace {

using testing::builtin_forest;
using testing::tree_named;

DecisionTree dtree(const std::string& model, const std::string& tree) {
  const auto& c = builtin_forest(model);
  return build_decision_tree(tree_named(c.forest, tree), c.verdicts);
}

TEST(DecisionTree, RvwmoSameAddressLoadsKeyPredicate) {
  DecisionTree dt = dtree("RVWMO", "ld-ld same inv/inv");
  EXPECT_EQ(dt.younger, "ld2 A");
  EXPECT_EQ(dt.older, "ld1 A");
  std::string key;
  for (const auto& n : dt.nodes)
    if (!n.key_predicate.empty()) key = n.key_predicate;
  EXPECT_EQ(key, "if ld1 A <p ld2 A and ld2 A <m inv A <m ld1 A then squash ld2 A");
  EXPECT_FALSE(dt.has_question(QuestionKind::kOlderHit));
}

TEST(DecisionTree, ScDifferentAddressAsksAllThree) {
  DecisionTree dt = dtree("SC", "ld-ld different inv/inv");
  EXPECT_TRUE(dt.has_question(QuestionKind::kReorders));
  EXPECT_TRUE(dt.has_question(QuestionKind::kSquashYounger));
  EXPECT_TRUE(dt.has_question(QuestionKind::kOlderHit));
  EXPECT_EQ(dt.unsafe_path().size(), 3u);
  EXPECT_EQ(dt.evaluate({{QuestionKind::kReorders, false}}), Outcome::kCompliant);
  EXPECT_EQ(dt.evaluate({{QuestionKind::kReorders, true},
                         {QuestionKind::kSquashYounger, true}}),
            Outcome::kCompliant);
  EXPECT_EQ(dt.evaluate({{QuestionKind::kReorders, true},
                         {QuestionKind::kSquashYounger, false},
                         {QuestionKind::kOlderHit, false}}),
            Outcome::kViolation);
  EXPECT_EQ(dt.evaluate({{QuestionKind::kReorders, true},
                         {QuestionKind::kSquashYounger, false},
                         {QuestionKind::kOlderHit, true}}),
            Outcome::kCompliant);
  EXPECT_EQ(dt.evaluate({}), Outcome::kViolation);
}

// Safe answers to every question eliminate every violating leaf, and the
// all-unsafe path ends in a violation, for every tree that has one.
TEST(DecisionTreeProperty, SafeAnswersAreCompliant) {
  for (const auto& name : builtin::names()) {
    const auto& c = builtin_forest(name);
    for (const auto& t : c.forest.trees) {
      if (t.is_trivial()) continue;
      DecisionTree dt = build_decision_tree(t, c.verdicts);
      std::map<QuestionKind, bool> safe;
      for (const auto& n : dt.nodes)
        if (!n.leaf) safe[n.question] = n.safe_answer;
      EXPECT_EQ(dt.evaluate(safe), Outcome::kCompliant) << dt.name;
      bool any_bad = false;
      for (const auto& v : tree_verdicts(c.verdicts, t.index))
        any_bad = any_bad || !v.verdict.valid();
      EXPECT_EQ(dt.evaluate({}),
                any_bad ? Outcome::kViolation : Outcome::kCompliant)
          << dt.name;
    }
  }
}

TEST(DecisionTree, MissingVerdictIsAnError) {
  const auto& sc = builtin_forest("SC");
  EXPECT_THROW(build_decision_tree(sc.forest.trees[0], {}), GoalError);
}

TEST(Goals, BoomRenderingOfSameAddressLoads) {
  auto goals = emit_goals(dtree("RVWMO", "ld-ld same inv/inv"), boom_signals());
  ASSERT_EQ(goals.size(), 3u);
  const SignalMap m = boom_signals();
  EXPECT_EQ(render_goal(goals[0], m),
            "Goal1(i,j,A): i < j ∧ ldQ[i] = A ∧ ldQ[j] = A ∧ "
            "ldQ[j].executed ∧ ¬ldQ[i].executed");
  EXPECT_EQ(render_goal(goals[1], m),
            "Goal2(i,j,A): Goal1(i,j,A) ∧ io.release.addr = A ∧ "
            "ldQ[j].observed ∧ ¬ld_xcpt_valid");
  EXPECT_EQ(render_goal(goals[2], m),
            "Goal3(i,j,A): Goal2(i,j,A) ∧ ldQ[i].executed ∧ ¬ld_xcpt_valid");
  EXPECT_TRUE(goals[2].violation);
  EXPECT_FALSE(goals[0].violation);
}

TEST(Goals, DifferentAddressAddsHitGoal) {
  auto goals = emit_goals(dtree("SC", "ld-ld different inv/inv"), boom_signals());
  ASSERT_EQ(goals.size(), 4u);
  EXPECT_EQ(render_body(goals[2], boom_signals()),
            "Goal2(i,j,A,B) ∧ ldQ[i].executed ∧ ldQ[i].miss");
  EXPECT_EQ(render_body(goals[3], boom_signals()), "Goal3(i,j,A,B) ∧ ¬ld_xcpt_valid");
}

TEST(Goals, FileRoundTrips) {
  for (const auto& map : {boom_signals(), microcheck_signals()}) {
    for (const char* tree : {"ld-ld same inv/inv", "ld-ld different inv/inv"}) {
      const char* model = std::string(tree).find("same") != std::string::npos
                              ? "RVWMO" : "SC";
      auto goals = emit_goals(dtree(model, tree), map);
      const std::string text = write_goals(goals, map, tree);
      auto back = parse_goals(text, map);
      EXPECT_EQ(write_goals(back, map, tree), text);
    }
  }
}

TEST(Goals, ParseErrors) {
  const SignalMap m = microcheck_signals();
  EXPECT_THROW(parse_goals("GOAL G(i): frob(i)\n", m), GoalError);
  EXPECT_THROW(parse_goals("VIOLATION G\n", m), GoalError);
  EXPECT_THROW(parse_goals("hello\n", m), GoalError);
  EXPECT_THROW(parse_goals("GOAL G(i): lq[i].exec\nGOAL G(i): xcpt\n", m),
               GoalError);
}

TEST(Goals, StoreTreesAreRejected) {
  DecisionTree dt = dtree("RVWMO", "st-ld same inv/xr");
  EXPECT_THROW(emit_goals(dt, boom_signals()), GoalError);
}

TEST(Goals, IncompleteSignalMapIsRejected) {
  SignalMap m = boom_signals();
  m.templates.erase(cond::kMiss);
  EXPECT_THROW(emit_goals(dtree("SC", "ld-ld different inv/inv"), m), GoalError);
}

}  // namespace
}  // namespace ordercheck
