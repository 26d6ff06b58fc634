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

#include <random>

#include "fixtures.hpp"
#include "ordercheck/restorer.hpp"

namespace ordercheck {
namespace {

using testing::builtin_forest;

// A restored order must be a permutation that respects every memory-order
// edge and puts the older instruction first.
void expect_linear_extension(const Trace& t, const std::vector<int>& seq) {
  std::vector<int> ids = t.ids(), got = seq;
  std::sort(ids.begin(), ids.end());
  std::sort(got.begin(), got.end());
  ASSERT_EQ(ids, got) << t.str();
  auto at = [&](int id) { return std::find(seq.begin(), seq.end(), id); };
  for (const auto& [x, y] : t.m_edges()) ASSERT_LT(at(x), at(y)) << t.str();
  ASSERT_LT(at(t.first().id), at(t.second().id)) << t.str();
}

TEST(Restore, ObservableChainIsViolation) {
  Trace t = parse_trace("ld B <m inv B <m inv A <m ld A");
  Verdict v = restore(t);
  EXPECT_EQ(v.status, Status::kViolation);
  EXPECT_EQ(v.blocking.size(), 4u);
  EXPECT_EQ(oracle_restore(t).status, Status::kViolation);
}

TEST(Restore, ExecutionGapIsRestorable) {
  Trace t = parse_trace("inv B <m ld B <e inv A <m ld A");
  Verdict v = restore(t);
  ASSERT_TRUE(v.valid());
  expect_linear_extension(t, v.restored);
  EXPECT_FALSE(v.steps.empty());
  EXPECT_TRUE(oracle_restore(t).valid());
}

TEST(Restore, AlreadyOrderedNeedsNoSteps) {
  // A trace where the older instruction already comes first.
  std::vector<TraceItem> items{instr_item(1, Role::kFirst, "ld", 'A', true),
                               instr_item(0, Role::kSecond, "ld", 'B', true)};
  Trace t = make_trace(items, {Label::kExec});
  Verdict v = restore(t);
  EXPECT_TRUE(v.valid());
  EXPECT_TRUE(v.steps.empty());
}

TEST(Restore, OracleRefusesLargeTraces) {
  std::vector<TraceItem> items{instr_item(0, Role::kSecond, "ld", 'B', true)};
  std::vector<Label> labels;
  for (int k = 0; k < 8; ++k) {
    items.push_back(event_item(2 + k, "pf", 'B'));
    labels.push_back(Label::kExec);
  }
  items.push_back(instr_item(1, Role::kFirst, "ld", 'A', true));
  labels.push_back(Label::kExec);
  EXPECT_THROW(oracle_restore(make_trace(items, labels)), RestoreError);
}

TEST(Restore, ScDifferentAddressLoadTreeHasThreeViolations) {
  const auto& sc = builtin_forest("SC");
  auto vs = tree_verdicts(sc.verdicts, 0);
  std::vector<int> bad;
  for (const auto& v : vs)
    if (!v.verdict.valid()) bad.push_back(v.node);
  EXPECT_EQ(bad, (std::vector<int>{8, 9, 10}));
}

TEST(Restore, ViolationCountsPerModel) {
  std::map<std::string, std::size_t> want{{"SC", 35}, {"TSO", 35}, {"RVWMO", 109}};
  for (const auto& [name, n] : want) {
    std::size_t bad = 0;
    for (const auto& v : builtin_forest(name).verdicts) bad += !v.verdict.valid();
    EXPECT_EQ(bad, n) << name;
  }
}

// Both rewrite priorities and the exhaustive oracle agree on every leaf.
TEST(RestoreProperty, AgreesWithOracleOnAllLeaves) {
  for (const auto& name : builtin::names()) {
    const auto& c = builtin_forest(name);
    auto ls = leaves(c.forest);
    ASSERT_EQ(ls.size(), c.verdicts.size());
    for (std::size_t k = 0; k < ls.size(); ++k) {
      const Trace& t = *ls[k].trace;
      const Verdict& v = c.verdicts[k].verdict;
      ASSERT_EQ(v.status, oracle_restore(t).status) << t.str();
      ASSERT_EQ(v.status, restore(t, {true}).status) << t.str();
      if (v.valid()) expect_linear_extension(t, v.restored);
    }
  }
}

Trace random_trace(std::mt19937& rng) {
  static const char* kEvents[] = {"inv", "miss", "pf", "ev", "xr"};
  static const char* kInstrs[] = {"ld", "st"};
  std::uniform_int_distribution<int> n_events(0, 4), ev(0, 4), ins(0, 1),
      addr(0, 1), coin(0, 1);
  std::vector<TraceItem> items;
  items.push_back(instr_item(0, Role::kSecond, kInstrs[ins(rng)],
                             static_cast<char>('A' + addr(rng)), false));
  items.back().read_only = items.back().kind == "ld";
  const int k = n_events(rng);
  for (int e = 0; e < k; ++e)
    items.push_back(event_item(2 + e, kEvents[ev(rng)],
                               static_cast<char>('A' + addr(rng))));
  items.push_back(instr_item(1, Role::kFirst, kInstrs[ins(rng)],
                             static_cast<char>('A' + addr(rng)), false));
  items.back().read_only = items.back().kind == "ld";
  std::vector<Label> labels;
  for (std::size_t i = 0; i + 1 < items.size(); ++i) {
    Label l = coin(rng) ? Label::kMem : Label::kExec;
    if (serialized(items[i], items[i + 1])) l = Label::kMem;
    labels.push_back(l);
  }
  return make_trace(items, labels);
}

TEST(RestoreProperty, AgreesWithOracleOnRandomTraces) {
  std::mt19937 rng(3);
  for (int trial = 0; trial < 3000; ++trial) {
    Trace t = random_trace(rng);
    Verdict v = restore(t);
    ASSERT_EQ(v.status, oracle_restore(t).status) << t.str();
    if (v.valid()) expect_linear_extension(t, v.restored);
  }
}

TEST(Restore, ParallelClassificationMatches) {
  const auto& rv = builtin_forest("RVWMO");
  auto par = classify_forest(rv.forest, 4);
  ASSERT_EQ(par.size(), rv.verdicts.size());
  for (std::size_t k = 0; k < par.size(); ++k) {
    EXPECT_EQ(par[k].node, rv.verdicts[k].node);
    EXPECT_EQ(par[k].verdict.status, rv.verdicts[k].verdict.status);
    EXPECT_EQ(par[k].verdict.steps, rv.verdicts[k].verdict.steps);
  }
}

}  // namespace
}  // namespace ordercheck
