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
#include "ordercheck/trace_model.hpp"

namespace ordercheck {
namespace {

TEST(Trace, RenderRoundTrips) {
  for (const char* s : {"ld B <e ld A", "ld B <m inv B <m inv A <m ld A",
                        "inv B <m ld B <e inv A <m ld A",
                        "st A <m xr A <e miss A <m ld A"}) {
    EXPECT_EQ(parse_trace(s).str(), s);
  }
}

TEST(Trace, MemoryChainClosure) {
  Trace t = parse_trace("ld B <m inv B <m ld A");
  const int ld_b = t.second().id, ld_a = t.first().id;
  const int inv_b = t.items()[1].id;
  EXPECT_TRUE(t.m_before(ld_b, inv_b));
  EXPECT_TRUE(t.m_before(inv_b, ld_a));
  EXPECT_TRUE(t.m_before(ld_b, ld_a));
  EXPECT_FALSE(t.m_before(ld_a, ld_b));
}

TEST(Trace, ExecutionEdgeDoesNotOrder) {
  Trace t = parse_trace("ld B <e ld A");
  EXPECT_FALSE(t.m_before(t.second().id, t.first().id));
  EXPECT_TRUE(t.m_edges().empty());
}

TEST(Trace, SerializedPairsAreOrderedAtDistance) {
  // st A and inv A share an address and are not both reads; xr B between them
  // is unrelated, so the order comes from serialization, not a chain.
  Trace t = parse_trace("st A <m xr B <e inv A <m ld A");
  EXPECT_TRUE(t.m_before(t.items()[0].id, t.items()[2].id));
  // Two reads at one address stay unordered.
  Trace r = parse_trace("ld A <e miss A <e ld A");
  EXPECT_FALSE(r.m_before(r.items()[0].id, r.items()[1].id));
}

TEST(Trace, SerializedAdjacencyMustBeMemoryOrdered) {
  EXPECT_THROW(parse_trace("st A <e inv A <m ld A"), TraceError);
}

TEST(Trace, MalformedInputs) {
  EXPECT_THROW(parse_trace("ld B"), TraceError);
  EXPECT_THROW(parse_trace("ld B <x ld A"), TraceError);
  EXPECT_THROW(parse_trace("ld BB <e ld A"), TraceError);
  EXPECT_THROW(parse_trace("ld B <e ld A <e ld C"), TraceError);
  EXPECT_THROW(make_trace({}, {}), TraceError);
}

TEST(Trace, FullChainCoversBlockedTrace) {
  Trace t = parse_trace("ld B <m inv B <m inv A <m ld A");
  auto [b, a] = chains(t);
  EXPECT_EQ(b, (Chain{0, 3}));
  EXPECT_EQ(a, (Chain{0, 3}));
}

TEST(Trace, ChainsStopAtExecutionEdges) {
  Trace t = parse_trace("inv B <m ld B <e inv A <m ld A");
  auto [b, a] = chains(t);
  EXPECT_EQ(b, (Chain{1, 1}));
  EXPECT_EQ(a, (Chain{2, 3}));
}

TEST(Trace, SparseIdsAreAccepted) {
  std::vector<TraceItem> items{instr_item(0, Role::kSecond, "ld", 'B', true),
                               event_item(3, "inv", 'A'),
                               instr_item(1, Role::kFirst, "ld", 'A', true)};
  Trace t = make_trace(items, {Label::kExec, Label::kMem});
  EXPECT_TRUE(t.m_before(3, 1));
  EXPECT_FALSE(t.m_before(2, 1));  // absent id
}

// Every m_order edge points forward, and same-address serialized pairs are
// always related, across every node of every builtin forest.
TEST(TraceProperty, OrderIsForwardAndCoversSerializedPairs) {
  for (const auto& name : builtin::names()) {
    const Forest& f = testing::builtin_forest(name).forest;
    for (const auto& tree : f.trees)
      for (const auto& n : tree.nodes) {
        const Trace& t = n.trace;
        for (const auto& [x, y] : t.m_edges())
          ASSERT_LT(t.position_of(x), t.position_of(y)) << t.str();
        const auto& it = t.items();
        for (std::size_t i = 0; i < it.size(); ++i)
          for (std::size_t j = i + 1; j < it.size(); ++j)
            if (serialized(it[i], it[j])) {
              ASSERT_TRUE(t.m_before(it[i].id, it[j].id)) << t.str();
            }
      }
  }
}

}  // namespace
}  // namespace ordercheck
