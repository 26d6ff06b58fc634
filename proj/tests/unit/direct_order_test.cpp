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

#include "ordercheck/builtin_models.hpp"
#include "ordercheck/direct_order.hpp"

namespace ordercheck {
namespace {

using Edges = std::set<std::pair<int, int>>;

ProgramSketch sketch(const std::string& text) { return parse_sketch(text); }

TEST(InducedOrder, ScOrdersEverything) {
  auto dag = induced_order(load_builtin("SC"), sketch("ld A\nld B\nst C\n"));
  EXPECT_EQ(dag.edges, (Edges{{0, 1}, {0, 2}, {1, 2}}));
}

TEST(InducedOrder, TsoRelaxesStoreToLoad) {
  McmSpec tso = load_builtin("TSO");
  EXPECT_TRUE(induced_order(tso, sketch("st A\nld B\n")).edges.empty());
  EXPECT_EQ(induced_order(tso, sketch("st A\nld A\n")).edges, (Edges{{0, 1}}));
}

TEST(InducedOrder, FencesGuardPositionally) {
  McmSpec rv = load_builtin("RVWMO");
  EXPECT_TRUE(induced_order(rv, sketch("ld A\nld B\n")).edges.empty());
  EXPECT_EQ(induced_order(rv, sketch("ld A\nfence r,r\nld B\n")).edges,
            (Edges{{0, 2}}));
  EXPECT_EQ(induced_order(rv, sketch("ld A\nfence rw,rw\nld B\n")).edges,
            (Edges{{0, 2}}));
  EXPECT_TRUE(induced_order(rv, sketch("ld A\nfence w,w\nld B\n")).edges.empty());
  // A fence after the pair does not order it.
  EXPECT_TRUE(induced_order(rv, sketch("ld A\nld B\nfence r,r\n")).edges.empty());
}

TEST(InducedOrder, AnnotationsSelectRules) {
  McmSpec rv = load_builtin("RVWMO");
  EXPECT_EQ(induced_order(rv, sketch("lr A aq\nld B\n")).edges, (Edges{{0, 1}}));
  EXPECT_TRUE(induced_order(rv, sketch("lr A\nld B\n")).edges.empty());
  EXPECT_EQ(induced_order(rv, sketch("ld A\nsc B rl\n")).edges, (Edges{{0, 1}}));
}

TEST(InducedOrder, Errors) {
  McmSpec sc = load_builtin("SC");
  EXPECT_THROW(induced_order(sc, sketch("xchg A\n")), SpecError);
  EXPECT_THROW(induced_order(load_builtin("RVWMO"), sketch("st A rl\n")),
               SpecError);
  EXPECT_THROW(parse_sketch(""), SpecError);
  EXPECT_THROW(parse_sketch("ld\n"), SpecError);
  EXPECT_THROW(parse_sketch("fence q,r\n"), SpecError);
}

TEST(Reduction, Examples) {
  EXPECT_EQ(transitive_reduction({3, {{0, 1}, {1, 2}, {0, 2}}}).edges,
            (Edges{{0, 1}, {1, 2}}));
  EXPECT_EQ(transitive_reduction({3, {{0, 2}, {1, 2}}}).edges,
            (Edges{{0, 2}, {1, 2}}));
  EXPECT_TRUE(transitive_reduction({4, {}}).edges.empty());
}

TEST(Reduction, RejectsCycles) {
  EXPECT_THROW(transitive_reduction({2, {{0, 1}, {1, 0}}}), CycleError);
  EXPECT_THROW(transitive_reduction({1, {{0, 0}}}), CycleError);
  EXPECT_THROW(transitive_reduction({2, {{0, 5}}}), CycleError);
}

TEST(DirectPairs, Examples) {
  EXPECT_EQ(directly_ordered_pairs(load_builtin("SC"), sketch("ld A\nld B\nst C\n")),
            (std::vector<std::pair<int, int>>{{0, 1}, {1, 2}}));
  for (const char* one : {"ld A\n", "st B\n"})
    EXPECT_TRUE(directly_ordered_pairs(load_builtin("SC"), sketch(one)).empty());
}

// Reference: (i, j) is direct iff required and no k with i->k and k->j in
// the closure.
Edges brute_direct(const OrderDag& induced) {
  const OrderDag cl = transitive_closure(induced);
  Edges out;
  for (const auto& [i, j] : induced.edges) {
    bool via = false;
    for (int k = 0; k < induced.n; ++k)
      via = via || (cl.edges.count({i, k}) && cl.edges.count({k, j}));
    if (!via) out.insert({i, j});
  }
  return out;
}

TEST(DirectPairsProperty, RandomRvwmoProgramsMatchBruteForce) {
  McmSpec rv = load_builtin("RVWMO");
  const std::vector<std::string> lines = {
      "ld A",  "ld B",  "st A",       "st B",     "amo A aq", "amo B rl",
      "lr A",  "sc B",  "lr B aq",    "sc A rl",  "fence r,r", "fence w,w",
      "fence rw,rw",    "fence r,w",  "fence w,r"};
  std::mt19937 rng(7);
  std::uniform_int_distribution<std::size_t> pick(0, lines.size() - 1);
  for (int trial = 0; trial < 500; ++trial) {
    std::string text;
    for (int k = 0; k < 8; ++k) text += lines[pick(rng)] + "\n";
    auto prog = sketch(text);
    auto induced = induced_order(rv, prog);
    auto direct = directly_ordered_pairs(rv, prog);
    EXPECT_EQ(Edges(direct.begin(), direct.end()), brute_direct(induced)) << text;
  }
}

OrderDag random_dag(std::mt19937& rng, int n, double p) {
  std::bernoulli_distribution edge(p);
  OrderDag d;
  d.n = n;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (edge(rng)) d.edges.emplace(i, j);
  return d;
}

// Closure by repeated squaring of the adjacency relation; independent of the
// Warshall loop used by the library.
Edges naive_closure(const OrderDag& d) {
  Edges cl = d.edges;
  for (bool grew = true; grew;) {
    grew = false;
    Edges next = cl;
    for (const auto& [a, b] : cl)
      for (const auto& [c, e] : cl)
        if (b == c && next.insert({a, e}).second) grew = true;
    cl.swap(next);
  }
  return cl;
}

TEST(ReductionProperty, PreservesClosureAndIsMinimal) {
  std::mt19937 rng(11);
  std::uniform_int_distribution<int> size(1, 8);
  std::uniform_real_distribution<double> dens(0.0, 0.9);
  for (int trial = 0; trial < 1000; ++trial) {
    OrderDag g = random_dag(rng, size(rng), dens(rng));
    OrderDag r = transitive_reduction(g);
    ASSERT_EQ(naive_closure(r), naive_closure(g));
    for (const auto& e : r.edges) {
      OrderDag less = r;
      less.edges.erase(e);
      ASSERT_NE(naive_closure(less), naive_closure(g)) << "redundant edge";
    }
  }
}

}  // namespace
}  // namespace ordercheck
