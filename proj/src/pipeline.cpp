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

#include "ordercheck/pipeline.hpp"

#include <algorithm>

namespace ordercheck {

std::string unmodeled_reason(const McmSpec& spec, const ExplorationTree& tree) {
  if (tree.is_trivial()) return "no exploration (" + tree.trivial + ")";
  const OrderRule& r = tree.rule;
  for (const KindRef* k : {&r.first, &r.second}) {
    const InstrKind& kind = spec.kind(k->kind);
    if (!kind.read || kind.write)
      return "'" + k->kind + "' is not a load; the LSQ model holds loads only";
    if (!k->annotation.empty())
      return "annotation '" + k->annotation + "' is not modeled";
  }
  if (r.fence) return "fences are not modeled";
  if (tree.ev_second != "inv")
    return "younger load observed by '" + tree.ev_second +
           "'; only invalidations are modeled";
  return "";
}

VerifyReport verify(const McmSpec& spec, const Forest& forest,
                    const std::vector<LeafVerdict>& verdicts,
                    const LsqConfig& cfg, unsigned jobs) {
  VerifyReport rep;
  rep.model = forest.model;
  rep.config = cfg.name;
  const SignalMap map = microcheck_signals();

  for (const auto& tree : forest.trees) {
    if (tree.is_trivial()) continue;
    TreeFinding f;
    f.tree = tree.index;
    f.name = tree.name();
    for (const auto& v : verdicts) {
      if (v.tree != tree.index) continue;
      ++f.leaves;
      if (!v.verdict.valid()) ++f.violations;
    }
    if (f.violations == 0) continue;
    const DecisionTree dt = build_decision_tree(tree, verdicts);
    for (const auto& n : dt.nodes)
      if (!n.key_predicate.empty()) f.key_predicate = n.key_predicate;
    f.reason = unmodeled_reason(spec, tree);
    f.modeled = f.reason.empty();
    if (f.modeled) {
      auto goals = emit_goals(dt, map);
      std::string text = write_goals(goals, map);
      auto same = std::find_if(rep.goal_sets.begin(), rep.goal_sets.end(),
                               [&](const GoalSet& g) { return g.text == text; });
      if (same == rep.goal_sets.end()) {
        rep.goal_sets.push_back({{}, std::move(goals), std::move(text), {}});
        same = rep.goal_sets.end() - 1;
      }
      same->trees.push_back(f.name);
      f.goal_set = static_cast<int>(same - rep.goal_sets.begin());
    }
    rep.design.push_back(std::move(f));
  }

  bool reach = false, inconclusive = false;
  for (auto& gs : rep.goal_sets) {
    gs.eval = evaluate(cfg, gs.goals, jobs);
    reach = reach || gs.eval.verdict == Reach::kReachable;
    inconclusive = inconclusive || gs.eval.verdict == Reach::kInconclusive;
  }
  rep.verdict = reach          ? Reach::kReachable
                : inconclusive ? Reach::kInconclusive
                               : Reach::kUnreachable;
  return rep;
}

}  // namespace ordercheck
