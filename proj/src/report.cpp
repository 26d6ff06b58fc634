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

#include "ordercheck/report.hpp"

namespace ordercheck {

namespace {

Json header(const char* kind) {
  Json j;
  j["schema_version"] = kSchemaVersion;
  j["kind"] = kind;
  return j;
}

Json items_json(const Trace& t, const std::vector<int>& ids) {
  Json a = Json::array();
  for (int id : ids) a.push_back(t.items()[t.position_of(id)].str());
  return a;
}

Json pairs_json(const OrderDag& d) {
  Json a = Json::array();
  for (const auto& [u, v] : d.edges) a.push_back({u, v});
  return a;
}

}  // namespace

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

Json counts_json(const std::string& model, const ForestCounts& c,
                 bool all_observers) {
  Json j = header("counts");
  j["model"] = model;
  j["all_observers"] = all_observers;
  j["trees"] = c.n_trees;
  j["trivial"] = c.n_trivial;
  j["leaves"] = c.n_leaves;
  return j;
}

Json forest_json(const Forest& forest) {
  Json j = header("forest");
  j["model"] = forest.model;
  const ForestCounts c = forest.counts();
  j["counts"] = {{"trees", c.n_trees},
                 {"trivial", c.n_trivial},
                 {"leaves", c.n_leaves}};
  Json trees = Json::array();
  for (const auto& t : forest.trees) {
    Json tj;
    tj["index"] = t.index;
    tj["name"] = t.name();
    tj["rule"] = t.rule.str();
    tj["addr"] = to_string(t.addr);
    if (t.is_trivial()) {
      tj["trivial"] = t.trivial;
    } else {
      tj["events"] = {t.ev_second, t.ev_first};
      Json nodes = Json::array();
      for (const auto& n : t.nodes) {
        Json nj;
        nj["id"] = n.id;
        nj["parent"] = n.parent;
        nj["depth"] = n.depth;
        nj["trace"] = n.trace.str();
        nj["children"] = n.children;
        nodes.push_back(std::move(nj));
      }
      tj["leaves"] = t.leaf_ids();
      tj["nodes"] = std::move(nodes);
    }
    trees.push_back(std::move(tj));
  }
  j["trees"] = std::move(trees);
  return j;
}

Json verdicts_json(const Forest& forest, const std::vector<LeafVerdict>& vs) {
  Json j = header("verdicts");
  j["model"] = forest.model;
  std::size_t bad = 0;
  Json leaves = Json::array();
  for (const auto& lv : vs) {
    const Trace& t =
        forest.trees[static_cast<std::size_t>(lv.tree)]
            .nodes[static_cast<std::size_t>(lv.node)]
            .trace;
    Json l;
    l["tree"] = lv.tree;
    l["node"] = lv.node;
    l["trace"] = t.str();
    l["status"] = to_string(lv.verdict.status);
    if (lv.verdict.valid()) {
      l["restored"] = items_json(t, lv.verdict.restored);
      l["steps"] = lv.verdict.steps;
    } else {
      ++bad;
      l["blocking"] = items_json(t, lv.verdict.blocking);
    }
    leaves.push_back(std::move(l));
  }
  j["summary"] = {{"leaves", vs.size()}, {"violations", bad}};
  j["leaves"] = std::move(leaves);
  return j;
}

Json dtree_json(const DecisionTree& dt) {
  Json j = header("decision_tree");
  j["name"] = dt.name;
  j["younger"] = dt.younger;
  j["older"] = dt.older;
  j["younger_event"] = dt.younger_event;
  Json nodes = Json::array();
  for (const auto& n : dt.nodes) {
    Json nj;
    nj["id"] = n.id;
    if (n.leaf) {
      nj["outcome"] = to_string(n.outcome);
    } else {
      nj["question"] = n.text;
      nj["yes"] = n.yes;
      nj["no"] = n.no;
      nj["safe_answer"] = n.safe_answer ? "yes" : "no";
      if (!n.key_predicate.empty()) nj["key_predicate"] = n.key_predicate;
    }
    nodes.push_back(std::move(nj));
  }
  j["nodes"] = std::move(nodes);
  return j;
}

Json order_json(const ProgramSketch& prog, const OrderDag& induced,
                const OrderDag& reduced) {
  Json j = header("order");
  Json instrs = Json::array();
  for (const auto& i : prog) instrs.push_back(i.str());
  j["program"] = std::move(instrs);
  j["required"] = pairs_json(induced);
  j["direct"] = pairs_json(reduced);
  return j;
}

Json verify_json(const VerifyReport& rep) {
  Json j = header("verify");
  j["model"] = rep.model;
  j["config"] = rep.config;
  j["verdict"] = rep.verdict == Reach::kUnreachable ? "compliant"
                 : rep.verdict == Reach::kReachable ? "violation"
                                                    : "inconclusive";
  Json design = Json::array();
  for (const auto& f : rep.design) {
    Json d;
    d["tree"] = f.tree;
    d["name"] = f.name;
    d["leaves"] = f.leaves;
    d["violations"] = f.violations;
    if (!f.key_predicate.empty()) d["key_predicate"] = f.key_predicate;
    d["modeled"] = f.modeled;
    if (f.modeled)
      d["goal_set"] = f.goal_set;
    else
      d["reason"] = f.reason;
    design.push_back(std::move(d));
  }
  j["design"] = std::move(design);
  Json impl = Json::array();
  for (const auto& gs : rep.goal_sets) {
    Json g;
    g["trees"] = gs.trees;
    g["goals"] = gs.text;
    g["verdict"] = to_string(gs.eval.verdict);
    Json results = Json::array();
    for (const auto& st : gs.eval.goals) {
      Json r;
      r["goal"] = st.id;
      r["violation"] = st.violation;
      r["status"] = to_string(st.result.status);
      r["states"] = st.result.states;
      r["depth"] = st.result.depth;
      if (st.result.witness) r["witness"] = st.result.witness->str();
      results.push_back(std::move(r));
    }
    g["results"] = std::move(results);
    impl.push_back(std::move(g));
  }
  j["implementation"] = std::move(impl);
  return j;
}

}  // namespace ordercheck
