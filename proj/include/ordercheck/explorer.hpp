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

#ifndef ORDERCHECK_EXPLORER_HPP_
#define ORDERCHECK_EXPLORER_HPP_

#include <algorithm>
#include <cstddef>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "ordercheck/mcm_spec.hpp"
#include "ordercheck/parallel.hpp"
#include "ordercheck/trace_model.hpp"

namespace ordercheck {

struct ExplorationNode {
  int id = 0;
  int parent = -1;
  int depth = 0;
  Trace trace;
  std::vector<int> children;
};

struct ExplorationTree {
  int index = 0;
  std::size_t rule_index = 0;
  OrderRule rule;
  AddrRel addr = AddrRel::kDifferent;  // resolved: same or different
  std::string ev_second;  // empty for trivial trees
  std::string ev_first;
  std::string trivial;    // reason, empty when explored
  std::vector<ExplorationNode> nodes;  // nodes[0] is the root

  bool is_trivial() const { return !trivial.empty(); }
  const ExplorationNode& root() const { return nodes.front(); }

  std::string name() const {
    std::string s = rule.first.str() + "-" + rule.second.str() + " " +
                    to_string(addr);
    if (rule.fence) s += " fence " + rule.fence->pred + "," + rule.fence->succ;
    if (is_trivial()) return s + " (" + trivial + ")";
    return s + " " + ev_second + "/" + ev_first;
  }

  // Childless nodes of an explored tree, in id order.
  std::vector<int> leaf_ids() const {
    std::vector<int> out;
    if (is_trivial()) return out;
    for (const auto& n : nodes)
      if (n.children.empty()) out.push_back(n.id);
    return out;
  }
};

struct ForestCounts {
  std::size_t n_trees = 0;
  std::size_t n_trivial = 0;
  std::size_t n_leaves = 0;  // exploration leaves plus one per trivial tree
  bool operator==(const ForestCounts&) const = default;
};

struct Forest {
  std::string model;
  std::vector<ExplorationTree> trees;

  std::size_t exploration_leaves() const {
    std::size_t n = 0;
    for (const auto& t : trees) n += t.leaf_ids().size();
    return n;
  }

  ForestCounts counts() const {
    ForestCounts c;
    c.n_trees = trees.size();
    for (const auto& t : trees)
      if (t.is_trivial()) ++c.n_trivial;
    c.n_leaves = exploration_leaves() + c.n_trivial;
    return c;
  }
};

struct ExploreOptions {
  bool all_observers = false;
  unsigned jobs = 1;
};

// Whether a <m edge from position `from` to the later position `to` has a
// cross-thread witness. Same-address pairs are always ordered.
inline bool feasible_m_edge(const Trace& t, std::size_t from, std::size_t to) {
  const auto& it = t.items();
  const TraceItem& p = it[from];
  const TraceItem& q = it[to];
  if (p.addr == q.addr) return true;
  if (p.instr() && q.instr()) return false;
  if (p.instr()) {
    // The instruction's value must stop being live before the event can
    // follow it in memory order.
    for (std::size_t k = from + 1; k < to; ++k)
      if (!it[k].instr() && it[k].addr == p.addr &&
          events::ends_lifetime(it[k].kind))
        return true;
    return false;
  }
  // Event before an instruction: the instruction binds a fresh value (miss).
  // Event before event: ordered by the coherence protocol.
  return true;
}

namespace detail {

// Labels allowed between adjacent items p (at `left`) and q (at `left+1`).
inline std::vector<Label> label_options(const Trace& t, std::size_t left,
                                        Atomicity atomicity) {
  const TraceItem& p = t.items()[left];
  const TraceItem& q = t.items()[left + 1];
  if (serialized(p, q)) return {Label::kMem};
  if (p.instr() && q.instr()) return {Label::kExec};
  if (!p.instr() && !q.instr()) {
    // <e between two events is subsumed by <m, except for invalidations
    // under non-atomic writes, which need not reach every core together.
    if (atomicity == Atomicity::kNonAtomic && p.kind == "inv" &&
        q.kind == "inv")
      return {Label::kExec, Label::kMem};
    return {Label::kMem};
  }
  // Unserialized same-address pairs here are read-read; only an event
  // feeding a later instruction can carry <m (a fresh fetch).
  std::vector<Label> out{Label::kExec};
  if (p.addr == q.addr ? !p.instr() : feasible_m_edge(t, left, left + 1))
    out.push_back(Label::kMem);
  return out;
}

// A read-only instruction misses when some event precedes it in memory
// order: it bound a value fetched after that event.
inline Trace with_hit_miss(const Trace& t) {
  std::vector<TraceItem> items = t.items();
  for (auto& x : items) {
    if (!x.instr() || !x.read_only) continue;
    bool miss = false;
    for (const auto& y : t.items())
      if (!y.instr() && t.m_before(y.id, x.id)) miss = true;
    x.hit_miss = miss ? HitMiss::kMiss : HitMiss::kHit;
  }
  return make_trace(std::move(items), t.labels());
}

inline bool same_old_order(const Trace& parent, const Trace& child) {
  const int b = parent.second().id;
  const int a = parent.first().id;
  for (const auto& x : parent.items())
    for (const auto& y : parent.items()) {
      if (x.id == y.id || (x.id == b && y.id == a)) continue;
      if (parent.m_before(x.id, y.id) != child.m_before(x.id, y.id))
        return false;
    }
  return true;
}

}  // namespace detail

// Every placement of `ev` strictly between the two instructions, with every
// feasible labelling of its two adjacencies, that leaves the memory order
// among the existing items unchanged (apart from the instruction pair).
inline std::vector<Trace> enumerate_insertions(const Trace& parent,
                                               const TraceItem& ev,
                                               Atomicity atomicity) {
  std::vector<Trace> out;
  const std::size_t lo = parent.pos_second() + 1;
  const std::size_t hi = parent.pos_first();
  for (std::size_t pos = lo; pos <= hi; ++pos) {
    std::vector<TraceItem> items = parent.items();
    items.insert(items.begin() + static_cast<std::ptrdiff_t>(pos), ev);
    for (auto& x : items) x.hit_miss = HitMiss::kNone;

    // Label choices depend on the neighbours only, so probe them on a
    // trace with placeholder labels. Serialized placeholders must be <m.
    std::vector<Label> probe = parent.labels();
    probe.insert(probe.begin() + static_cast<std::ptrdiff_t>(pos - 1),
                 Label::kMem);
    probe[pos] = Label::kMem;
    Trace shape = make_trace(items, probe);
    auto left_opts = detail::label_options(shape, pos - 1, atomicity);
    auto right_opts = detail::label_options(shape, pos, atomicity);

    for (Label l : left_opts)
      for (Label r : right_opts) {
        std::vector<Label> labels = parent.labels();
        labels[pos - 1] = l;
        labels.insert(labels.begin() + static_cast<std::ptrdiff_t>(pos), r);
        Trace child = make_trace(items, labels);
        if (!detail::same_old_order(parent, child)) continue;
        out.push_back(detail::with_hit_miss(child));
      }
  }
  return out;
}

namespace detail {

inline void grow(ExplorationTree& tree, int node,
                 const std::vector<TraceItem>& evs, Atomicity atomicity) {
  const int depth = tree.nodes[static_cast<std::size_t>(node)].depth;
  if (depth >= static_cast<int>(evs.size())) return;
  const Trace parent = tree.nodes[static_cast<std::size_t>(node)].trace;
  std::vector<Trace> kids{parent};  // event absent
  for (auto& c : enumerate_insertions(parent, evs[static_cast<std::size_t>(depth)],
                                      atomicity))
    kids.push_back(std::move(c));
  for (auto& k : kids) {
    ExplorationNode n;
    n.id = static_cast<int>(tree.nodes.size());
    n.parent = node;
    n.depth = depth + 1;
    n.trace = std::move(k);
    tree.nodes[static_cast<std::size_t>(node)].children.push_back(n.id);
    tree.nodes.push_back(std::move(n));
    grow(tree, static_cast<int>(tree.nodes.size()) - 1, evs, atomicity);
  }
}

inline Trace root_trace(const McmSpec& spec, const OrderRule& rule,
                        AddrRel addr) {
  auto read_only = [&](const KindRef& k) {
    const InstrKind& kd = spec.kind(k.kind);
    return kd.read && !kd.write;
  };
  const char second_addr = addr == AddrRel::kSame ? 'A' : 'B';
  std::vector<TraceItem> items{
      instr_item(0, Role::kSecond, rule.second.str(), second_addr,
                 read_only(rule.second)),
      instr_item(1, Role::kFirst, rule.first.str(), 'A',
                 read_only(rule.first))};
  return with_hit_miss(make_trace(std::move(items), {Label::kExec}));
}

}  // namespace detail

// One exploration tree: the younger instruction executes first, then the
// event observing it and the event observing the older one are inserted in
// turn. Same-address pairs observed by the same event kind share one event.
inline ExplorationTree expand_pair(const McmSpec& spec, const OrderRule& rule,
                                   AddrRel addr, const std::string& ev_second,
                                   const std::string& ev_first) {
  ExplorationTree tree;
  tree.rule = rule;
  tree.addr = addr;
  tree.trivial = trivial_reason(spec, rule);
  ExplorationNode root;
  root.trace = detail::root_trace(spec, rule, addr);
  tree.nodes.push_back(std::move(root));
  if (tree.is_trivial()) return tree;

  tree.ev_second = ev_second;
  tree.ev_first = ev_first;
  const char second_addr = tree.root().trace.second().addr;
  std::vector<TraceItem> evs{event_item(2, ev_second, second_addr)};
  if (!(addr == AddrRel::kSame && ev_second == ev_first))
    evs.push_back(event_item(3, ev_first, 'A'));
  detail::grow(tree, 0, evs, spec.atomicity);
  return tree;
}

namespace detail {

struct TreeJob {
  std::size_t rule_index;
  AddrRel addr;
  std::string ev_second;
  std::string ev_first;
};

inline std::vector<TreeJob> plan(const McmSpec& spec, bool all_observers) {
  std::vector<TreeJob> jobs;
  for (std::size_t r = 0; r < spec.rules.size(); ++r) {
    const OrderRule& rule = spec.rules[r];
    std::vector<AddrRel> rels;
    if (rule.addr == AddrRel::kAny)
      rels = {AddrRel::kSame, AddrRel::kDifferent};
    else
      rels = {rule.addr};
    for (AddrRel a : rels) {
      if (!trivial_reason(spec, rule).empty()) {
        jobs.push_back({r, a, "", ""});
        continue;
      }
      auto [second, first] = rule_observers(spec, rule, all_observers);
      for (const auto& b : second)
        for (const auto& f : first) jobs.push_back({r, a, b, f});
    }
  }
  return jobs;
}

}  // namespace detail

inline Forest generate_forest(const McmSpec& spec,
                              const ExploreOptions& opts = {}) {
  auto jobs = detail::plan(spec, opts.all_observers);
  Forest forest;
  forest.model = spec.name;
  forest.trees.resize(jobs.size());
  auto build = [&](std::size_t i) {
    const auto& j = jobs[i];
    ExplorationTree t = expand_pair(spec, spec.rules[j.rule_index], j.addr,
                                    j.ev_second, j.ev_first);
    t.index = static_cast<int>(i);
    t.rule_index = j.rule_index;
    forest.trees[i] = std::move(t);
  };
  parallel_for(jobs.size(), opts.jobs, build);
  return forest;
}

struct LeafRef {
  int tree = 0;
  int node = 0;
  const Trace* trace = nullptr;
};

inline std::vector<LeafRef> leaves(const Forest& forest) {
  std::vector<LeafRef> out;
  for (const auto& t : forest.trees)
    for (int id : t.leaf_ids())
      out.push_back({t.index, id, &t.nodes[static_cast<std::size_t>(id)].trace});
  return out;
}

inline std::string dot_escape(const std::string& s) {
  std::string o;
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o;
}

// `violations` holds node ids drawn as violating leaves.
inline std::string tree_dot(const ExplorationTree& tree,
                            const std::set<int>& violations = {}) {
  std::ostringstream o;
  o << "digraph tree" << tree.index << " {\n";
  o << "  label=\"" << dot_escape(tree.name()) << "\";\n";
  o << "  node [shape=box, fontname=\"monospace\"];\n";
  for (const auto& n : tree.nodes) {
    o << "  n" << n.id << " [label=\"" << n.id << ": "
      << dot_escape(n.trace.str()) << "\"";
    if (violations.count(n.id)) o << ", color=red, fontcolor=red";
    o << "];\n";
  }
  for (const auto& n : tree.nodes)
    for (int c : n.children) o << "  n" << n.id << " -> n" << c << ";\n";
  o << "}\n";
  return o.str();
}

}  // namespace ordercheck

#endif  // ORDERCHECK_EXPLORER_HPP_
