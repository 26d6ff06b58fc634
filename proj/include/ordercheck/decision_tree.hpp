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

#ifndef ORDERCHECK_DECISION_TREE_HPP_
#define ORDERCHECK_DECISION_TREE_HPP_

#include <algorithm>
#include <cstddef>
#include <map>
#include <regex>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ordercheck/explorer.hpp"
#include "ordercheck/restorer.hpp"

namespace ordercheck {

class GoalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Outcome { kCompliant, kViolation };

inline const char* to_string(Outcome o) {
  return o == Outcome::kCompliant ? "compliant" : "violation";
}

// Questions in the order they are asked. Each has a safe answer that rules
// out some violating leaves.
enum class QuestionKind { kReorders, kSquashYounger, kOlderHit };

struct DtNode {
  int id = 0;
  bool leaf = false;
  Outcome outcome = Outcome::kCompliant;
  QuestionKind question = QuestionKind::kReorders;
  std::string text;
  int yes = -1;
  int no = -1;
  bool safe_answer = false;   // answer that eliminates leaves
  std::string key_predicate;  // squash question only
};

struct DecisionTree {
  std::string name;
  bool same_addr = false;
  std::string younger;  // "ld B", or "ld2 A" for same kind and address
  std::string older;
  std::string younger_event;   // event observing the younger instruction
  char younger_addr = 'B';
  char older_addr = 'A';
  char event_addr = 'B';
  bool loads = false;          // both instructions are read-only
  std::vector<DtNode> nodes;   // nodes[0] is the root

  const DtNode& root() const { return nodes.front(); }

  // Follows `answers` (by question kind) from the root; unanswered
  // questions take the unsafe branch.
  Outcome evaluate(const std::map<QuestionKind, bool>& answers) const {
    const DtNode* n = &nodes.front();
    while (!n->leaf) {
      auto it = answers.find(n->question);
      bool ans = it == answers.end() ? !n->safe_answer : it->second;
      n = &nodes[static_cast<std::size_t>(ans ? n->yes : n->no)];
    }
    return n->outcome;
  }

  // Question nodes along the all-unsafe path, root first.
  std::vector<const DtNode*> unsafe_path() const {
    std::vector<const DtNode*> out;
    const DtNode* n = &nodes.front();
    while (!n->leaf) {
      out.push_back(n);
      n = &nodes[static_cast<std::size_t>(n->safe_answer ? n->no : n->yes)];
    }
    return out;
  }

  bool has_question(QuestionKind k) const {
    return std::any_of(nodes.begin(), nodes.end(), [&](const DtNode& n) {
      return !n.leaf && n.question == k;
    });
  }
};

namespace detail {

struct LeafInfo {
  int node;
  const Trace* trace;
};

inline bool eliminated(QuestionKind q, const LeafInfo& l) {
  const Trace& t = *l.trace;
  const TraceItem& b = t.second();
  const TraceItem& a = t.first();
  switch (q) {
    case QuestionKind::kReorders:
      return true;
    case QuestionKind::kSquashYounger: {
      // Squashing the younger read when the event observing it arrives
      // before commit undoes every leaf where that event follows it in
      // memory order.
      if (!b.reads()) return false;
      for (const auto& x : t.items())
        if (!x.instr() && x.id == 2 && t.m_before(b.id, x.id)) return true;
      return false;
    }
    case QuestionKind::kOlderHit: {
      // A hit rules out the older read binding a value fetched after an
      // event on another line.
      if (!a.reads()) return false;
      for (const auto& x : t.items())
        if (!x.instr() && x.addr != a.addr && t.m_before(x.id, a.id))
          return true;
      return false;
    }
  }
  return false;
}

inline std::string memory_chain(const Trace& t, const DecisionTree& dt) {
  const int b = t.second().id;
  const int a = t.first().id;
  std::string s;
  for (const auto& x : t.items()) {
    bool on = x.id == b || x.id == a ||
              (t.m_before(b, x.id) && t.m_before(x.id, a));
    if (!on) continue;
    if (!s.empty()) s += " <m ";
    if (x.id == b)
      s += dt.younger;
    else if (x.id == a)
      s += dt.older;
    else
      s += x.str();
  }
  return s;
}

inline int synth(DecisionTree& dt, const std::vector<LeafInfo>& remaining,
                 std::size_t q) {
  static const QuestionKind kOrder[] = {QuestionKind::kReorders,
                                        QuestionKind::kSquashYounger,
                                        QuestionKind::kOlderHit};
  const int id = static_cast<int>(dt.nodes.size());
  if (remaining.empty() || q == std::size(kOrder)) {
    DtNode leaf;
    leaf.id = id;
    leaf.leaf = true;
    leaf.outcome = remaining.empty() ? Outcome::kCompliant : Outcome::kViolation;
    leaf.text = to_string(leaf.outcome);
    dt.nodes.push_back(leaf);
    return id;
  }
  const QuestionKind kind = kOrder[q];
  std::vector<LeafInfo> kept;
  const LeafInfo* first_gone = nullptr;
  for (const auto& l : remaining) {
    if (eliminated(kind, l)) {
      if (!first_gone) first_gone = &l;
    } else {
      kept.push_back(l);
    }
  }
  if (!first_gone) return synth(dt, remaining, q + 1);

  DtNode n;
  n.id = id;
  n.question = kind;
  switch (kind) {
    case QuestionKind::kReorders:
      n.text = "execute " + dt.younger + " before " + dt.older + "?";
      n.safe_answer = false;
      break;
    case QuestionKind::kSquashYounger:
      n.text = "squash " + dt.younger + " on " + dt.younger_event +
               " before commit?";
      n.safe_answer = true;
      n.key_predicate = "if " + dt.older + " <p " + dt.younger + " and " +
                        memory_chain(*first_gone->trace, dt) + " then squash " +
                        dt.younger;
      break;
    case QuestionKind::kOlderHit:
      n.text = "is " + dt.older + " a hit?";
      n.safe_answer = true;
      break;
  }
  dt.nodes.push_back(n);
  const int safe = synth(dt, kept, q + 1);
  const int unsafe = synth(dt, remaining, q + 1);
  DtNode& me = dt.nodes[static_cast<std::size_t>(id)];
  me.yes = me.safe_answer ? safe : unsafe;
  me.no = me.safe_answer ? unsafe : safe;
  return id;
}

}  // namespace detail

// `verdicts` must cover every leaf of `tree` (a forest-wide list is fine).
inline DecisionTree build_decision_tree(const ExplorationTree& tree,
                                        const std::vector<LeafVerdict>& verdicts) {
  DecisionTree dt;
  dt.name = tree.name();
  dt.same_addr = tree.addr == AddrRel::kSame;
  const Trace& root = tree.root().trace;
  const TraceItem& b = root.second();
  const TraceItem& a = root.first();
  dt.younger_addr = b.addr;
  dt.older_addr = a.addr;
  dt.event_addr = b.addr;
  dt.loads = b.read_only && a.read_only;
  if (dt.same_addr && b.kind == a.kind) {
    const std::string base = base_kind(b.kind);
    const std::string ann =
        b.kind.size() > base.size() ? b.kind.substr(base.size()) : "";
    dt.younger = base + "2" + ann + " " + std::string(1, b.addr);
    dt.older = base + "1" + ann + " " + std::string(1, a.addr);
  } else {
    dt.younger = b.str();
    dt.older = a.str();
  }
  dt.younger_event = tree.ev_second.empty()
                         ? std::string("-")
                         : tree.ev_second + " " + std::string(1, b.addr);

  std::vector<detail::LeafInfo> bad;
  for (int id : tree.leaf_ids()) {
    auto it = std::find_if(verdicts.begin(), verdicts.end(),
                           [&](const LeafVerdict& v) {
                             return v.tree == tree.index && v.node == id;
                           });
    if (it == verdicts.end())
      throw GoalError("no verdict for leaf " + std::to_string(id) + " of tree " +
                      std::to_string(tree.index) + " (" + tree.name() + ")");
    if (!it->verdict.valid())
      bad.push_back({id, &tree.nodes[static_cast<std::size_t>(id)].trace});
  }
  detail::synth(dt, bad, 0);
  return dt;
}

inline std::string dtree_dot(const DecisionTree& dt, int index = 0) {
  std::ostringstream o;
  o << "digraph dtree" << index << " {\n";
  o << "  label=\"" << dot_escape(dt.name) << "\";\n";
  for (const auto& n : dt.nodes) {
    o << "  d" << n.id << " [label=\"" << dot_escape(n.text) << "\"";
    if (n.leaf)
      o << ", shape=box"
        << (n.outcome == Outcome::kViolation ? ", color=red, fontcolor=red"
                                             : "");
    else
      o << ", shape=diamond";
    o << "];\n";
  }
  for (const auto& n : dt.nodes)
    if (!n.leaf) {
      o << "  d" << n.id << " -> d" << n.yes << " [label=\"yes\"];\n";
      o << "  d" << n.id << " -> d" << n.no << " [label=\"no\"];\n";
    }
  o << "}\n";
  return o.str();
}

// ---------------------------------------------------------------------------
// Reachability goals

// Abstract conditions a goal may use. Arguments are index variables (i, j)
// or address symbols (A, B).
namespace cond {
inline constexpr const char* kOrder = "order";        // {0} < {1}
inline constexpr const char* kAddr = "addr";          // entry {0} has addr {1}
inline constexpr const char* kExecuted = "executed";  // entry {0}
inline constexpr const char* kObserved = "observed";  // entry {0}
inline constexpr const char* kRelease = "release";    // applied inv addr {0}
inline constexpr const char* kSquash = "squash";      // squash flag raised
inline constexpr const char* kMiss = "miss";          // entry {0} missed

inline const std::vector<std::string>& all() {
  static const std::vector<std::string> kAll = {
      kOrder, kAddr, kExecuted, kObserved, kRelease, kSquash, kMiss};
  return kAll;
}
}  // namespace cond

struct SignalMap {
  std::string name;
  std::map<std::string, std::string> templates;  // condition -> text
  std::string negation = "¬";
  std::string conjunction = " ∧ ";
};

// Signal names of the Berkeley out-of-order core's load queue.
inline SignalMap boom_signals() {
  return {"boom",
          {{cond::kOrder, "{0} < {1}"},
           {cond::kAddr, "ldQ[{0}] = {1}"},
           {cond::kExecuted, "ldQ[{0}].executed"},
           {cond::kObserved, "ldQ[{0}].observed"},
           {cond::kRelease, "io.release.addr = {0}"},
           {cond::kSquash, "ld_xcpt_valid"},
           {cond::kMiss, "ldQ[{0}].miss"}},
          "¬",
          " ∧ "};
}

// Field names of the bundled load-queue model.
inline SignalMap microcheck_signals() {
  return {"microcheck",
          {{cond::kOrder, "{0} < {1}"},
           {cond::kAddr, "lq[{0}].addr = {1}"},
           {cond::kExecuted, "lq[{0}].exec"},
           {cond::kObserved, "lq[{0}].obs"},
           {cond::kRelease, "rel.addr = {0}"},
           {cond::kSquash, "xcpt"},
           {cond::kMiss, "lq[{0}].miss"}},
          "¬",
          " ∧ "};
}

struct Atom {
  std::string cond;
  bool negated = false;
  std::vector<std::string> args;
  bool operator==(const Atom&) const = default;
};

struct ReachabilityGoal {
  std::string id;
  std::vector<std::string> params;
  std::string builds_on;  // empty for the first goal
  std::vector<std::string> builds_on_args;
  std::vector<Atom> conjuncts;
  bool violation = false;
  bool operator==(const ReachabilityGoal&) const = default;
};

inline std::string fill(const std::string& tmpl,
                        const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t k = 0; k < tmpl.size(); ++k) {
    if (tmpl[k] == '{' && k + 2 < tmpl.size() && tmpl[k + 2] == '}' &&
        tmpl[k + 1] >= '0' && tmpl[k + 1] <= '9') {
      auto idx = static_cast<std::size_t>(tmpl[k + 1] - '0');
      if (idx >= args.size())
        throw GoalError("template '" + tmpl + "' needs argument " +
                        std::to_string(idx));
      out += args[idx];
      k += 2;
    } else {
      out += tmpl[k];
    }
  }
  return out;
}

inline std::string render_atom(const Atom& a, const SignalMap& map) {
  auto it = map.templates.find(a.cond);
  if (it == map.templates.end())
    throw GoalError("signal map '" + map.name + "' has no entry for '" +
                    a.cond + "'");
  return (a.negated ? map.negation : "") + fill(it->second, a.args);
}

inline std::string call_text(const std::string& id,
                             const std::vector<std::string>& args) {
  return id + "(" + detail::join(args, ",") + ")";
}

// Right-hand side only.
inline std::string render_body(const ReachabilityGoal& g, const SignalMap& map) {
  std::vector<std::string> parts;
  if (!g.builds_on.empty()) parts.push_back(call_text(g.builds_on, g.builds_on_args));
  for (const auto& a : g.conjuncts) parts.push_back(render_atom(a, map));
  return detail::join(parts, map.conjunction);
}

// "Goal2(i,j,A): Goal1(i,j,A) ∧ ..." as printed in reports.
inline std::string render_goal(const ReachabilityGoal& g, const SignalMap& map) {
  return call_text(g.id, g.params) + ": " + render_body(g, map);
}

namespace detail {

inline void require_total(const SignalMap& map,
                          const std::set<std::string>& used) {
  std::vector<std::string> missing;
  for (const auto& c : used)
    if (!map.templates.count(c)) missing.push_back(c);
  if (!missing.empty())
    throw GoalError("signal map '" + map.name + "' is missing: " +
                    join(missing, ", "));
}

}  // namespace detail

// One goal per question on the unsafe path, each extending the previous
// one, plus a final goal whose reachability means the violation can occur.
inline std::vector<ReachabilityGoal> emit_goals(const DecisionTree& dt,
                                                const SignalMap& map) {
  auto path = dt.unsafe_path();
  if (path.empty()) return {};
  if (!dt.loads)
    throw GoalError("goals are defined for load pairs only (" + dt.name + ")");

  const std::string A(1, dt.older_addr);
  const std::string B(1, dt.younger_addr);
  std::vector<std::string> params{"i", "j", A};
  if (B != A) params.push_back(B);

  std::vector<ReachabilityGoal> goals;
  std::set<std::string> used;
  auto add = [&](std::vector<Atom> atoms, bool violation) {
    ReachabilityGoal g;
    g.id = "Goal" + std::to_string(goals.size() + 1);
    g.params = params;
    if (!goals.empty()) {
      g.builds_on = goals.back().id;
      g.builds_on_args = params;
    }
    g.conjuncts = std::move(atoms);
    g.violation = violation;
    for (const auto& a : g.conjuncts) used.insert(a.cond);
    goals.push_back(std::move(g));
  };

  for (const DtNode* q : path) {
    switch (q->question) {
      case QuestionKind::kReorders:
        add({{cond::kOrder, false, {"i", "j"}},
             {cond::kAddr, false, {"i", A}},
             {cond::kAddr, false, {"j", B}},
             {cond::kExecuted, false, {"j"}},
             {cond::kExecuted, true, {"i"}}},
            false);
        break;
      case QuestionKind::kSquashYounger:
        add({{cond::kRelease, false, {std::string(1, dt.event_addr)}},
             {cond::kObserved, false, {"j"}},
             {cond::kSquash, true, {}}},
            false);
        break;
      case QuestionKind::kOlderHit:
        add({{cond::kExecuted, false, {"i"}}, {cond::kMiss, false, {"i"}}},
            false);
        break;
    }
  }
  std::vector<Atom> last;
  const Atom exec_i{cond::kExecuted, false, {"i"}};
  const auto& prev = goals.back().conjuncts;
  if (std::find(prev.begin(), prev.end(), exec_i) == prev.end())
    last.push_back(exec_i);
  last.push_back({cond::kSquash, true, {}});
  add(std::move(last), true);
  detail::require_total(map, used);
  return goals;
}

// Goal file grammar (UTF-8, one statement per line, '#' comments):
//   GOAL <id>(<param>,...): <conjunct> ∧ <conjunct> ...
//   VIOLATION <id>
// A conjunct is <Goal>(<args>) referring to an earlier goal, or a signal
// template from the map, optionally prefixed by the negation sign. The
// referenced goal must hold at an earlier point of the same run, and its
// conditions that this goal does not negate must keep holding until then.
inline std::string write_goals(const std::vector<ReachabilityGoal>& goals,
                               const SignalMap& map,
                               const std::string& comment = "") {
  std::ostringstream o;
  if (!comment.empty()) o << "# " << comment << "\n";
  o << "# signals: " << map.name << "\n";
  for (const auto& g : goals)
    o << "GOAL " << call_text(g.id, g.params) << ": " << render_body(g, map)
      << "\n";
  for (const auto& g : goals)
    if (g.violation) o << "VIOLATION " << g.id << "\n";
  return o.str();
}

namespace detail {

inline std::string trim(const std::string& s) {
  const char* ws = " \t\r\n";
  auto b = s.find_first_not_of(ws);
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline std::string regex_escape(const std::string& s) {
  static const std::string special = R"(\^$.|?*+()[]{})";
  std::string o;
  for (char c : s) {
    if (special.find(c) != std::string::npos) o += '\\';
    o += c;
  }
  return o;
}

inline std::vector<std::string> split_on(const std::string& s,
                                         const std::string& sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    auto p = s.find(sep, start);
    if (p == std::string::npos) {
      out.push_back(s.substr(start));
      return out;
    }
    out.push_back(s.substr(start, p - start));
    start = p + sep.size();
  }
}

struct CompiledTemplate {
  std::string cond;
  std::regex re;
  std::vector<int> slots;  // capture group k -> template argument index
};

inline std::vector<CompiledTemplate> compile(const SignalMap& map) {
  std::vector<CompiledTemplate> out;
  for (const auto& [c, tmpl] : map.templates) {
    std::string pat;
    std::vector<int> slots;
    for (std::size_t k = 0; k < tmpl.size(); ++k) {
      if (tmpl[k] == '{' && k + 2 < tmpl.size() && tmpl[k + 2] == '}') {
        pat += "([A-Za-z_][A-Za-z0-9_]*)";
        slots.push_back(tmpl[k + 1] - '0');
        k += 2;
      } else if (tmpl[k] == ' ') {
        pat += "\\s*";
      } else {
        pat += regex_escape(std::string(1, tmpl[k]));
      }
    }
    out.push_back({c, std::regex(pat), slots});
  }
  return out;
}

inline std::vector<std::string> parse_args(const std::string& s) {
  std::vector<std::string> out;
  for (auto& a : split(s, ',')) {
    auto t = trim(a);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace detail

inline std::vector<ReachabilityGoal> parse_goals(const std::string& text,
                                                 const SignalMap& map) {
  auto templates = detail::compile(map);
  const std::regex head(R"(^GOAL\s+([A-Za-z_][A-Za-z0-9_]*)\(([^)]*)\)\s*:\s*(.*)$)");
  const std::regex viol(R"(^VIOLATION\s+([A-Za-z_][A-Za-z0-9_]*)\s*$)");
  const std::regex call(R"(^([A-Za-z_][A-Za-z0-9_]*)\(([^)]*)\)$)");
  const std::string conj_sep = detail::trim(map.conjunction);

  std::vector<ReachabilityGoal> goals;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  auto find_goal = [&](const std::string& id) -> ReachabilityGoal* {
    for (auto& g : goals)
      if (g.id == id) return &g;
    return nullptr;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::string t = detail::trim(line);
    if (t.empty() || t[0] == '#') continue;
    std::smatch m;
    auto where = [&] { return "line " + std::to_string(lineno) + ": "; };
    if (std::regex_match(t, m, viol)) {
      auto* g = find_goal(m[1].str());
      if (!g) throw GoalError(where() + "unknown goal '" + m[1].str() + "'");
      g->violation = true;
      continue;
    }
    if (!std::regex_match(t, m, head))
      throw GoalError(where() + "expected GOAL or VIOLATION");
    ReachabilityGoal g;
    g.id = m[1].str();
    if (find_goal(g.id)) throw GoalError(where() + "goal '" + g.id + "' redefined");
    g.params = detail::parse_args(m[2].str());
    const std::string body = m[3].str();
    bool first = true;
    for (auto part : detail::split_on(body, conj_sep)) {
      part = detail::trim(part);
      if (part.empty()) throw GoalError(where() + "empty conjunct");
      std::smatch cm;
      if (first && std::regex_match(part, cm, call) &&
          find_goal(cm[1].str())) {
        g.builds_on = cm[1].str();
        g.builds_on_args = detail::parse_args(cm[2].str());
        if (g.builds_on_args.size() != find_goal(g.builds_on)->params.size())
          throw GoalError(where() + "wrong argument count for '" + g.builds_on +
                          "'");
        first = false;
        continue;
      }
      first = false;
      Atom a;
      if (part.rfind(map.negation, 0) == 0) {
        a.negated = true;
        part = detail::trim(part.substr(map.negation.size()));
      }
      bool matched = false;
      for (const auto& ct : templates) {
        std::smatch am;
        if (!std::regex_match(part, am, ct.re)) continue;
        a.cond = ct.cond;
        int n_args = 0;
        for (int s : ct.slots) n_args = std::max(n_args, s + 1);
        a.args.assign(static_cast<std::size_t>(n_args), "");
        for (std::size_t k = 0; k < ct.slots.size(); ++k)
          a.args[static_cast<std::size_t>(ct.slots[k])] = am[k + 1].str();
        matched = true;
        break;
      }
      if (!matched)
        throw GoalError(where() + "'" + part + "' matches no signal of map '" +
                        map.name + "'");
      g.conjuncts.push_back(std::move(a));
    }
    goals.push_back(std::move(g));
  }
  return goals;
}

}  // namespace ordercheck

#endif  // ORDERCHECK_DECISION_TREE_HPP_
