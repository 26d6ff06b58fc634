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

#ifndef ORDERCHECK_MICROCHECK_HPP_
#define ORDERCHECK_MICROCHECK_HPP_

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "ordercheck/decision_tree.hpp"
#include "ordercheck/parallel.hpp"

namespace ordercheck {

class LsqError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kMaxLoads = 4;
inline constexpr int kMaxInvs = 2;
inline constexpr int kMaxSteps = 24;
inline constexpr int kAddrs = 2;

struct Bounds {
  int max_loads = 3;
  int max_invs = 2;
  int max_steps = 24;
};

struct LsqConfig {
  std::string name = "default";
  int queue_size = 4;
  bool allow_load_reorder = true;
  bool squash_on_invalidation = true;
  // Search for observed younger loads only when an older load misses.
  bool squash_requires_miss = false;
  // Squash on any older unexecuted load, not only same-address ones.
  bool squash_any_older = false;
  bool inorder_stores = true;  // no stores are modeled; reported only
  bool drop_invalidation_search = false;
  bool skip_squash_flag = false;
  bool evictions = false;
  bool evict_observes = false;
  Bounds bounds;
};

inline void validate(const LsqConfig& c) {
  if (c.queue_size < 1 || c.queue_size > 8)
    throw LsqError("queue_size must be in 1..8");
  if (c.drop_invalidation_search && c.skip_squash_flag)
    throw LsqError("at most one bug seed may be active");
  const Bounds& b = c.bounds;
  if (b.max_loads < 1 || b.max_loads > kMaxLoads)
    throw LsqError("max_loads must be in 1.." + std::to_string(kMaxLoads));
  if (b.max_loads > c.queue_size)
    throw LsqError("max_loads exceeds queue_size");
  if (b.max_invs < 0 || b.max_invs > kMaxInvs)
    throw LsqError("max_invs must be in 0.." + std::to_string(kMaxInvs));
  if (b.max_steps < 1 || b.max_steps > kMaxSteps)
    throw LsqError("max_steps must be in 1.." + std::to_string(kMaxSteps));
}

namespace detail {

inline bool parse_bool(const std::string& v, const std::string& key) {
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw LsqError("'" + key + "' expects true or false, got '" + v + "'");
}

inline int parse_int(const std::string& v, const std::string& key) {
  try {
    std::size_t used = 0;
    int x = std::stoi(v, &used);
    if (used == v.size()) return x;
  } catch (const std::exception&) {
  }
  throw LsqError("'" + key + "' expects an integer, got '" + v + "'");
}

inline void set_key(LsqConfig& c, const std::string& k, const std::string& v) {
  if (k == "name") c.name = v;
  else if (k == "queue_size") c.queue_size = parse_int(v, k);
  else if (k == "allow_load_reorder") c.allow_load_reorder = parse_bool(v, k);
  else if (k == "squash_on_invalidation") c.squash_on_invalidation = parse_bool(v, k);
  else if (k == "squash_requires_miss") c.squash_requires_miss = parse_bool(v, k);
  else if (k == "squash_any_older") c.squash_any_older = parse_bool(v, k);
  else if (k == "inorder_stores") c.inorder_stores = parse_bool(v, k);
  else if (k == "drop_invalidation_search") c.drop_invalidation_search = parse_bool(v, k);
  else if (k == "skip_squash_flag") c.skip_squash_flag = parse_bool(v, k);
  else if (k == "evictions") c.evictions = parse_bool(v, k);
  else if (k == "evict_observes") c.evict_observes = parse_bool(v, k);
  else if (k == "max_loads" || k == "loads") c.bounds.max_loads = parse_int(v, k);
  else if (k == "max_invs" || k == "invs") c.bounds.max_invs = parse_int(v, k);
  else if (k == "max_steps" || k == "steps") c.bounds.max_steps = parse_int(v, k);
  else throw LsqError("unknown config key '" + k + "'");
}

}  // namespace detail

// `key = value` per line, '#' comments.
inline LsqConfig parse_config(const std::string& text) {
  LsqConfig c;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw LsqError("line " + std::to_string(lineno) + ": expected key = value");
    try {
      detail::set_key(c, detail::trim(line.substr(0, eq)),
                      detail::trim(line.substr(eq + 1)));
    } catch (const LsqError& e) {
      throw LsqError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  validate(c);
  return c;
}

// "loads=3,invs=2,steps=24"; any subset.
inline void apply_bounds(LsqConfig& c, const std::string& spec) {
  for (const auto& kv : detail::split(spec, ',')) {
    auto t = detail::trim(kv);
    if (t.empty()) continue;
    auto eq = t.find('=');
    if (eq == std::string::npos) throw LsqError("malformed bound '" + t + "'");
    auto k = detail::trim(t.substr(0, eq));
    if (k != "loads" && k != "invs" && k != "steps")
      throw LsqError("unknown bound '" + k + "'");
    detail::set_key(c, k, detail::trim(t.substr(eq + 1)));
  }
  validate(c);
}

struct LsqEntry {
  std::uint8_t addr = 0;
  bool executed = false;
  bool observed = false;
  bool miss = false;
  bool committed = false;
  bool operator==(const LsqEntry&) const = default;
};

struct LsqState {
  int n = 0;
  std::array<LsqEntry, kMaxLoads> q{};
  int fifo_len = 0;  // invalidations delivered, not yet applied
  std::array<std::uint8_t, kMaxInvs> fifo{};
  int release = -1;  // address of the last applied invalidation
  bool xcpt = false;
  int xcpt_target = 0;
  std::array<bool, kAddrs> valid{};
  int invs = 0;  // delivered so far
  int evictions = 0;

  bool operator==(const LsqState&) const = default;

  // 38 bits.
  std::uint64_t key() const {
    std::uint64_t k = 0;
    auto put = [&](std::uint64_t v, int bits) { k = (k << bits) | v; };
    put(static_cast<std::uint64_t>(n), 3);
    for (int i = 0; i < kMaxLoads; ++i) {
      const auto& e = q[static_cast<std::size_t>(i)];
      put(e.addr, 1);
      put(e.executed, 1);
      put(e.observed, 1);
      put(e.miss, 1);
      put(e.committed, 1);
    }
    put(static_cast<std::uint64_t>(fifo_len), 2);
    for (int i = 0; i < kMaxInvs; ++i) put(fifo[static_cast<std::size_t>(i)], 1);
    put(static_cast<std::uint64_t>(release + 1), 2);
    put(xcpt, 1);
    put(static_cast<std::uint64_t>(xcpt_target), 2);
    for (int a = 0; a < kAddrs; ++a) put(valid[static_cast<std::size_t>(a)], 1);
    put(static_cast<std::uint64_t>(invs), 2);
    put(static_cast<std::uint64_t>(evictions), 2);
    return k;
  }

  static LsqState from_key(std::uint64_t k) {
    LsqState s;
    auto take = [&](int bits) {
      std::uint64_t v = k & ((std::uint64_t{1} << bits) - 1);
      k >>= bits;
      return v;
    };
    s.evictions = static_cast<int>(take(2));
    s.invs = static_cast<int>(take(2));
    for (int a = kAddrs; a-- > 0;) s.valid[static_cast<std::size_t>(a)] = take(1);
    s.xcpt_target = static_cast<int>(take(2));
    s.xcpt = take(1);
    s.release = static_cast<int>(take(2)) - 1;
    for (int i = kMaxInvs; i-- > 0;)
      s.fifo[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(take(1));
    s.fifo_len = static_cast<int>(take(2));
    for (int i = kMaxLoads; i-- > 0;) {
      auto& e = s.q[static_cast<std::size_t>(i)];
      e.committed = take(1);
      e.miss = take(1);
      e.observed = take(1);
      e.executed = take(1);
      e.addr = static_cast<std::uint8_t>(take(1));
    }
    s.n = static_cast<int>(take(3));
    return s;
  }
};

inline char addr_name(int a) { return static_cast<char>('A' + a); }

inline LsqState initial_state(const std::vector<int>& program,
                              unsigned cache_bits) {
  if (program.empty() || program.size() > static_cast<std::size_t>(kMaxLoads))
    throw LsqError("program must have 1.." + std::to_string(kMaxLoads) +
                   " loads");
  LsqState s;
  s.n = static_cast<int>(program.size());
  for (std::size_t i = 0; i < program.size(); ++i) {
    if (program[i] < 0 || program[i] >= kAddrs)
      throw LsqError("load address out of range");
    s.q[i].addr = static_cast<std::uint8_t>(program[i]);
  }
  for (int a = 0; a < kAddrs; ++a)
    s.valid[static_cast<std::size_t>(a)] = (cache_bits >> a) & 1u;
  return s;
}

enum class ActionKind { kIssue, kDeliver, kBusOp, kSquash, kCommit, kEvict };

struct Action {
  ActionKind kind = ActionKind::kIssue;
  int arg = 0;  // load index or address

  bool operator==(const Action&) const = default;

  std::string str() const {
    switch (kind) {
      case ActionKind::kIssue:
        return "issue " + std::to_string(arg);
      case ActionKind::kDeliver:
        return std::string("deliver ") + addr_name(arg);
      case ActionKind::kBusOp:
        return "bus";
      case ActionKind::kSquash:
        return "squash";
      case ActionKind::kCommit:
        return "commit";
      case ActionKind::kEvict:
        return std::string("evict ") + addr_name(arg);
    }
    return "?";
  }
};

inline Action parse_action(const std::string& text) {
  std::istringstream in(text);
  std::string verb, arg;
  in >> verb >> arg;
  auto addr = [&]() {
    if (arg.size() != 1 || arg[0] < 'A' || arg[0] >= 'A' + kAddrs)
      throw LsqError("bad address in action '" + text + "'");
    return arg[0] - 'A';
  };
  if (verb == "issue") return {ActionKind::kIssue, detail::parse_int(arg, "issue")};
  if (verb == "deliver") return {ActionKind::kDeliver, addr()};
  if (verb == "bus") return {ActionKind::kBusOp, 0};
  if (verb == "squash") return {ActionKind::kSquash, 0};
  if (verb == "commit") return {ActionKind::kCommit, 0};
  if (verb == "evict") return {ActionKind::kEvict, addr()};
  throw LsqError("unknown action '" + text + "'");
}

namespace detail {

inline int first_uncommitted(const LsqState& s) {
  for (int k = 0; k < s.n; ++k)
    if (!s.q[static_cast<std::size_t>(k)].committed) return k;
  return s.n;
}

inline void raise_squash(const LsqConfig& c, LsqState& s, int target) {
  if (c.skip_squash_flag) return;
  s.xcpt_target = s.xcpt ? std::min(s.xcpt_target, target) : target;
  s.xcpt = true;
}

// An invalidation (or observing eviction) of `a` takes effect locally.
inline void apply_invalidation(const LsqConfig& c, LsqState& s, int a) {
  s.release = a;
  s.valid[static_cast<std::size_t>(a)] = false;
  for (int k = 0; k < s.n; ++k) {
    auto& e = s.q[static_cast<std::size_t>(k)];
    if (e.addr == a && e.executed && !e.committed) e.observed = true;
  }
  if (!c.squash_on_invalidation || c.squash_requires_miss ||
      c.drop_invalidation_search)
    return;
  // Younger executed load that saw this invalidation while an older load
  // it may be reordered with has not executed yet.
  for (int m = 0; m < s.n; ++m) {
    const auto& y = s.q[static_cast<std::size_t>(m)];
    if (y.addr != a || !y.executed || !y.observed || y.committed) continue;
    for (int k = 0; k < m; ++k) {
      const auto& o = s.q[static_cast<std::size_t>(k)];
      if (!o.executed && (c.squash_any_older || o.addr == y.addr)) {
        raise_squash(c, s, m);
        return;
      }
    }
  }
}

}  // namespace detail

inline bool enabled(const LsqConfig& c, const LsqState& s, const Action& a) {
  switch (a.kind) {
    case ActionKind::kIssue: {
      if (a.arg < 0 || a.arg >= s.n || s.xcpt) return false;
      if (s.q[static_cast<std::size_t>(a.arg)].executed) return false;
      if (!c.allow_load_reorder)
        for (int k = 0; k < a.arg; ++k)
          if (!s.q[static_cast<std::size_t>(k)].executed) return false;
      return true;
    }
    case ActionKind::kDeliver:
      return a.arg >= 0 && a.arg < kAddrs && s.invs < c.bounds.max_invs &&
             s.fifo_len < kMaxInvs;
    case ActionKind::kBusOp:
      return s.fifo_len > 0;
    case ActionKind::kSquash:
      return s.xcpt;
    case ActionKind::kCommit: {
      int k = detail::first_uncommitted(s);
      return !s.xcpt && k < s.n && s.q[static_cast<std::size_t>(k)].executed;
    }
    case ActionKind::kEvict:
      return c.evictions && a.arg >= 0 && a.arg < kAddrs &&
             s.valid[static_cast<std::size_t>(a.arg)] &&
             s.evictions < c.bounds.max_invs;
  }
  return false;
}

inline LsqState step(const LsqConfig& c, const LsqState& s0, const Action& a) {
  if (!enabled(c, s0, a)) throw LsqError("action '" + a.str() + "' is disabled");
  LsqState s = s0;
  switch (a.kind) {
    case ActionKind::kIssue: {
      auto& e = s.q[static_cast<std::size_t>(a.arg)];
      e.executed = true;
      e.miss = !s.valid[e.addr];
      s.valid[e.addr] = true;
      if (c.squash_on_invalidation && c.squash_requires_miss && e.miss &&
          !c.drop_invalidation_search) {
        for (int m = a.arg + 1; m < s.n; ++m) {
          const auto& y = s.q[static_cast<std::size_t>(m)];
          if (y.executed && y.observed && !y.committed &&
              (c.squash_any_older || y.addr == e.addr)) {
            detail::raise_squash(c, s, m);
            break;
          }
        }
      }
      break;
    }
    case ActionKind::kDeliver:
      s.fifo[static_cast<std::size_t>(s.fifo_len++)] =
          static_cast<std::uint8_t>(a.arg);
      ++s.invs;
      break;
    case ActionKind::kBusOp: {
      int addr = s.fifo[0];
      for (int k = 1; k < s.fifo_len; ++k)
        s.fifo[static_cast<std::size_t>(k - 1)] = s.fifo[static_cast<std::size_t>(k)];
      s.fifo[static_cast<std::size_t>(--s.fifo_len)] = 0;
      detail::apply_invalidation(c, s, addr);
      break;
    }
    case ActionKind::kSquash:
      for (int m = s.xcpt_target; m < s.n; ++m) {
        auto& e = s.q[static_cast<std::size_t>(m)];
        e.executed = e.observed = e.miss = false;
      }
      s.xcpt = false;
      s.xcpt_target = 0;
      break;
    case ActionKind::kCommit:
      s.q[static_cast<std::size_t>(detail::first_uncommitted(s))].committed = true;
      break;
    case ActionKind::kEvict:
      ++s.evictions;
      if (c.evict_observes) {
        detail::apply_invalidation(c, s, a.arg);
      } else {
        s.valid[static_cast<std::size_t>(a.arg)] = false;
      }
      break;
  }
  return s;
}

inline std::vector<Action> enabled_actions(const LsqConfig& c,
                                           const LsqState& s) {
  std::vector<Action> out;
  auto tryit = [&](Action a) {
    if (enabled(c, s, a)) out.push_back(a);
  };
  for (int k = 0; k < s.n; ++k) tryit({ActionKind::kIssue, k});
  for (int a = 0; a < kAddrs; ++a) tryit({ActionKind::kDeliver, a});
  tryit({ActionKind::kBusOp, 0});
  tryit({ActionKind::kSquash, 0});
  tryit({ActionKind::kCommit, 0});
  for (int a = 0; a < kAddrs; ++a) tryit({ActionKind::kEvict, a});
  return out;
}

// ---------------------------------------------------------------------------
// Goal evaluation

// A goal with its references expanded into stages that must hold in order
// along one run, all arguments renamed into the goal's own parameters.
// "GoalK(args) ∧ C" holds at a state where C holds together with every
// condition of GoalK that C does not negate; those carried conditions must
// hold continuously from a state where GoalK held up to that state.
struct GoalChain {
  std::string id;
  std::vector<std::string> index_vars;
  std::vector<std::string> addr_vars;
  // Each atom's args are slot numbers: index vars first, then addresses.
  struct SlotAtom {
    std::string cond;
    bool negated;
    std::vector<int> slots;
  };
  std::vector<std::vector<SlotAtom>> stages;
  // carried[k]: conditions that must stay true while waiting for stage k.
  std::vector<std::vector<SlotAtom>> carried;
};

inline GoalChain compile_goal(const std::vector<ReachabilityGoal>& goals,
                              const std::string& id) {
  auto find = [&](const std::string& g) -> const ReachabilityGoal& {
    for (const auto& x : goals)
      if (x.id == g) return x;
    throw GoalError("unknown goal '" + g + "'");
  };
  const ReachabilityGoal& top = find(id);

  // Expand references, renaming into `top`'s parameters.
  std::vector<std::vector<Atom>> stages;
  std::vector<std::string> depth_guard;
  auto expand = [&](auto&& self, const ReachabilityGoal& g,
                    const std::map<std::string, std::string>& rename) -> void {
    if (std::find(depth_guard.begin(), depth_guard.end(), g.id) !=
        depth_guard.end())
      throw GoalError("goal '" + g.id + "' refers to itself");
    depth_guard.push_back(g.id);
    auto rn = [&](const std::string& v) {
      auto it = rename.find(v);
      if (it == rename.end())
        throw GoalError("goal '" + g.id + "' uses undeclared variable '" + v + "'");
      return it->second;
    };
    if (!g.builds_on.empty()) {
      const ReachabilityGoal& base = find(g.builds_on);
      if (base.params.size() != g.builds_on_args.size())
        throw GoalError("goal '" + g.id + "' passes wrong argument count to '" +
                        base.id + "'");
      std::map<std::string, std::string> inner;
      for (std::size_t k = 0; k < base.params.size(); ++k)
        inner[base.params[k]] = rn(g.builds_on_args[k]);
      self(self, base, inner);
    }
    std::vector<Atom> st;
    for (auto a : g.conjuncts) {
      for (auto& x : a.args) x = rn(x);
      st.push_back(std::move(a));
    }
    stages.push_back(std::move(st));
    depth_guard.pop_back();
  };
  std::map<std::string, std::string> ident;
  for (const auto& p : top.params) ident[p] = p;
  expand(expand, top, ident);

  // A stage keeps every condition of the previous stage that it does not
  // contradict, so "Goal2 then i executed" still requires j to stay
  // executed and observed (not squashed in between).
  std::vector<std::vector<Atom>> carried(stages.size());
  for (std::size_t k = 1; k < stages.size(); ++k) {
    std::vector<Atom> merged = stages[k];
    for (const auto& a : stages[k - 1]) {
      Atom flipped = a;
      flipped.negated = !a.negated;
      bool contradicted = std::find(stages[k].begin(), stages[k].end(),
                                    flipped) != stages[k].end();
      bool present =
          std::find(merged.begin(), merged.end(), a) != merged.end();
      if (contradicted) continue;
      carried[k].push_back(a);
      if (!present) merged.push_back(a);
    }
    stages[k] = std::move(merged);
  }

  // Classify variables by where they are used.
  std::map<std::string, int> role;  // 1 index, 2 address
  auto mark = [&](const std::string& v, int r) {
    auto [it, fresh] = role.emplace(v, r);
    if (!fresh && it->second != r)
      throw GoalError("variable '" + v + "' used as both index and address");
  };
  for (const auto& st : stages)
    for (const auto& a : st) {
      if (a.cond == cond::kOrder) {
        mark(a.args.at(0), 1);
        mark(a.args.at(1), 1);
      } else if (a.cond == cond::kAddr) {
        mark(a.args.at(0), 1);
        mark(a.args.at(1), 2);
      } else if (a.cond == cond::kRelease) {
        mark(a.args.at(0), 2);
      } else if (a.cond == cond::kExecuted || a.cond == cond::kObserved ||
                 a.cond == cond::kMiss) {
        mark(a.args.at(0), 1);
      } else if (a.cond != cond::kSquash) {
        throw GoalError("condition '" + a.cond + "' is not modeled");
      }
    }

  GoalChain gc;
  gc.id = id;
  for (const auto& p : top.params) {
    auto it = role.find(p);
    if (it == role.end()) continue;
    (it->second == 1 ? gc.index_vars : gc.addr_vars).push_back(p);
  }
  if (gc.addr_vars.size() > static_cast<std::size_t>(kAddrs))
    throw GoalError("goal '" + id + "' uses more addresses than the model has");
  auto slot = [&](const std::string& v) {
    for (std::size_t k = 0; k < gc.index_vars.size(); ++k)
      if (gc.index_vars[k] == v) return static_cast<int>(k);
    for (std::size_t k = 0; k < gc.addr_vars.size(); ++k)
      if (gc.addr_vars[k] == v)
        return static_cast<int>(gc.index_vars.size() + k);
    throw GoalError("goal '" + id + "' uses undeclared variable '" + v + "'");
  };
  auto to_slots = [&](const std::vector<Atom>& st) {
    std::vector<GoalChain::SlotAtom> out;
    for (const auto& a : st) {
      GoalChain::SlotAtom sa{a.cond, a.negated, {}};
      for (const auto& x : a.args) sa.slots.push_back(slot(x));
      out.push_back(std::move(sa));
    }
    return out;
  };
  for (const auto& st : stages) gc.stages.push_back(to_slots(st));
  for (const auto& st : carried) gc.carried.push_back(to_slots(st));
  return gc;
}

// Values for the slots of a GoalChain: load indices then addresses.
using Binding = std::vector<int>;

inline std::vector<Binding> bindings(const GoalChain& g, int n_loads) {
  std::vector<Binding> out;
  const std::size_t ni = g.index_vars.size();
  const std::size_t na = g.addr_vars.size();
  Binding b(ni + na, 0);
  auto rec = [&](auto&& self, std::size_t k) -> void {
    if (k == ni + na) {
      out.push_back(b);
      return;
    }
    const int range = k < ni ? n_loads : kAddrs;
    for (int v = 0; v < range; ++v) {
      if (k >= ni) {
        bool used = false;
        for (std::size_t q = ni; q < k; ++q) used = used || b[q] == v;
        if (used) continue;  // distinct symbols, distinct addresses
      }
      b[k] = v;
      self(self, k + 1);
    }
  };
  rec(rec, 0);
  return out;
}

inline bool atom_holds(const GoalChain::SlotAtom& a, const LsqState& s,
                       const Binding& b) {
  auto val = [&](std::size_t k) { return b[static_cast<std::size_t>(a.slots[k])]; };
  auto entry = [&](std::size_t k) -> const LsqEntry* {
    int i = val(k);
    return i < s.n ? &s.q[static_cast<std::size_t>(i)] : nullptr;
  };
  bool r = false;
  if (a.cond == cond::kOrder) {
    r = val(0) < val(1);
  } else if (a.cond == cond::kAddr) {
    const LsqEntry* e = entry(0);
    r = e && e->addr == val(1);
  } else if (a.cond == cond::kExecuted) {
    const LsqEntry* e = entry(0);
    r = e && e->executed;
  } else if (a.cond == cond::kObserved) {
    const LsqEntry* e = entry(0);
    r = e && e->observed;
  } else if (a.cond == cond::kMiss) {
    const LsqEntry* e = entry(0);
    r = e && e->executed && e->miss;
  } else if (a.cond == cond::kRelease) {
    r = s.release == val(0);
  } else if (a.cond == cond::kSquash) {
    r = s.xcpt;
  }
  return a.negated ? !r : r;
}

inline bool stage_holds(const GoalChain& g, std::size_t stage,
                        const LsqState& s, const Binding& b) {
  for (const auto& a : g.stages[stage])
    if (!atom_holds(a, s, b)) return false;
  return true;
}

// Progress after moving to `s`: a broken carried condition restarts the
// chain; then every stage that holds in `s` is passed. Passing a stage as
// early as possible never hurts later ones.
inline std::size_t advance(const GoalChain& g, std::size_t stage,
                           const LsqState& s, const Binding& b) {
  if (stage > 0 && stage < g.stages.size())
    for (const auto& a : g.carried[stage])
      if (!atom_holds(a, s, b)) {
        stage = 0;
        break;
      }
  while (stage < g.stages.size() && stage_holds(g, stage, s, b)) ++stage;
  return stage;
}

struct Witness {
  std::string goal;
  std::vector<int> program;
  unsigned cache = 0;
  std::vector<Action> actions;
  std::vector<std::pair<std::string, std::string>> binding;  // var, value
  std::string goals_text;  // goal file the witness refers to (optional)

  std::string str() const {
    std::ostringstream o;
    o << "# witness for " << goal << "\n";
    if (!binding.empty()) {
      o << "# binding";
      for (const auto& [k, v] : binding) o << " " << k << "=" << v;
      o << "\n";
    }
    o << "goal " << goal << "\n";
    o << "program";
    for (int a : program) o << " " << addr_name(a);
    o << "\ncache ";
    for (int a = 0; a < kAddrs; ++a) o << ((cache >> a) & 1u);
    o << "\n";
    for (std::size_t k = 0; k < actions.size(); ++k)
      o << k + 1 << " " << actions[k].str() << "\n";
    if (!goals_text.empty()) {
      o << "goals\n";
      o << goals_text;
      if (goals_text.back() != '\n') o << "\n";
    }
    return o.str();
  }
};

// Inverse of Witness::str().
inline Witness parse_witness(const std::string& text) {
  Witness w;
  std::istringstream in(text);
  std::string line;
  bool in_goals = false;
  bool have_program = false;
  while (std::getline(in, line)) {
    if (in_goals) {
      w.goals_text += line + "\n";
      continue;
    }
    auto t = detail::trim(line);
    if (t.rfind("# binding", 0) == 0) {
      std::istringstream bs(t.substr(9));
      std::string kv;
      while (bs >> kv) {
        auto eq = kv.find('=');
        if (eq == std::string::npos || eq == 0)
          throw LsqError("bad binding '" + kv + "'");
        w.binding.emplace_back(kv.substr(0, eq), kv.substr(eq + 1));
      }
      continue;
    }
    if (t.empty() || t[0] == '#') continue;
    std::istringstream ls(t);
    std::string head;
    ls >> head;
    if (head == "goal") {
      ls >> w.goal;
    } else if (head == "program") {
      std::string a;
      while (ls >> a) {
        if (a.size() != 1 || a[0] < 'A' || a[0] >= 'A' + kAddrs)
          throw LsqError("bad address '" + a + "' in program line");
        w.program.push_back(a[0] - 'A');
      }
      have_program = true;
    } else if (head == "cache") {
      std::string bits;
      ls >> bits;
      if (bits.size() != static_cast<std::size_t>(kAddrs))
        throw LsqError("cache line needs " + std::to_string(kAddrs) + " bits");
      for (int a = 0; a < kAddrs; ++a) {
        if (bits[static_cast<std::size_t>(a)] != '0' &&
            bits[static_cast<std::size_t>(a)] != '1')
          throw LsqError("bad cache bits '" + bits + "'");
        if (bits[static_cast<std::size_t>(a)] == '1') w.cache |= 1u << a;
      }
    } else if (head == "goals") {
      in_goals = true;
    } else {
      std::string rest;
      std::getline(ls, rest);
      detail::parse_int(head, "step number");
      w.actions.push_back(parse_action(detail::trim(rest)));
    }
  }
  if (!have_program) throw LsqError("witness has no program line");
  return w;
}

enum class Reach { kUnreachable, kReachable, kInconclusive };

inline const char* to_string(Reach r) {
  switch (r) {
    case Reach::kUnreachable:
      return "unreachable";
    case Reach::kReachable:
      return "reachable";
    case Reach::kInconclusive:
      return "inconclusive";
  }
  return "?";
}

struct ReachResult {
  Reach status = Reach::kUnreachable;
  std::optional<Witness> witness;
  std::size_t states = 0;  // distinct (state, binding, stage) nodes
  int depth = 0;           // BFS levels explored
};

namespace detail {

// All loads programs of 2..max_loads loads (a single load cannot reorder)
// in lexicographic order, each with every cache-valid pattern.
inline std::vector<std::pair<std::vector<int>, unsigned>> initial_programs(
    const Bounds& b) {
  std::vector<std::pair<std::vector<int>, unsigned>> out;
  for (int len = std::min(2, b.max_loads); len <= b.max_loads; ++len)
    for (int code = 0; code < (1 << len); ++code) {
      std::vector<int> prog;
      for (int k = len - 1; k >= 0; --k) prog.push_back((code >> k) & 1);
      for (unsigned cache = 0; cache < (1u << kAddrs); ++cache)
        out.emplace_back(prog, cache);
    }
  return out;
}

struct SearchNode {
  std::uint64_t state;
  std::uint32_t root;     // index into the initial list
  std::uint16_t binding;  // index into that program's bindings
  std::uint8_t stage;

  // The state key already encodes the program, and runs from different
  // cache patterns that meet are interchangeable, so the root is carried
  // only to rebuild witnesses.
  std::uint64_t key() const {
    return (state << 20) | (static_cast<std::uint64_t>(binding) << 4) | stage;
  }
};

}  // namespace detail

// Shortest run reaching the last stage of `goal_id`, over every loads
// program within bounds and every variable binding.
inline ReachResult reachable(const LsqConfig& cfg,
                             const std::vector<ReachabilityGoal>& goals,
                             const std::string& goal_id, unsigned jobs = 1) {
  validate(cfg);
  const GoalChain gc = compile_goal(goals, goal_id);
  const auto inits = detail::initial_programs(cfg.bounds);
  std::vector<std::vector<Binding>> binds(inits.size());
  for (std::size_t r = 0; r < inits.size(); ++r)
    binds[r] = bindings(gc, static_cast<int>(inits[r].first.size()));

  struct Parent {
    std::uint64_t from;
    Action action;
    bool is_root;
    std::uint32_t root;
  };
  std::unordered_map<std::uint64_t, Parent> seen;
  std::vector<detail::SearchNode> frontier;
  ReachResult res;

  auto finish = [&](const detail::SearchNode& hit) {
    Witness w;
    w.goal = goal_id;
    std::vector<Action> rev;
    std::uint64_t k = hit.key();
    std::uint32_t root = 0;
    while (true) {
      const Parent& p = seen.at(k);
      if (p.is_root) {
        root = p.root;
        break;
      }
      rev.push_back(p.action);
      k = p.from;
    }
    w.actions.assign(rev.rbegin(), rev.rend());
    w.program = inits[root].first;
    w.cache = inits[root].second;
    const Binding& b = binds[root][hit.binding];
    for (std::size_t q = 0; q < gc.index_vars.size(); ++q)
      w.binding.emplace_back(gc.index_vars[q], std::to_string(b[q]));
    for (std::size_t q = 0; q < gc.addr_vars.size(); ++q)
      w.binding.emplace_back(gc.addr_vars[q],
                             std::string(1, addr_name(b[gc.index_vars.size() + q])));
    res.status = Reach::kReachable;
    res.witness = std::move(w);
    res.states = seen.size();
  };

  const std::size_t n_stages = gc.stages.size();
  for (std::size_t r = 0; r < inits.size(); ++r) {
    const LsqState s = initial_state(inits[r].first, inits[r].second);
    for (std::size_t bi = 0; bi < binds[r].size(); ++bi) {
      detail::SearchNode nd{s.key(), static_cast<std::uint32_t>(r),
                            static_cast<std::uint16_t>(bi), 0};
      nd.stage = static_cast<std::uint8_t>(advance(gc, 0, s, binds[r][bi]));
      if (!seen.emplace(nd.key(), Parent{0, {}, true, nd.root}).second) continue;
      if (nd.stage == n_stages) {
        finish(nd);
        return res;
      }
      frontier.push_back(nd);
    }
  }

  for (int depth = 0;; ++depth) {
    res.depth = depth;
    if (frontier.empty()) {
      res.status = Reach::kUnreachable;
      res.states = seen.size();
      return res;
    }
    std::vector<std::vector<std::pair<detail::SearchNode, Action>>> succ(
        frontier.size());
    parallel_for(frontier.size(), jobs, [&](std::size_t f) {
      const auto& nd = frontier[f];
      const LsqState s = LsqState::from_key(nd.state);
      const Binding& b = binds[nd.root][nd.binding];
      for (const Action& a : enabled_actions(cfg, s)) {
        const LsqState t = step(cfg, s, a);
        detail::SearchNode m{t.key(), nd.root, nd.binding, nd.stage};
        m.stage = static_cast<std::uint8_t>(advance(gc, nd.stage, t, b));
        succ[f].emplace_back(m, a);
      }
    });
    if (depth >= cfg.bounds.max_steps) {
      for (std::size_t f = 0; f < frontier.size(); ++f)
        for (const auto& [m, a] : succ[f])
          if (!seen.count(m.key())) {
            res.status = Reach::kInconclusive;
            res.states = seen.size();
            return res;
          }
      res.status = Reach::kUnreachable;
      res.states = seen.size();
      return res;
    }
    std::vector<detail::SearchNode> next;
    for (std::size_t f = 0; f < frontier.size(); ++f)
      for (const auto& [m, a] : succ[f]) {
        if (!seen.emplace(m.key(), Parent{frontier[f].key(), a, false, 0}).second)
          continue;
        if (m.stage == n_stages) {
          res.depth = depth + 1;
          finish(m);
          return res;
        }
        next.push_back(m);
      }
    frontier = std::move(next);
  }
}

struct ReplayResult {
  bool ok = false;
  std::string error;  // first disabled action, or unmet goal
  std::vector<LsqState> states;
  std::vector<int> delivered;  // addresses in delivery order
  std::vector<int> applied;    // addresses in application order
};

// Replays a witness through step() and checks that the goal's stages are
// met in order along the run for some binding.
inline ReplayResult replay(const LsqConfig& cfg, const Witness& w,
                           const std::vector<ReachabilityGoal>& goals) {
  ReplayResult r;
  LsqState s = initial_state(w.program, w.cache);
  r.states.push_back(s);
  for (std::size_t k = 0; k < w.actions.size(); ++k) {
    const Action& a = w.actions[k];
    if (!enabled(cfg, s, a)) {
      r.error = "step " + std::to_string(k + 1) + " '" + a.str() + "' is disabled";
      return r;
    }
    if (a.kind == ActionKind::kDeliver) r.delivered.push_back(a.arg);
    if (a.kind == ActionKind::kBusOp) r.applied.push_back(s.fifo[0]);
    s = step(cfg, s, a);
    r.states.push_back(s);
  }
  if (w.goal.empty()) {
    r.ok = true;
    return r;
  }
  const GoalChain gc = compile_goal(goals, w.goal);
  for (const Binding& b : bindings(gc, s.n)) {
    std::size_t stage = 0;
    for (const auto& st : r.states) stage = advance(gc, stage, st, b);
    if (stage == gc.stages.size()) {
      r.ok = true;
      return r;
    }
  }
  r.error = "run does not reach " + w.goal;
  return r;
}

struct GoalStatus {
  std::string id;
  bool violation = false;
  ReachResult result;
};

struct EvaluationReport {
  std::vector<GoalStatus> goals;
  // kUnreachable: every violation goal unreachable (compliant).
  Reach verdict = Reach::kUnreachable;

  bool compliant() const { return verdict == Reach::kUnreachable; }
};

inline EvaluationReport evaluate(const LsqConfig& cfg,
                                 const std::vector<ReachabilityGoal>& goals,
                                 unsigned jobs = 1) {
  EvaluationReport rep;
  bool any_reach = false, any_inconclusive = false;
  for (const auto& g : goals) {
    GoalStatus st{g.id, g.violation, reachable(cfg, goals, g.id, jobs)};
    if (g.violation) {
      any_reach = any_reach || st.result.status == Reach::kReachable;
      any_inconclusive =
          any_inconclusive || st.result.status == Reach::kInconclusive;
    }
    rep.goals.push_back(std::move(st));
  }
  rep.verdict = any_reach          ? Reach::kReachable
                : any_inconclusive ? Reach::kInconclusive
                                   : Reach::kUnreachable;
  return rep;
}

}  // namespace ordercheck

#endif  // ORDERCHECK_MICROCHECK_HPP_
