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

#ifndef ORDERCHECK_TRACE_MODEL_HPP_
#define ORDERCHECK_TRACE_MODEL_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ordercheck/mcm_spec.hpp"

namespace ordercheck {

class TraceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// kSecond is the program-later instruction, which executes first in an
// inverted trace; kFirst is the program-earlier one.
enum class Role { kSecond, kFirst, kEvent };
enum class Label { kExec, kMem };
enum class HitMiss { kNone, kHit, kMiss };

inline const char* label_str(Label l) { return l == Label::kExec ? "<e" : "<m"; }

// Default instruction table used when a trace is parsed without a spec.
// Annotated kinds ("amo.aq") use the base kind.
inline std::string base_kind(const std::string& kind) {
  return kind.substr(0, kind.find('.'));
}

inline bool default_read_only(const std::string& kind) {
  std::string b = base_kind(kind);
  return b == "ld" || b == "lr";
}

struct TraceItem {
  int id = 0;
  Role role = Role::kEvent;
  std::string kind;
  char addr = 'A';
  HitMiss hit_miss = HitMiss::kNone;
  // Read-only instruction; events derive this from their kind.
  bool read_only = false;

  bool instr() const { return role != Role::kEvent; }
  bool reads() const { return instr() ? read_only : events::reads(kind); }
  std::string str() const { return kind + " " + std::string(1, addr); }
};

inline TraceItem instr_item(int id, Role role, std::string kind, char addr,
                            bool read_only) {
  return {id, role, std::move(kind), addr, HitMiss::kNone, read_only};
}

inline TraceItem event_item(int id, std::string kind, char addr) {
  return {id, Role::kEvent, std::move(kind), addr, HitMiss::kNone, false};
}

// Same-address items whose order is fixed in the global memory order. The
// instruction pair itself is what gets checked, so it is never
// pre-serialized; two reads never conflict.
inline bool serialized(const TraceItem& p, const TraceItem& q) {
  if (p.addr != q.addr) return false;
  if (p.instr() && q.instr()) return false;
  return !(p.reads() && q.reads());
}

class Trace {
 public:
  Trace() = default;

  const std::vector<TraceItem>& items() const { return items_; }
  const std::vector<Label>& labels() const { return labels_; }
  std::size_t size() const { return items_.size(); }

  // m_order over item ids (not positions).
  bool m_before(int id_a, int id_b) const {
    if (id_a < 0 || id_b < 0 || static_cast<std::size_t>(id_a) >= n_ids_ ||
        static_cast<std::size_t>(id_b) >= n_ids_)
      return false;
    return order_[static_cast<std::size_t>(id_a) * n_ids_ +
                  static_cast<std::size_t>(id_b)] != 0;
  }

  std::size_t position_of(int id) const {
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (items_[i].id == id) return i;
    throw TraceError("no item with id " + std::to_string(id));
  }

  std::size_t pos_second() const { return pos_role(Role::kSecond); }
  std::size_t pos_first() const { return pos_role(Role::kFirst); }
  const TraceItem& second() const { return items_[pos_second()]; }
  const TraceItem& first() const { return items_[pos_first()]; }

  // Pairs (id, id) in m_order, sorted.
  std::vector<std::pair<int, int>> m_edges() const {
    std::vector<std::pair<int, int>> out;
    for (std::size_t a = 0; a < n_ids_; ++a)
      for (std::size_t b = 0; b < n_ids_; ++b)
        if (order_[a * n_ids_ + b])
          out.emplace_back(static_cast<int>(a), static_cast<int>(b));
    return out;
  }

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < items_.size(); ++i) {
      if (i) s += std::string(" ") + label_str(labels_[i - 1]) + " ";
      s += items_[i].str();
    }
    return s;
  }

  // Same order, new sequence; adjacency labels re-derived from m_order.
  Trace reordered(const std::vector<int>& ids) const {
    Trace t = *this;
    t.items_.clear();
    for (int id : ids) t.items_.push_back(items_[position_of(id)]);
    t.labels_.clear();
    for (std::size_t i = 1; i < t.items_.size(); ++i)
      t.labels_.push_back(t.m_before(t.items_[i - 1].id, t.items_[i].id)
                              ? Label::kMem
                              : Label::kExec);
    return t;
  }

  std::vector<int> ids() const {
    std::vector<int> v;
    for (const auto& it : items_) v.push_back(it.id);
    return v;
  }

  friend Trace make_trace(std::vector<TraceItem> items,
                          std::vector<Label> labels);

 private:
  std::size_t pos_role(Role r) const {
    for (std::size_t i = 0; i < items_.size(); ++i)
      if (items_[i].role == r) return i;
    throw TraceError("trace has no instruction with the requested role");
  }

  std::vector<TraceItem> items_;
  std::vector<Label> labels_;
  std::size_t n_ids_ = 0;
  std::vector<std::uint8_t> order_;
};

inline Trace make_trace(std::vector<TraceItem> items,
                        std::vector<Label> labels) {
  const std::size_t n = items.size();
  if (n == 0) throw TraceError("empty trace");
  if (labels.size() + 1 != n)
    throw TraceError("expected " + std::to_string(n - 1) + " labels, got " +
                     std::to_string(labels.size()));
  int n_second = 0, n_first = 0;
  int max_id = -1;
  for (const auto& it : items) max_id = std::max(max_id, it.id);
  std::vector<bool> seen(static_cast<std::size_t>(max_id + 1), false);
  for (const auto& it : items) {
    if (it.id < 0 || seen[static_cast<std::size_t>(it.id)])
      throw TraceError("item ids must be distinct and non-negative");
    seen[static_cast<std::size_t>(it.id)] = true;
    if (it.role == Role::kSecond) ++n_second;
    if (it.role == Role::kFirst) ++n_first;
    if (!it.instr() && !events::known(it.kind))
      throw TraceError("unknown event kind '" + it.kind + "'");
  }
  if (n_second != 1 || n_first != 1)
    throw TraceError("trace needs exactly one instruction of each role");

  for (std::size_t i = 0; i + 1 < n; ++i)
    if (labels[i] == Label::kExec && serialized(items[i], items[i + 1]))
      throw TraceError("same-address adjacency '" + items[i].str() + " <e " +
                       items[i + 1].str() + "' must be <m");

  Trace t;
  const std::size_t w = static_cast<std::size_t>(max_id + 1);
  t.n_ids_ = w;
  t.order_.assign(w * w, 0);
  auto set = [&](std::size_t a, std::size_t b) {
    t.order_[static_cast<std::size_t>(items[a].id) * w +
             static_cast<std::size_t>(items[b].id)] = 1;
  };
  for (std::size_t i = 0; i + 1 < n; ++i)
    if (labels[i] == Label::kMem) set(i, i + 1);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (serialized(items[i], items[j])) set(i, j);
  // Closure; edges point forward in the sequence, so one pass from the back
  // suffices.
  for (std::size_t ii = n; ii-- > 0;) {
    auto a = static_cast<std::size_t>(items[ii].id);
    for (std::size_t jj = ii + 1; jj < n; ++jj) {
      auto b = static_cast<std::size_t>(items[jj].id);
      if (!t.order_[a * w + b]) continue;
      for (std::size_t c = 0; c < w; ++c)
        if (t.order_[b * w + c]) t.order_[a * w + c] = 1;
    }
  }
  t.items_ = std::move(items);
  t.labels_ = std::move(labels);
  return t;
}

// Parses the canonical rendering. Tokens that are not event kinds are
// instructions: the first one is program-later (it executed first).
inline Trace parse_trace(const std::string& text) {
  std::istringstream in(text);
  std::vector<std::string> toks;
  std::string tok;
  while (in >> tok) toks.push_back(tok);
  if (toks.size() < 2 || (toks.size() + 1) % 3 != 0)
    throw TraceError("malformed trace '" + text + "'");
  std::vector<TraceItem> items;
  std::vector<Label> labels;
  int instrs = 0;
  for (std::size_t i = 0; i < toks.size(); i += 3) {
    if (i > 0) {
      const auto& l = toks[i - 1];
      if (l == "<e")
        labels.push_back(Label::kExec);
      else if (l == "<m")
        labels.push_back(Label::kMem);
      else
        throw TraceError("expected <e or <m, got '" + l + "'");
    }
    const int id = static_cast<int>(items.size());
    const std::string& kind = toks[i];
    if (toks[i + 1].size() != 1)
      throw TraceError("address must be one letter: '" + toks[i + 1] + "'");
    const char addr = toks[i + 1][0];
    if (events::known(kind)) {
      items.push_back(event_item(id, kind, addr));
    } else {
      items.push_back(instr_item(id, instrs == 0 ? Role::kSecond : Role::kFirst,
                                 kind, addr, default_read_only(kind)));
      ++instrs;
    }
  }
  if (instrs != 2) throw TraceError("trace needs exactly two instructions");
  return make_trace(std::move(items), std::move(labels));
}

// A maximal contiguous run of positions [begin, end].
struct Chain {
  std::size_t begin = 0;
  std::size_t end = 0;

  bool contains(std::size_t pos) const { return pos >= begin && pos <= end; }
  std::size_t size() const { return end - begin + 1; }
  bool operator==(const Chain&) const = default;
};

// Chain forward from the second instruction: each next item joins when some
// run member is m_order-before it.
inline Chain chain_from_second(const Trace& t) {
  const auto& it = t.items();
  std::size_t b = t.pos_second();
  std::size_t e = b;
  while (e + 1 < it.size()) {
    bool linked = false;
    for (std::size_t k = b; k <= e && !linked; ++k)
      linked = t.m_before(it[k].id, it[e + 1].id);
    if (!linked) break;
    ++e;
  }
  return {b, e};
}

// Chain backward into the first instruction.
inline Chain chain_into_first(const Trace& t) {
  const auto& it = t.items();
  std::size_t e = t.pos_first();
  std::size_t b = e;
  while (b > 0) {
    bool linked = false;
    for (std::size_t k = b; k <= e && !linked; ++k)
      linked = t.m_before(it[b - 1].id, it[k].id);
    if (!linked) break;
    --b;
  }
  return {b, e};
}

inline std::pair<Chain, Chain> chains(const Trace& t) {
  return {chain_from_second(t), chain_into_first(t)};
}

}  // namespace ordercheck

#endif  // ORDERCHECK_TRACE_MODEL_HPP_
