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

#ifndef ORDERCHECK_RESTORER_HPP_
#define ORDERCHECK_RESTORER_HPP_

#include <algorithm>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordercheck/explorer.hpp"
#include "ordercheck/parallel.hpp"
#include "ordercheck/trace_model.hpp"

namespace ordercheck {

class RestoreError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Status { kValid, kViolation };

inline const char* to_string(Status s) {
  return s == Status::kValid ? "valid" : "violation";
}

struct Verdict {
  Status status = Status::kValid;
  std::vector<int> restored;         // item ids, valid only
  std::vector<int> blocking;         // ids from B to A when the runs meet
  std::vector<std::string> steps;    // applied rewrites

  bool valid() const { return status == Status::kValid; }
};

struct RestoreOptions {
  // Try moving the older instruction's run backward before the younger
  // one's run forward.
  bool first_priority = false;
};

namespace detail {

inline std::string render_ids(const Trace& t, const std::vector<int>& ids,
                              std::size_t b, std::size_t e) {
  std::string s = "[";
  for (std::size_t k = b; k <= e; ++k) {
    if (k > b) s += ", ";
    s += t.items()[t.position_of(ids[k])].str();
  }
  return s + "]";
}

inline void check_order(const Trace& t, const std::vector<int>& seq) {
  auto at = [&](int id) {
    return static_cast<std::size_t>(std::find(seq.begin(), seq.end(), id) -
                                    seq.begin());
  };
  for (const auto& [x, y] : t.m_edges())
    if (at(x) > at(y))
      throw RestoreError("rewrite broke memory order in '" + t.str() + "'");
}

}  // namespace detail

// Moves the younger instruction's memory-order run forward, or the older
// one's backward, across execution-order edges until the older instruction
// comes first. The runs meeting means no rewrite can separate them.
inline Verdict restore(const Trace& trace, const RestoreOptions& opts = {}) {
  Verdict v;
  std::vector<int> seq = trace.ids();
  const int b_id = trace.second().id;
  const int a_id = trace.first().id;
  const std::size_t n = seq.size();
  const std::size_t bound = n * n;
  auto pos = [&](int id) {
    return static_cast<std::size_t>(std::find(seq.begin(), seq.end(), id) -
                                    seq.begin());
  };
  auto linked = [&](std::size_t from, std::size_t to) {
    return trace.m_before(seq[from], seq[to]);
  };

  // Loop while the younger instruction still precedes the older one.
  while (pos(b_id) < pos(a_id)) {
    if (v.steps.size() >= bound)
      throw RestoreError("no progress after " + std::to_string(bound) +
                         " rewrites on '" + trace.str() + "'");
    const std::size_t pb = pos(b_id);
    const std::size_t pa = pos(a_id);

    std::size_t b_end = pb;
    while (b_end + 1 < n) {
      bool l = false;
      for (std::size_t k = pb; k <= b_end && !l; ++k) l = linked(k, b_end + 1);
      if (!l) break;
      ++b_end;
    }
    std::size_t a_begin = pa;
    while (a_begin > 0) {
      bool l = false;
      for (std::size_t k = a_begin; k <= pa && !l; ++k)
        l = linked(a_begin - 1, k);
      if (!l) break;
      --a_begin;
    }

    if (b_end >= pa || a_begin <= pb) {
      v.status = Status::kViolation;
      v.blocking.assign(seq.begin() + static_cast<std::ptrdiff_t>(pb),
                        seq.begin() + static_cast<std::ptrdiff_t>(pa) + 1);
      return v;
    }

    const bool can_b = b_end + 1 < n;
    const bool can_a = a_begin > 0;
    const bool move_b = opts.first_priority ? (can_b && !can_a) : can_b;
    if (move_b) {
      v.steps.push_back("move " + detail::render_ids(trace, seq, pb, b_end) +
                        " past " + trace.items()[trace.position_of(seq[b_end + 1])].str());
      std::rotate(seq.begin() + static_cast<std::ptrdiff_t>(pb),
                  seq.begin() + static_cast<std::ptrdiff_t>(b_end) + 1,
                  seq.begin() + static_cast<std::ptrdiff_t>(b_end) + 2);
    } else if (can_a) {
      v.steps.push_back("move " + detail::render_ids(trace, seq, a_begin, pa) +
                        " before " + trace.items()[trace.position_of(seq[a_begin - 1])].str());
      std::rotate(seq.begin() + static_cast<std::ptrdiff_t>(a_begin) - 1,
                  seq.begin() + static_cast<std::ptrdiff_t>(a_begin),
                  seq.begin() + static_cast<std::ptrdiff_t>(pa) + 1);
    } else {
      throw RestoreError("stuck restoring '" + trace.str() + "'");
    }
    detail::check_order(trace, seq);
  }
  v.status = Status::kValid;
  v.restored = seq;
  return v;
}

// Exhaustive reference: valid iff some permutation respects every memory
// order edge and puts the older instruction first.
inline Verdict oracle_restore(const Trace& trace) {
  if (trace.size() > 8)
    throw RestoreError("oracle limited to 8 items, trace has " +
                       std::to_string(trace.size()));
  std::vector<int> perm = trace.ids();
  std::sort(perm.begin(), perm.end());
  const auto edges = trace.m_edges();
  const int b_id = trace.second().id;
  const int a_id = trace.first().id;
  do {
    auto at = [&](int id) { return std::find(perm.begin(), perm.end(), id); };
    if (at(a_id) > at(b_id)) continue;
    bool ok = true;
    for (const auto& [x, y] : edges)
      if (at(x) > at(y)) {
        ok = false;
        break;
      }
    if (ok) {
      Verdict v;
      v.status = Status::kValid;
      v.restored = perm;
      return v;
    }
  } while (std::next_permutation(perm.begin(), perm.end()));
  Verdict v;
  v.status = Status::kViolation;
  return v;
}

struct LeafVerdict {
  int tree = 0;
  int node = 0;
  Verdict verdict;
};

inline std::vector<LeafVerdict> classify_forest(const Forest& forest,
                                                unsigned jobs = 1,
                                                const RestoreOptions& opts = {}) {
  auto ls = leaves(forest);
  std::vector<LeafVerdict> out(ls.size());
  auto run = [&](std::size_t i) {
    out[i] = {ls[i].tree, ls[i].node, restore(*ls[i].trace, opts)};
  };
  parallel_for(ls.size(), jobs, run);
  return out;
}

// Verdicts of one tree, taken from a forest-wide classification.
inline std::vector<LeafVerdict> tree_verdicts(
    const std::vector<LeafVerdict>& all, int tree) {
  std::vector<LeafVerdict> out;
  for (const auto& lv : all)
    if (lv.tree == tree) out.push_back(lv);
  return out;
}

}  // namespace ordercheck

#endif  // ORDERCHECK_RESTORER_HPP_
