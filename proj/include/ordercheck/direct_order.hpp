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

#ifndef ORDERCHECK_DIRECT_ORDER_HPP_
#define ORDERCHECK_DIRECT_ORDER_HPP_

#include <algorithm>
#include <cstddef>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ordercheck/mcm_spec.hpp"

namespace ordercheck {

class CycleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SketchInstr {
  std::string kind;
  std::string addr;                      // empty for fences
  std::vector<std::string> annotations;  // "aq", "rl"
  FenceGuard bits;                       // fences only

  std::string str() const {
    std::string s = kind;
    if (!addr.empty()) s += " " + addr;
    if (!bits.pred.empty()) s += " " + bits.pred + "," + bits.succ;
    for (const auto& a : annotations) s += " " + a;
    return s;
  }
};

using ProgramSketch = std::vector<SketchInstr>;

struct OrderDag {
  int n = 0;
  std::set<std::pair<int, int>> edges;
  bool operator==(const OrderDag&) const = default;
};

// One instruction per line: `kind addr [annotation...]`, or for fences
// `fence <pred>,<succ>` with bits r, w or rw. '#' starts a comment.
inline ProgramSketch parse_sketch(const std::string& text) {
  ProgramSketch prog;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto toks = detail::tokenize(line);
    if (toks.empty()) continue;
    SketchInstr ins;
    ins.kind = toks[0].text;
    if (ins.kind == "fence") {
      if (toks.size() != 2)
        throw SpecError("expected 'fence <pred>,<succ>'", lineno, toks[0].col);
      auto bits = detail::split(toks[1].text, ',');
      if (bits.size() != 2 || !detail::valid_bits(bits[0]) ||
          !detail::valid_bits(bits[1]))
        throw SpecError("malformed fence bits '" + toks[1].text + "'", lineno,
                        toks[1].col);
      ins.bits = {bits[0], bits[1]};
    } else {
      if (toks.size() < 2)
        throw SpecError("expected 'kind addr [annotations]'", lineno,
                        toks[0].col);
      ins.addr = toks[1].text;
      for (std::size_t k = 2; k < toks.size(); ++k)
        for (const auto& a : detail::split(toks[k].text, ','))
          if (!a.empty()) ins.annotations.push_back(a);
    }
    prog.push_back(std::move(ins));
  }
  if (prog.empty()) throw SpecError("empty program sketch");
  return prog;
}

namespace detail {

inline bool bits_meet(const std::string& a, const std::string& b) {
  for (char c : a)
    if (b.find(c) != std::string::npos) return true;
  return false;
}

inline bool kind_matches(const McmSpec& spec, const SketchInstr& ins,
                         const KindRef& ref) {
  const InstrKind& k = spec.kind(ins.kind);
  bool base = ins.kind == ref.kind || (!k.alias.empty() && k.alias == ref.kind);
  if (!base) return false;
  if (ref.annotation.empty()) return true;
  return std::find(ins.annotations.begin(), ins.annotations.end(),
                   ref.annotation) != ins.annotations.end();
}

}  // namespace detail

// Edge (i, j) when some required rule orders instruction i before j,
// honouring address relation, annotations and fence guards.
inline OrderDag induced_order(const McmSpec& spec, const ProgramSketch& prog) {
  OrderDag dag;
  dag.n = static_cast<int>(prog.size());
  for (const auto& ins : prog) {
    const InstrKind& k = spec.kind(ins.kind);  // throws on unknown kinds
    for (const auto& a : ins.annotations)
      if (std::find(k.annotations.begin(), k.annotations.end(), a) ==
          k.annotations.end())
        throw SpecError("annotation '" + a + "' is not legal on kind '" +
                        ins.kind + "'");
  }
  for (std::size_t i = 0; i < prog.size(); ++i) {
    if (spec.kind(prog[i].kind).fence) continue;
    for (std::size_t j = i + 1; j < prog.size(); ++j) {
      if (spec.kind(prog[j].kind).fence) continue;
      const bool same = prog[i].addr == prog[j].addr;
      for (const auto& r : spec.rules) {
        if (!r.required) continue;
        if (r.addr == AddrRel::kSame && !same) continue;
        if (r.addr == AddrRel::kDifferent && same) continue;
        if (!detail::kind_matches(spec, prog[i], r.first) ||
            !detail::kind_matches(spec, prog[j], r.second))
          continue;
        if (r.fence) {
          bool guarded = false;
          for (std::size_t f = i + 1; f < j && !guarded; ++f)
            guarded = spec.kind(prog[f].kind).fence &&
                      detail::bits_meet(prog[f].bits.pred, r.fence->pred) &&
                      detail::bits_meet(prog[f].bits.succ, r.fence->succ);
          if (!guarded) continue;
        }
        dag.edges.emplace(static_cast<int>(i), static_cast<int>(j));
        break;
      }
    }
  }
  return dag;
}

// reach[u][v]: a non-empty path u -> v exists.
inline std::vector<std::vector<bool>> reachability(const OrderDag& dag) {
  const auto n = static_cast<std::size_t>(dag.n);
  std::vector<std::vector<bool>> reach(n, std::vector<bool>(n, false));
  for (const auto& [u, v] : dag.edges) {
    if (u < 0 || v < 0 || u >= dag.n || v >= dag.n)
      throw CycleError("edge (" + std::to_string(u) + "," + std::to_string(v) +
                       ") outside the node range");
    reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(v)] = true;
  }
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      if (reach[i][k])
        for (std::size_t j = 0; j < n; ++j)
          if (reach[k][j]) reach[i][j] = true;
  return reach;
}

inline OrderDag transitive_closure(const OrderDag& dag) {
  auto reach = reachability(dag);
  OrderDag out;
  out.n = dag.n;
  for (int i = 0; i < dag.n; ++i)
    for (int j = 0; j < dag.n; ++j)
      if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)])
        out.edges.emplace(i, j);
  return out;
}

// Unique for DAGs; cyclic input is rejected.
inline OrderDag transitive_reduction(const OrderDag& dag) {
  auto reach = reachability(dag);
  for (int i = 0; i < dag.n; ++i)
    if (reach[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)])
      throw CycleError("order graph has a cycle through node " +
                       std::to_string(i));
  OrderDag out;
  out.n = dag.n;
  for (const auto& [u, v] : dag.edges) {
    bool implied = false;
    for (int w = 0; w < dag.n && !implied; ++w)
      implied = reach[static_cast<std::size_t>(u)][static_cast<std::size_t>(w)] &&
                reach[static_cast<std::size_t>(w)][static_cast<std::size_t>(v)];
    if (!implied) out.edges.emplace(u, v);
  }
  return out;
}

inline std::vector<std::pair<int, int>> directly_ordered_pairs(
    const McmSpec& spec, const ProgramSketch& prog) {
  auto red = transitive_reduction(induced_order(spec, prog));
  return {red.edges.begin(), red.edges.end()};
}

inline std::string order_dot(const ProgramSketch& prog, const OrderDag& dag) {
  std::ostringstream o;
  o << "digraph order {\n  rankdir=LR;\n";
  for (std::size_t i = 0; i < prog.size(); ++i)
    o << "  i" << i << " [label=\"" << i << ": " << prog[i].str() << "\"];\n";
  for (const auto& [u, v] : dag.edges) o << "  i" << u << " -> i" << v << ";\n";
  o << "}\n";
  return o.str();
}

}  // namespace ordercheck

#endif  // ORDERCHECK_DIRECT_ORDER_HPP_
