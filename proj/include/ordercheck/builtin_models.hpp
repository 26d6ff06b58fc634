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

// Compiled-in copies of models/*.mcm. Keep in sync; a test compares them.

#ifndef ORDERCHECK_BUILTIN_MODELS_HPP_
#define ORDERCHECK_BUILTIN_MODELS_HPP_

#include <string>
#include <vector>

#include "ordercheck/mcm_spec.hpp"

namespace ordercheck {
namespace builtin {

inline constexpr const char* kSc = R"mcm(# Sequential consistency. Every load/store pair is ordered; synch behaves
# like a store. Per-rule observer lists select the trees that are built.
model SC
atomicity atomic
kinds
  ld read
  st write commit
  synch write commit alias=st
observers
  ld inv miss pf ev
  st xr miss
  synch xr miss
rules
  ld ld different required second=inv,miss,pf first=inv
  ld ld same required second=inv,miss,pf,ev first=inv,miss,ev
  ld st different required
  ld st same required
  st ld different required inorder
  st ld same required first=miss
  st st different required
  st st same required
)mcm";

inline constexpr const char* kTso = R"mcm(# Total store order. Store-to-load order is relaxed for different
# addresses; atomics keep every order.
model TSO
atomicity non-atomic-ordered
kinds
  ld read
  st write commit
  amo read write commit
observers
  ld inv miss pf ev
  st xr miss
  amo xr miss
rules
  ld ld different required second=inv,miss,pf first=inv
  ld ld same required second=inv,miss,pf,ev first=inv,miss,ev
  ld st different required
  ld st same required
  st ld different relaxed
  st ld same required first=miss
  st st different required
  st st same required
  amo ld different required inorder
  amo ld same required inorder
  amo st different required
  amo st same required
  amo amo different required
  amo amo same required
  ld amo different required
  ld amo same required
  st amo different required
  st amo same required
)mcm";

inline constexpr const char* kRvwmo = R"mcm(# RISC-V weak memory ordering. Plain pairs to different addresses are
# relaxed; fences (guards, never trace items) and acquire/release
# annotations restore order.
model RVWMO
atomicity atomic
kinds
  ld read
  st write commit
  amo read write commit ann=aq,rl
  lr read ann=aq,rl
  sc write commit ann=aq,rl
  fence fence
observers
  ld inv miss pf ev
  st xr miss
  amo xr miss
  lr inv miss pf ev
  sc xr miss
rules
  # same address: program order kept
  ld ld same required second=inv,miss,pf,ev first=inv,miss,ev
  ld st same required
  ld amo same required
  ld lr same required second=inv first=inv
  ld sc same required
  st ld same required second=inv first=xr
  st st same required
  st amo same required
  st lr same required second=inv first=xr
  st sc same required
  amo ld same required second=inv first=xr
  amo st same required
  amo amo same required
  amo lr same required second=inv first=xr
  amo sc same required
  lr ld same required second=inv first=inv
  lr st same required
  lr amo same required
  lr lr same required second=inv first=inv
  lr sc same required
  sc ld same required second=inv first=xr
  sc st same required
  sc amo same required
  sc lr same required second=inv first=xr
  sc sc same required
  # different address, no fence or annotation
  ld ld different relaxed
  ld st different relaxed
  ld amo different relaxed
  ld lr different relaxed
  ld sc different relaxed
  st ld different relaxed
  st st different relaxed
  st amo different relaxed
  st lr different relaxed
  st sc different relaxed
  amo ld different relaxed
  amo st different relaxed
  amo amo different relaxed
  amo lr different relaxed
  amo sc different relaxed
  lr ld different relaxed
  lr st different relaxed
  lr amo different relaxed
  lr lr different relaxed
  lr sc different relaxed
  sc ld different relaxed
  sc st different relaxed
  sc amo different relaxed
  sc lr different relaxed
  sc sc different relaxed
  # fence between the pair
  ld ld different required fence=r,r second=inv first=inv
  ld st different required fence=r,w
  st ld different required fence=w,r second=inv first=xr,miss
  st st different required fence=w,w
  amo ld different required fence=rw,r second=inv first=xr,miss
  amo st different required fence=rw,w
  lr ld different required fence=r,r second=inv first=inv
  lr st different required fence=r,w
  sc ld different required fence=w,r second=inv first=xr,miss
  sc st different required fence=w,w
  # acquire
  amo.aq ld same required second=inv first=xr
  amo.aq ld different required second=inv first=xr,miss
  amo.aq st same required
  amo.aq st different required
  amo.aq amo same required
  amo.aq amo different required
  amo.aq lr same required second=inv first=xr
  amo.aq lr different required second=inv first=xr,miss
  amo.aq sc same required
  amo.aq sc different required
  lr.aq ld same required second=inv first=inv
  lr.aq ld different required second=inv first=inv
  lr.aq st same required
  lr.aq st different required
  lr.aq amo same required
  lr.aq amo different required
  lr.aq lr same required second=inv first=inv
  lr.aq lr different required second=inv first=inv
  lr.aq sc same required
  lr.aq sc different required
  # release
  ld amo.rl different required
  ld sc.rl different required
  st amo.rl different required
  st sc.rl different required
  amo amo.rl different required
  amo sc.rl different required
  lr amo.rl different required
  lr sc.rl different required
  sc amo.rl different required
  sc sc.rl different required
  # release followed by acquire
  amo.rl amo.aq different required
  amo.rl lr.aq different required second=inv first=xr,miss
  sc.rl amo.aq different required
  sc.rl lr.aq different required second=inv first=xr,miss
)mcm";

inline const std::vector<std::string>& names() {
  static const std::vector<std::string> kNames = {"SC", "TSO", "RVWMO"};
  return kNames;
}

inline const char* text(const std::string& name) {
  if (name == "SC") return kSc;
  if (name == "TSO") return kTso;
  if (name == "RVWMO") return kRvwmo;
  return nullptr;
}

}  // namespace builtin

inline McmSpec load_builtin(const std::string& name) {
  const char* t = builtin::text(name);
  if (!t) throw SpecError("unknown model '" + name + "'");
  return parse_spec(t);
}

}  // namespace ordercheck

#endif  // ORDERCHECK_BUILTIN_MODELS_HPP_
