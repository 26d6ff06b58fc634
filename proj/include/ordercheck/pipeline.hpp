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

// End-to-end check of an LSQ configuration against a memory model: explore,
// restore, synthesize decision trees, emit goals, and search for them.

#ifndef ORDERCHECK_PIPELINE_HPP_
#define ORDERCHECK_PIPELINE_HPP_

#include <cstddef>
#include <string>
#include <vector>

#include "ordercheck/decision_tree.hpp"
#include "ordercheck/explorer.hpp"
#include "ordercheck/mcm_spec.hpp"
#include "ordercheck/microcheck.hpp"
#include "ordercheck/restorer.hpp"

namespace ordercheck {

// Design level: one entry per explored tree with violating leaves.
struct TreeFinding {
  int tree = 0;
  std::string name;
  std::size_t leaves = 0;
  std::size_t violations = 0;
  std::string key_predicate;
  bool modeled = false;
  std::string reason;  // why the LSQ model cannot check it
  int goal_set = -1;   // index into VerifyReport::goal_sets
};

// Implementation level: a distinct goal file and its search results.
struct GoalSet {
  std::vector<std::string> trees;
  std::vector<ReachabilityGoal> goals;
  std::string text;  // microcheck signal rendering
  EvaluationReport eval;
};

struct VerifyReport {
  std::string model;
  std::string config;
  std::vector<TreeFinding> design;
  std::vector<GoalSet> goal_sets;
  Reach verdict = Reach::kUnreachable;
};

// Empty when the tree's violations can be expressed over the LSQ model.
std::string unmodeled_reason(const McmSpec& spec, const ExplorationTree& tree);

VerifyReport verify(const McmSpec& spec, const Forest& forest,
                    const std::vector<LeafVerdict>& verdicts,
                    const LsqConfig& cfg, unsigned jobs = 1);

}  // namespace ordercheck

#endif  // ORDERCHECK_PIPELINE_HPP_
