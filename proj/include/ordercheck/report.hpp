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

// JSON renderings of forests, verdicts, decision trees and verification
// results. Key order is fixed so that output is byte-stable.

#ifndef ORDERCHECK_REPORT_HPP_
#define ORDERCHECK_REPORT_HPP_

#include <string>
#include <vector>

#include "json.hpp"
#include "ordercheck/decision_tree.hpp"
#include "ordercheck/direct_order.hpp"
#include "ordercheck/explorer.hpp"
#include "ordercheck/pipeline.hpp"
#include "ordercheck/restorer.hpp"

namespace ordercheck {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

Json counts_json(const std::string& model, const ForestCounts& c,
                 bool all_observers);
Json forest_json(const Forest& forest);
Json verdicts_json(const Forest& forest, const std::vector<LeafVerdict>& vs);
Json dtree_json(const DecisionTree& dt);
Json order_json(const ProgramSketch& prog, const OrderDag& induced,
                const OrderDag& reduced);
Json verify_json(const VerifyReport& rep);

// Two-space indent plus a trailing newline.
std::string dump(const Json& j);

}  // namespace ordercheck

#endif  // ORDERCHECK_REPORT_HPP_
