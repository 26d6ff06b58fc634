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

#ifndef ORDERCHECK_TESTS_FIXTURES_HPP_
#define ORDERCHECK_TESTS_FIXTURES_HPP_

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ordercheck/builtin_models.hpp"
#include "ordercheck/explorer.hpp"
#include "ordercheck/restorer.hpp"

namespace ordercheck::testing {

inline std::string source_path(const std::string& rel) {
  return std::string(ORDERCHECK_SOURCE_DIR) + "/" + rel;
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Classified {
  Forest forest;
  std::vector<LeafVerdict> verdicts;
};

// Forests are deterministic, so each builtin is built once per process.
inline const Classified& builtin_forest(const std::string& name) {
  static std::map<std::string, Classified> cache;
  auto it = cache.find(name);
  if (it == cache.end()) {
    Classified c;
    c.forest = generate_forest(load_builtin(name));
    c.verdicts = classify_forest(c.forest);
    it = cache.emplace(name, std::move(c)).first;
  }
  return it->second;
}

inline const ExplorationTree& tree_named(const Forest& f,
                                         const std::string& name) {
  for (const auto& t : f.trees)
    if (t.name() == name) return t;
  throw std::runtime_error("no tree " + name);
}

}  // namespace ordercheck::testing

#endif  // ORDERCHECK_TESTS_FIXTURES_HPP_
