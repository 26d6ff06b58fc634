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

#ifndef ORDERCHECK_CLI_HPP_
#define ORDERCHECK_CLI_HPP_

#include <ostream>
#include <string>
#include <vector>

namespace ordercheck {

enum ExitCode : int {
  kExitCompliant = 0,
  kExitUsage = 1,
  kExitViolation = 2,
  kExitInconclusive = 3,
};

// Runs one `ordercheck` invocation; args excludes the program name.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace ordercheck

#endif  // ORDERCHECK_CLI_HPP_
