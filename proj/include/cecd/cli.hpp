// Copyright 2026 The cecd Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CECD_CLI_HPP
#define CECD_CLI_HPP

#include <iosfwd>
#include <string>
#include <vector>

namespace cecd {

// Exit codes: 0 success, 2 parse/validation/usage failure, 3 no feasible
// design, 4 enumeration cap exceeded.
int run_cli(const std::vector<std::string>& args, std::ostream& out,
            std::ostream& err);

}  // namespace cecd

#endif  // CECD_CLI_HPP
