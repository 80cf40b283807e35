// Copyright 2026 The DMMD Authors. All Rights Reserved.
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

#ifndef DMMD_TOOLS_COMMANDS_HPP_
#define DMMD_TOOLS_COMMANDS_HPP_

#include <ostream>

namespace dmmd::cli {

enum ExitCode : int {
  kExitOk = 0,
  kExitFailure = 1,
  kExitUsage = 2,
  kExitInput = 3,
  kExitDegenerate = 4,
};

// Entry point of the `dmmd` tool: subcommands decompose, ranks, simulate.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace dmmd::cli

#endif  // DMMD_TOOLS_COMMANDS_HPP_
