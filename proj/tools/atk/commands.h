// Copyright 2026 The ATK Authors
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

#ifndef ATK_TOOLS_COMMANDS_H_
#define ATK_TOOLS_COMMANDS_H_

// Subcommand driver behind the `atk` binary. Kept in a library so tests can
// run commands in-process.

#include <ostream>
#include <string>
#include <vector>

namespace atk::cli {

enum ExitCode : int {
  kOk = 0,
  kInternalError = 1,
  kInputError = 2,
  kEmptyData = 3,
};

// args excludes the program name. Returns the process exit code.
int RunCli(const std::vector<std::string>& args, std::ostream& out,
           std::ostream& err);

}  // namespace atk::cli

#endif  // ATK_TOOLS_COMMANDS_H_
