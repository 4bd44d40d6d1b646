// Copyright 2026 The meanfield Authors
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

#ifndef MEANFIELD_CLI_RUN_HPP
#define MEANFIELD_CLI_RUN_HPP

#include <iosfwd>

namespace meanfield::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
  kOk = 0,
  kInvalidInput = 1,
  kInconclusive = 2,
  kNumericalFailure = 3,
};

/// Parses argv, runs the subcommand and returns its exit code. Normal output
/// goes to `out`, diagnostics to `err`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace meanfield::cli

#endif  // MEANFIELD_CLI_RUN_HPP
