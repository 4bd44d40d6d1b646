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

#ifndef MEANFIELD_CLI_COMMANDS_HPP
#define MEANFIELD_CLI_COMMANDS_HPP

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cli/output.hpp"
#include "cli/settings.hpp"

namespace meanfield::cli {

using Handler = std::function<void(const Settings&, OutputDir&, std::ostream&)>;

struct Command {
  std::string name;
  std::string description;
  std::vector<OptionSpec> options;  ///< includes the shared out_dir/format/threads keys
  Handler handler;
};

/// Every subcommand except `replay`, which is wired in run().
const std::vector<Command>& commands();

const Command* find_command(const std::string& name);

}  // namespace meanfield::cli

#endif  // MEANFIELD_CLI_COMMANDS_HPP
