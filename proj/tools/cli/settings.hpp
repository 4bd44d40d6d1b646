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

#ifndef MEANFIELD_CLI_SETTINGS_HPP
#define MEANFIELD_CLI_SETTINGS_HPP

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "meanfield/params.hpp"

namespace meanfield::cli {

/// A configurable key of one subcommand. `key` uses underscores; the
/// matching flag is `--` followed by the key with dashes.
struct OptionSpec {
  std::string key;
  std::string fallback;
  std::string help;
};

std::string flag_name(const std::string& key);

/// Resolved key/value configuration of one run, stored as text so that it
/// round-trips through config files and manifests unchanged.
class Settings {
 public:
  Settings() = default;
  explicit Settings(std::map<std::string, std::string> values) : values_(std::move(values)) {}

  void set(const std::string& key, std::string value) { values_[key] = std::move(value); }
  [[nodiscard]] bool has(const std::string& key) const { return values_.count(key) != 0; }
  [[nodiscard]] const std::map<std::string, std::string>& values() const { return values_; }

  [[nodiscard]] const std::string& text(const std::string& key) const;
  [[nodiscard]] double real(const std::string& key) const;
  [[nodiscard]] std::uint64_t unsigned_int(const std::string& key) const;
  [[nodiscard]] bool flag(const std::string& key) const;
  /// Comma-separated lists; an empty value is an empty list.
  [[nodiscard]] std::vector<double> reals(const std::string& key) const;
  [[nodiscard]] std::vector<std::size_t> counts(const std::string& key) const;

 private:
  std::map<std::string, std::string> values_;
};

/// Reads `key = value` lines. Blank lines and `#` comments are skipped and
/// values may be quoted, so simple TOML files are accepted.
std::map<std::string, std::string> read_config_file(const std::filesystem::path& path);

/// Layers defaults, then file values, then explicit flags. Unknown file keys
/// are rejected.
Settings resolve_settings(const std::vector<OptionSpec>& specs,
                          const std::map<std::string, std::string>& file_values,
                          const std::map<std::string, std::string>& flag_values);

/// ModelParams from whichever model keys are present.
ModelParams model_params(const Settings& s);

}  // namespace meanfield::cli

#endif  // MEANFIELD_CLI_SETTINGS_HPP
