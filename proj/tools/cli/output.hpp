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

#ifndef MEANFIELD_CLI_OUTPUT_HPP
#define MEANFIELD_CLI_OUTPUT_HPP

#include <filesystem>
#include <string>
#include <vector>

#include "json.hpp"

namespace meanfield::cli {

/// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

/// Column-oriented numeric table with fixed headers.
struct Table {
  std::vector<std::string> headers;
  std::vector<std::vector<double>> rows;

  void add(std::vector<double> row) { rows.push_back(std::move(row)); }
};

std::string to_csv(const Table& t);
nlohmann::ordered_json to_json(const Table& t);

/// Output directory of one run. Only relative paths without ".." are
/// accepted, and every file written through it is remembered for the
/// manifest.
class OutputDir {
 public:
  explicit OutputDir(const std::string& relative);

  [[nodiscard]] const std::filesystem::path& path() const { return root_; }
  [[nodiscard]] const std::vector<std::string>& outputs() const { return outputs_; }

  /// `name` must be a bare file name.
  void write_text(const std::string& name, const std::string& content);
  /// Writes `<stem>.csv` or `<stem>.json` depending on `format`.
  void write_table(const std::string& stem, const Table& t, const std::string& format);
  void write_json(const std::string& name, const nlohmann::ordered_json& j);

 private:
  std::filesystem::path root_;
  std::vector<std::string> outputs_;
};

}  // namespace meanfield::cli

#endif  // MEANFIELD_CLI_OUTPUT_HPP
