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

#include "cli/output.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "meanfield/error.hpp"

namespace meanfield::cli {

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return {buf.data(), res.ptr};
}

std::string to_csv(const Table& t) {
  std::string out;
  for (std::size_t i = 0; i < t.headers.size(); ++i) {
    if (i) out += ',';
    out += t.headers[i];
  }
  out += '\n';
  for (const auto& row : t.rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out += ',';
      out += format_double(row[i]);
    }
    out += '\n';
  }
  return out;
}

nlohmann::ordered_json to_json(const Table& t) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& row : t.rows) {
    nlohmann::ordered_json obj;
    for (std::size_t i = 0; i < row.size() && i < t.headers.size(); ++i) obj[t.headers[i]] = row[i];
    arr.push_back(std::move(obj));
  }
  return arr;
}

OutputDir::OutputDir(const std::string& relative) {
  if (relative.empty()) throw ValidationError("output directory must not be empty");
  const std::filesystem::path p(relative);
  if (p.is_absolute() || p.has_root_name()) {
    throw ValidationError("output directory must be a relative path: '" + relative + "'");
  }
  for (const auto& part : p) {
    if (part == "..") throw ValidationError("output directory must not contain '..'");
  }
  root_ = p.lexically_normal();
  std::error_code ec;
  std::filesystem::create_directories(root_, ec);
  if (ec) throw ValidationError("cannot create output directory '" + relative + "': " + ec.message());
}

void OutputDir::write_text(const std::string& name, const std::string& content) {
  const std::filesystem::path f(name);
  if (f.has_parent_path() || name.empty() || name == "." || name == "..") {
    throw ValidationError("output file name must be a bare name: '" + name + "'");
  }
  std::ofstream out(root_ / f, std::ios::binary | std::ios::trunc);
  if (!out) throw ValidationError("cannot write '" + (root_ / f).string() + "'");
  out << content;
  if (!out) throw ValidationError("write failed for '" + (root_ / f).string() + "'");
  for (const auto& o : outputs_) {
    if (o == name) return;
  }
  outputs_.push_back(name);
}

void OutputDir::write_table(const std::string& stem, const Table& t, const std::string& format) {
  if (format == "json") {
    write_json(stem + ".json", to_json(t));
  } else {
    write_text(stem + ".csv", to_csv(t));
  }
}

void OutputDir::write_json(const std::string& name, const nlohmann::ordered_json& j) {
  write_text(name, j.dump(2) + "\n");
}

}  // namespace meanfield::cli
