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

#include "cli/settings.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "meanfield/error.hpp"
#include "meanfield/parallel.hpp"

namespace meanfield::cli {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream is(s);
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_real(const std::string& key, const std::string& v) {
  double out = 0.0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("option '" + key + "': '" + v + "' is not a number");
  }
  return out;
}

std::uint64_t parse_unsigned(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  const char* end = v.data() + v.size();
  const auto [ptr, ec] = std::from_chars(v.data(), end, out);
  if (ec != std::errc() || ptr != end) {
    throw ValidationError("option '" + key + "': '" + v + "' is not a non-negative integer");
  }
  return out;
}

}  // namespace

std::string flag_name(const std::string& key) {
  std::string f = key;
  std::replace(f.begin(), f.end(), '_', '-');
  return "--" + f;
}

const std::string& Settings::text(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ValidationError("missing option '" + key + "'");
  return it->second;
}

double Settings::real(const std::string& key) const { return parse_real(key, text(key)); }

std::uint64_t Settings::unsigned_int(const std::string& key) const {
  return parse_unsigned(key, text(key));
}

bool Settings::flag(const std::string& key) const {
  const std::string& v = text(key);
  if (v == "true" || v == "1") return true;
  if (v == "false" || v == "0") return false;
  throw ValidationError("option '" + key + "': '" + v + "' is not true/false");
}

std::vector<double> Settings::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& item : split_list(text(key))) out.push_back(parse_real(key, item));
  return out;
}

std::vector<std::size_t> Settings::counts(const std::string& key) const {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text(key))) {
    out.push_back(static_cast<std::size_t>(parse_unsigned(key, item)));
  }
  return out;
}

std::map<std::string, std::string> read_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read config file '" + path.string() + "'");
  std::map<std::string, std::string> out;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) +
                            ": expected 'key = value'");
    }
    const std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (value.size() >= 2 && value.front() == '"' && value.back() == '"') {
      value = value.substr(1, value.size() - 2);
    } else if (const auto hash = value.find('#'); hash != std::string::npos) {
      value = trim(value.substr(0, hash));
    }
    if (key.empty()) {
      throw ValidationError(path.string() + ":" + std::to_string(lineno) + ": empty key");
    }
    out[key] = value;
  }
  return out;
}

Settings resolve_settings(const std::vector<OptionSpec>& specs,
                          const std::map<std::string, std::string>& file_values,
                          const std::map<std::string, std::string>& flag_values) {
  std::set<std::string> known;
  Settings s;
  for (const auto& spec : specs) {
    known.insert(spec.key);
    s.set(spec.key, spec.fallback);
  }
  for (const auto& [k, v] : file_values) {
    if (!known.count(k)) throw ValidationError("unknown config key '" + k + "'");
    s.set(k, v);
  }
  for (const auto& [k, v] : flag_values) s.set(k, v);
  return s;
}

ModelParams model_params(const Settings& s) {
  ModelParams p;
  if (s.has("alpha")) p.alpha = s.real("alpha");
  if (s.has("theta")) p.theta = s.real("theta");
  if (s.has("sigma")) p.sigma = s.real("sigma");
  if (s.has("n_particles")) p.n_particles = s.unsigned_int("n_particles");
  if (s.has("dt")) p.dt = s.real("dt");
  if (s.has("t_end")) p.t_end = s.real("t_end");
  if (s.has("seed")) p.seed = s.unsigned_int("seed");
  if (s.has("record_stride")) p.record_stride = s.unsigned_int("record_stride");
  p.threads = resolve_threads(s.has("threads") ? static_cast<unsigned>(s.unsigned_int("threads"))
                                               : 0u);
  return p;
}

}  // namespace meanfield::cli
