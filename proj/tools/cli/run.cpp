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

#include "cli/run.hpp"

#include <fstream>
#include <map>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "cli/commands.hpp"
#include "cli/output.hpp"
#include "cli/settings.hpp"
#include "json.hpp"
#include "meanfield/error.hpp"

#ifndef MEANFIELD_VERSION
#define MEANFIELD_VERSION "0.0.0"
#endif

namespace meanfield::cli {

namespace {

constexpr int kArtifactVersion = 1;

struct Invocation {
  const Command* command = nullptr;
  std::string config_path;
  std::map<std::string, std::string> flags;
};

struct ReplayRequest {
  std::string manifest;
  std::string out_dir;
};

nlohmann::ordered_json manifest_json(const std::string& command, const Settings& s,
                                     const OutputDir& dir) {
  nlohmann::ordered_json config = nlohmann::ordered_json::object();
  for (const auto& [k, v] : s.values()) config[k] = v;
  nlohmann::ordered_json j{{"command", command}, {"config", config}};
  if (s.has("seed")) {
    j["seed"] = s.unsigned_int("seed");
  } else {
    j["seed"] = nullptr;
  }
  j["artifact_version"] = kArtifactVersion;
  j["meanfield_version"] = MEANFIELD_VERSION;
  j["outputs"] = dir.outputs();
  return j;
}

// Runs one command with resolved settings and always leaves a manifest
// behind once the output directory exists.
int execute(const Command& cmd, const Settings& s, std::ostream& out, std::ostream& err) {
  const std::string& format = s.text("format");
  if (format != "csv" && format != "json") throw ValidationError("format must be csv or json");
  OutputDir dir(s.text("out_dir"));
  int code = kOk;
  try {
    cmd.handler(s, dir, out);
  } catch (const InconclusiveError& e) {
    err << "inconclusive: " << e.what() << "\n";
    code = kInconclusive;
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    err << "numerical failure: " << e.what() << "\n";
    code = kNumericalFailure;
  }
  dir.write_json("manifest.json", manifest_json(cmd.name, s, dir));
  return code;
}

Settings settings_from_manifest(const std::string& path, const Command*& cmd) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open manifest '" + path + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("manifest '" + path + "' is not valid JSON: " + e.what());
  }
  if (!j.contains("command") || !j.contains("config") || !j["config"].is_object()) {
    throw ValidationError("manifest '" + path + "' lacks command/config");
  }
  if (j.value("artifact_version", 0) != kArtifactVersion) {
    throw ValidationError("manifest '" + path + "' has an unsupported artifact_version");
  }
  cmd = find_command(j["command"].get<std::string>());
  if (cmd == nullptr) throw ValidationError("manifest names an unknown command");
  std::map<std::string, std::string> values;
  for (const auto& [k, v] : j["config"].items()) {
    if (!v.is_string()) throw ValidationError("manifest config values must be strings");
    values[k] = v.get<std::string>();
  }
  return resolve_settings(cmd->options, values, {});
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Dissipative mean-field particle model: simulations and diagnostics", "meanfield"};
  app.require_subcommand(1);
  app.set_version_flag("--version", MEANFIELD_VERSION);

  Invocation inv;
  std::vector<std::pair<CLI::App*, const Command*>> subs;
  std::map<std::string, std::string> raw;
  for (const auto& cmd : commands()) {
    CLI::App* sub = app.add_subcommand(cmd.name, cmd.description);
    sub->add_option("--config", inv.config_path, "flat key = value config file");
    for (const auto& spec : cmd.options) {
      std::string help = spec.help;
      if (!spec.fallback.empty()) help += (help.empty() ? "" : " ") + std::string("[") + spec.fallback + "]";
      sub->add_option(flag_name(spec.key), raw[cmd.name + "/" + spec.key], help);
    }
    subs.emplace_back(sub, &cmd);
  }
  ReplayRequest replay;
  CLI::App* replay_sub = app.add_subcommand("replay", "re-run a command from its manifest.json");
  replay_sub->add_option("--manifest", replay.manifest, "manifest written by an earlier run")
      ->required();
  replay_sub->add_option("--out-dir", replay.out_dir, "output directory (default: the recorded one)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    std::ostringstream o, e2;
    const int rc = app.exit(e, o, e2);
    out << o.str();
    err << e2.str();
    return rc == 0 ? kOk : kInvalidInput;
  }

  try {
    if (replay_sub->parsed()) {
      const Command* cmd = nullptr;
      Settings s = settings_from_manifest(replay.manifest, cmd);
      if (!replay.out_dir.empty()) s.set("out_dir", replay.out_dir);
      return execute(*cmd, s, out, err);
    }
    for (const auto& [sub, cmd] : subs) {
      if (!sub->parsed()) continue;
      std::map<std::string, std::string> flags;
      for (const auto& spec : cmd->options) {
        if (sub->count(flag_name(spec.key)) > 0) flags[spec.key] = raw[cmd->name + "/" + spec.key];
      }
      std::map<std::string, std::string> file_values;
      if (!inv.config_path.empty()) file_values = read_config_file(inv.config_path);
      return execute(*cmd, resolve_settings(cmd->options, file_values, flags), out, err);
    }
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << "\n";
    return kInvalidInput;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kNumericalFailure;
  }
  return kInvalidInput;
}

}  // namespace meanfield::cli
