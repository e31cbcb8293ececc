// Copyright 2026 The TWPA Toolkit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// twpa: design, simulation and measurement-analysis front end.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 sweep completed with failed grid points.

#include <iostream>
#include <map>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "config.hpp"
#include "pipeline.hpp"
#include "twpa/errors.hpp"

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumeric = 3;
constexpr int kExitPartial = 4;

struct CommandOptions {
  std::string config_file;
  std::string out_dir;
  std::vector<std::string> assignments;
  // Values of the per-key flags, e.g. --line.ic_ua.
  std::map<std::string, std::string> keys;
};

const std::map<std::string, std::string>& descriptions() {
  static const std::map<std::string, std::string> d = {
      {"dispersion", "Bloch dispersion of the configured line"},
      {"gain", "Coupled-mode gain sweep over pump power and signal frequency"},
      {"qpm", "Sign-modulation profile for quasi-phase matching"},
      {"kitwpa-plan", "Periodic loading plan for a kinetic-inductance line"},
      {"rpm-plan", "Resonator loading plan placing a stopband at a frequency"},
      {"noise", "Quantum limits and cascaded noise budget"},
      {"analyze-gain", "Pump-on/pump-off gain from two spectra"},
      {"analyze-idler", "Features of an idler-versus-bias scan"},
      {"analyze-jj", "Junction resistance statistics and process comparison"},
      {"run", "Run the pipelines listed under [run] pipelines"},
  };
  return d;
}

void add_common_options(CLI::App& cmd, CommandOptions& o) {
  cmd.add_option("-c,--config", o.config_file, "INI configuration file")->check(CLI::ExistingFile);
  cmd.add_option("-o,--out", o.out_dir, "output directory ([output] dir)");
  cmd.add_option("--set", o.assignments, "override a key: section.key=value (repeatable)");
  for (const auto& spec : twpa::cli::config_schema()) {
    const auto dotted = spec.section + "." + spec.key;
    cmd.add_option("--" + dotted, o.keys[dotted], spec.help)->group("Configuration keys");
  }
}

int execute(const std::string& command, const CommandOptions& o, CLI::App& cmd) {
  using namespace twpa::cli;
  ConfigSource source = o.config_file.empty() ? ConfigSource{} : ConfigSource::from_file(o.config_file);
  for (const auto& [dotted, value] : o.keys) {
    if (cmd.count("--" + dotted) > 0) source.set_assignment(dotted + "=" + value, "--" + dotted);
  }
  for (const auto& a : o.assignments) source.set_assignment(a, "--set");
  if (!o.out_dir.empty()) source.set("output", "dir", o.out_dir, "--out");
  if (command != "run") source.set("run", "pipelines", command, "command line");

  const RunConfig config = build_run_config(source);
  const Manifest manifest = run_pipeline(config);
  for (const auto& f : manifest.files) {
    std::cout << fmt::format("{}  {}\n", f.sha256, (config.output_dir / f.path).string());
  }
  for (const auto& w : manifest.warnings) std::cerr << "warning: " << w << '\n';
  if (manifest.partial()) {
    std::cerr << fmt::format("{} grid point(s) failed; see {}\n", manifest.failures.size(),
                             (config.output_dir / "manifest.json").string());
    return kExitPartial;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Travelling-wave parametric amplifier design and analysis toolkit", "twpa"};
  app.require_subcommand(1);
  std::map<std::string, CommandOptions> options;
  std::map<std::string, CLI::App*> commands;
  for (const auto& [name, description] : descriptions()) {
    auto* cmd = app.add_subcommand(name, description);
    add_common_options(*cmd, options[name]);
    commands[name] = cmd;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfig;
  }

  for (const auto& [name, cmd] : commands) {
    if (!cmd->parsed()) continue;
    try {
      return execute(name, options[name], *cmd);
    } catch (const twpa::cli::ConfigError& e) {
      std::cerr << "config error: " << e.what() << '\n';
      return kExitConfig;
    } catch (const twpa::ArgumentError& e) {
      std::cerr << "invalid input: " << e.what() << '\n';
      return kExitConfig;
    } catch (const twpa::Error& e) {
      std::cerr << "numerical failure: " << e.what() << '\n';
      return kExitNumeric;
    }
  }
  return kExitConfig;
}
