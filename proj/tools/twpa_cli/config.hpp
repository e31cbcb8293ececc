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

// Run configuration: INI files with [section] key = value pairs. Every
// physical quantity carries its unit in the key name (ic_ua, cg_ff, ...).

#ifndef TWPA_CLI_CONFIG_HPP
#define TWPA_CLI_CONFIG_HPP

#include <cstddef>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "twpa/coupled_mode.hpp"
#include "twpa/dispersion.hpp"
#include "twpa/noise_budget.hpp"

namespace twpa::cli {

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Pipeline {
  Dispersion,
  Gain,
  Qpm,
  KitwpaPlan,
  RpmPlan,
  Noise,
  AnalyzeGain,
  AnalyzeIdler,
  AnalyzeJj,
};

std::string to_string(Pipeline p);
Pipeline parse_pipeline(const std::string& name);
bool is_analysis(Pipeline p);
const std::vector<Pipeline>& all_pipelines();

struct KeySpec {
  std::string section;
  std::string key;
  std::string help;
};

/// Every accepted key, in a stable order.
const std::vector<KeySpec>& config_schema();

/// Raw key/value store remembering where each value came from.
class ConfigSource {
 public:
  /// Loads an INI file; unknown sections or keys are rejected.
  static ConfigSource from_file(const std::filesystem::path& path);

  void set(const std::string& section, const std::string& key, const std::string& value,
           const std::string& origin);
  /// "section.key=value"
  void set_assignment(const std::string& assignment, const std::string& origin);

  std::optional<std::string> get(const std::string& section, const std::string& key) const;
  std::string origin(const std::string& section, const std::string& key) const;
  const std::filesystem::path& base_dir() const { return base_dir_; }
  /// Sorted "section.key" -> value.
  std::map<std::string, std::string> entries() const;

 private:
  struct Entry {
    std::string value;
    std::string origin;
  };
  std::map<std::string, Entry> entries_;
  std::filesystem::path base_dir_ = ".";
};

struct DispersionSettings {
  double f_start = 0.1e9;
  double f_stop = 30e9;
  double points_per_decade = kDefaultPointsPerDecade;
  double stopband_threshold = kDefaultStopbandThreshold;
};

struct PumpSettings {
  double frequency = 6.75e9;
  std::vector<double> power_dbm;
};

struct SignalSettings {
  std::vector<double> frequency;
  double power_dbm = -130.0;
};

struct SweepSettings {
  MixingMode mode = MixingMode::FourWave;
  PhaseMatching phase_matching = PhaseMatching::Dispersion;
  bool qpm = false;
  double tolerance = kDefaultCmeTolerance;
  std::size_t threads = 0;
};

struct QpmSettings {
  std::optional<double> delta_k;
  double f_signal = 3.3e9;
  MixingMode mode = MixingMode::ThreeWave;
  std::size_t n_cells = 0;  // 0: line length
};

struct KitwpaSettings {
  double f_pump = 9e9;
  double detuning = 0.02;
  double impedance_scale = 0.8;
  double third_length_scale = 1.5;
  double scan_stop = 30e9;
};

struct RpmSettings {
  double f_gap = 8e9;
  std::size_t spacing = 10;
  double coupling_fraction = 0.1;
  double min_relative_gap = 1e-3;
};

struct NoiseSettings {
  double f_start = 5e9;
  double f_stop = 10e9;
  std::size_t points = 6;
  std::vector<NoiseStage> stages;
  std::vector<std::string> baseline;
};

struct AnalysisSettings {
  std::optional<std::filesystem::path> spectrum_on;
  std::optional<std::filesystem::path> spectrum_off;
  std::optional<std::filesystem::path> idler_scan;
  std::optional<std::filesystem::path> resistance_csv;
  std::size_t histogram_bins = 20;
  double gap_ev = 180e-6;
  double critical_current = 1.5e-6;
};

struct RunConfig {
  LineSpec line;
  std::string line_id = "prototype";
  LineSpec kinetic_line;
  DispersionSettings dispersion;
  PumpSettings pump;
  SignalSettings signal;
  SweepSettings sweep;
  QpmSettings qpm;
  KitwpaSettings kitwpa;
  RpmSettings rpm;
  NoiseSettings noise;
  AnalysisSettings analysis;
  std::vector<Pipeline> pipelines;
  std::filesystem::path output_dir = "twpa_out";
  /// Resolved key/value pairs, echoed into the manifest.
  std::map<std::string, std::string> resolved;
};

/// Builds and validates the typed configuration. Errors are ConfigError and
/// name the offending key and where its value came from.
RunConfig build_run_config(const ConfigSource& source);

}  // namespace twpa::cli

#endif  // TWPA_CLI_CONFIG_HPP
