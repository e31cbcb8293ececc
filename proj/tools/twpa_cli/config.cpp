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

#include "config.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "twpa/errors.hpp"
#include "twpa/matching.hpp"

namespace twpa::cli {

namespace {

const std::vector<std::pair<Pipeline, std::string>>& pipeline_names() {
  static const std::vector<std::pair<Pipeline, std::string>> names = {
      {Pipeline::Dispersion, "dispersion"},     {Pipeline::Gain, "gain"},
      {Pipeline::Qpm, "qpm"},                   {Pipeline::KitwpaPlan, "kitwpa-plan"},
      {Pipeline::RpmPlan, "rpm-plan"},          {Pipeline::Noise, "noise"},
      {Pipeline::AnalyzeGain, "analyze-gain"},  {Pipeline::AnalyzeIdler, "analyze-idler"},
      {Pipeline::AnalyzeJj, "analyze-jj"},
  };
  return names;
}

bool is_stage_key(const std::string& section, const std::string& key) {
  auto ends_with = [&](const std::string& suffix) {
    return key.size() > suffix.size() &&
           key.compare(key.size() - suffix.size(), suffix.size(), suffix) == 0;
  };
  return section == "noise" && (ends_with("_gain_db") || ends_with("_noise_k"));
}

bool known_key(const std::string& section, const std::string& key) {
  const auto& schema = config_schema();
  return is_stage_key(section, key) ||
         std::any_of(schema.begin(), schema.end(),
                     [&](const KeySpec& k) { return k.section == section && k.key == key; });
}

bool known_section(const std::string& section) {
  const auto& schema = config_schema();
  return std::any_of(schema.begin(), schema.end(),
                     [&](const KeySpec& k) { return k.section == section; });
}

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto item = trim(text.substr(start, comma == std::string::npos ? std::string::npos
                                                                          : comma - start));
    if (!item.empty()) out.push_back(item);
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

// Typed access that reports failures against the key and its origin.
class Reader {
 public:
  explicit Reader(const ConfigSource& source) : source_(source) {}

  [[noreturn]] void fail(const std::string& section, const std::string& key,
                         const std::string& message) const {
    const auto origin = source_.origin(section, key);
    throw ConfigError(fmt::format("[{}] {}: {}{}", section, key, message,
                                  origin.empty() ? "" : fmt::format(" (set in {})", origin)));
  }

  bool has(const std::string& section, const std::string& key) const {
    return source_.get(section, key).has_value();
  }

  double number(const std::string& section, const std::string& key, double fallback) const {
    const auto text = source_.get(section, key);
    return text ? parse_number(section, key, *text) : fallback;
  }

  std::optional<double> optional_number(const std::string& section,
                                        const std::string& key) const {
    const auto text = source_.get(section, key);
    if (!text) return std::nullopt;
    return parse_number(section, key, *text);
  }

  double positive(const std::string& section, const std::string& key, double fallback) const {
    const double v = number(section, key, fallback);
    if (!(v > 0.0)) fail(section, key, fmt::format("must be positive (got {})", v));
    return v;
  }

  std::size_t count(const std::string& section, const std::string& key,
                    std::size_t fallback) const {
    const auto text = source_.get(section, key);
    if (!text) return fallback;
    std::size_t value = 0;
    const auto* end = text->data() + text->size();
    const auto [ptr, ec] = std::from_chars(text->data(), end, value);
    if (ec != std::errc{} || ptr != end) {
      fail(section, key, fmt::format("expected a non-negative integer, got '{}'", *text));
    }
    return value;
  }

  bool flag(const std::string& section, const std::string& key, bool fallback) const {
    const auto text = source_.get(section, key);
    if (!text) return fallback;
    if (*text == "true" || *text == "yes" || *text == "1" || *text == "on") return true;
    if (*text == "false" || *text == "no" || *text == "0" || *text == "off") return false;
    fail(section, key, fmt::format("expected true or false, got '{}'", *text));
  }

  std::string text(const std::string& section, const std::string& key,
                   const std::string& fallback) const {
    return source_.get(section, key).value_or(fallback);
  }

  std::vector<double> numbers(const std::string& section, const std::string& key) const {
    std::vector<double> out;
    for (const auto& item : split_list(source_.get(section, key).value_or(""))) {
      out.push_back(parse_number(section, key, item));
    }
    return out;
  }

  std::vector<std::string> words(const std::string& section, const std::string& key,
                                 const std::string& fallback) const {
    return split_list(source_.get(section, key).value_or(fallback));
  }

  std::optional<std::filesystem::path> existing_path(const std::string& section,
                                                     const std::string& key) const {
    const auto text = source_.get(section, key);
    if (!text || text->empty()) return std::nullopt;
    std::filesystem::path p(*text);
    if (p.is_relative()) p = source_.base_dir() / p;
    if (!std::filesystem::exists(p)) fail(section, key, fmt::format("file not found '{}'", p.string()));
    return p;
  }

 private:
  double parse_number(const std::string& section, const std::string& key,
                      const std::string& text) const {
    double value = 0.0;
    const auto t = trim(text);
    const auto* end = t.data() + t.size();
    const auto [ptr, ec] = std::from_chars(t.data(), end, value);
    if (t.empty() || ec != std::errc{} || ptr != end || !std::isfinite(value)) {
      fail(section, key, fmt::format("expected a number, got '{}'", text));
    }
    return value;
  }

  const ConfigSource& source_;
};

std::vector<double> linear_grid(double lo, double hi, std::size_t points) {
  if (points == 1) return {lo};
  std::vector<double> out(points);
  for (std::size_t i = 0; i < points; ++i) {
    out[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(points - 1);
  }
  return out;
}

MixingMode parse_mode(const Reader& r, const std::string& section, const std::string& fallback) {
  const auto text = r.text(section, "mode", fallback);
  if (text == "3wm") return MixingMode::ThreeWave;
  if (text == "4wm") return MixingMode::FourWave;
  r.fail(section, "mode", fmt::format("expected 3wm or 4wm, got '{}'", text));
}

KineticCell read_kinetic_cell(const Reader& r) {
  const auto defaults = default_kinetic_cell();
  KineticCell cell;
  cell.series_inductance = r.positive("line", "ld_ph", defaults.series_inductance * 1e12) * 1e-12;
  cell.finger_inductance = r.positive("line", "lf_ph", defaults.finger_inductance * 1e12) * 1e-12;
  cell.ground_capacitance = r.positive("line", "ck_ff", defaults.ground_capacitance * 1e15) * 1e-15;
  cell.scale_current = r.positive("line", "istar_ma", defaults.scale_current * 1e3) * 1e-3;
  return cell;
}

void read_line(const Reader& r, RunConfig& config) {
  const auto cell_kind = r.text("line", "cell", "squid");
  LineSpec& line = config.line;
  line.n_cells = r.count("line", "n_cells", 990);
  if (line.n_cells < 1) r.fail("line", "n_cells", "must be at least 1");
  line.cell_length = r.number("line", "cell_length_um", 0.0) * 1e-6;
  config.line_id = r.text("line", "id", "prototype");

  const double kinetic_bias = r.number("line", "bias_current_ma", 0.0) * 1e-3;
  config.kinetic_line.base_cell = read_kinetic_cell(r);
  config.kinetic_line.bias = CurrentBias{kinetic_bias};
  config.kinetic_line.n_cells = line.n_cells;

  if (cell_kind == "squid") {
    const auto proto = prototype_squid_cell();
    RfSquidCell cell;
    cell.geometric_inductance = r.positive("line", "lg_ph", proto.geometric_inductance * 1e12) * 1e-12;
    cell.junction.critical_current = r.positive("line", "ic_ua", proto.junction.critical_current * 1e6) * 1e-6;
    cell.junction.self_capacitance = r.positive("line", "cj_ff", proto.junction.self_capacitance * 1e15) * 1e-15;
    cell.ground_capacitance = r.positive("line", "cg_ff", proto.ground_capacitance * 1e15) * 1e-15;
    line.base_cell = cell;
    const bool has_phase = r.has("line", "bias_phase_rad");
    const bool has_coil = r.has("line", "coil_current_ua");
    if (has_phase && has_coil) {
      r.fail("line", "coil_current_ua", "give either bias_phase_rad or coil_current_ua, not both");
    }
    if (has_coil) {
      if (!r.has("line", "cal_rad_per_ua")) {
        r.fail("line", "cal_rad_per_ua", "required when coil_current_ua is set");
      }
      const BiasCalibration cal{r.number("line", "cal_rad_per_ua", 0.0) * 1e6,
                                r.number("line", "cal_offset_ua", 0.0) * 1e-6};
      line.bias = cal.phase_for(r.number("line", "coil_current_ua", 0.0) * 1e-6);
    } else {
      line.bias = PhaseBias{r.number("line", "bias_phase_rad", 0.0)};
    }
  } else if (cell_kind == "kinetic") {
    line.base_cell = config.kinetic_line.base_cell;
    line.bias = config.kinetic_line.bias;
  } else {
    r.fail("line", "cell", fmt::format("expected squid or kinetic, got '{}'", cell_kind));
  }

  if (const auto plan_path = r.existing_path("line", "plan_file")) {
    std::ifstream in(*plan_path);
    try {
      line = apply_plan(line, loading_plan_from_json(nlohmann::json::parse(in)));
    } catch (const nlohmann::json::exception& e) {
      r.fail("line", "plan_file", e.what());
    } catch (const twpa::Error& e) {
      r.fail("line", "plan_file", e.what());
    }
  }
  try {
    line.validate();
    config.kinetic_line.validate();
  } catch (const twpa::Error& e) {
    throw ConfigError(fmt::format("[line]: {}", e.what()));
  }
}

void read_noise(const Reader& r, NoiseSettings& noise) {
  noise.f_start = r.positive("noise", "f_start_ghz", 5.0) * 1e9;
  noise.f_stop = r.positive("noise", "f_stop_ghz", 10.0) * 1e9;
  noise.points = r.count("noise", "points", 6);
  if (noise.points < 1) r.fail("noise", "points", "must be at least 1");
  if (noise.f_stop < noise.f_start) r.fail("noise", "f_stop_ghz", "must not be below f_start_ghz");
  struct Default {
    const char* label;
    double gain_db;
    double noise_k;
  };
  static const Default defaults[] = {{"twpa", 20.0, 0.6}, {"hemt", 30.0, 4.0}, {"fet", 30.0, 100.0}};
  const auto labels = r.words("noise", "stages", "twpa,hemt,fet");
  if (labels.empty()) r.fail("noise", "stages", "needs at least one stage");
  for (const auto& label : labels) {
    const Default* d = nullptr;
    for (const auto& candidate : defaults) {
      if (label == candidate.label) d = &candidate;
    }
    const auto gain_key = label + "_gain_db";
    const auto noise_key = label + "_noise_k";
    if (!d && (!r.has("noise", gain_key) || !r.has("noise", noise_key))) {
      r.fail("noise", "stages", fmt::format("stage '{}' needs {} and {}", label, gain_key, noise_key));
    }
    NoiseStage stage{label, r.number("noise", gain_key, d ? d->gain_db : 0.0),
                     r.number("noise", noise_key, d ? d->noise_k : 0.0)};
    if (stage.noise_temperature < 0.0) r.fail("noise", noise_key, "must be non-negative");
    noise.stages.push_back(stage);
  }
  noise.baseline = r.words("noise", "baseline", labels.size() > 1 ? "hemt,fet" : "");
  for (const auto& b : noise.baseline) {
    if (std::find(labels.begin(), labels.end(), b) == labels.end()) {
      r.fail("noise", "baseline", fmt::format("'{}' is not one of the stages", b));
    }
  }
}

}  // namespace

std::string to_string(Pipeline p) {
  for (const auto& [value, name] : pipeline_names()) {
    if (value == p) return name;
  }
  return "unknown";
}

Pipeline parse_pipeline(const std::string& name) {
  for (const auto& [value, n] : pipeline_names()) {
    if (n == name) return value;
  }
  throw ConfigError(fmt::format("unknown pipeline '{}'", name));
}

bool is_analysis(Pipeline p) {
  return p == Pipeline::AnalyzeGain || p == Pipeline::AnalyzeIdler || p == Pipeline::AnalyzeJj;
}

const std::vector<Pipeline>& all_pipelines() {
  static const std::vector<Pipeline> all = [] {
    std::vector<Pipeline> out;
    for (const auto& [value, name] : pipeline_names()) out.push_back(value);
    return out;
  }();
  return all;
}

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = {
      {"run", "pipelines", "comma-separated pipelines for the run subcommand"},
      {"run", "allow_mixed", "permit simulation and analysis pipelines in one run"},
      {"output", "dir", "output directory"},
      {"line", "id", "line identifier recorded with results"},
      {"line", "cell", "squid or kinetic"},
      {"line", "n_cells", "number of unit cells"},
      {"line", "cell_length_um", "physical cell length (informational)"},
      {"line", "lg_ph", "rf-SQUID geometric inductance"},
      {"line", "ic_ua", "junction critical current"},
      {"line", "cj_ff", "junction self capacitance"},
      {"line", "cg_ff", "rf-SQUID cell ground capacitance"},
      {"line", "bias_phase_rad", "junction phase bias"},
      {"line", "coil_current_ua", "flux-line current, converted with the calibration"},
      {"line", "cal_rad_per_ua", "phase per unit flux-line current"},
      {"line", "cal_offset_ua", "flux-line current giving zero phase"},
      {"line", "ld_ph", "kinetic cell series inductance"},
      {"line", "lf_ph", "kinetic cell finger inductance"},
      {"line", "ck_ff", "kinetic cell ground capacitance"},
      {"line", "istar_ma", "kinetic nonlinearity scale current"},
      {"line", "bias_current_ma", "kinetic DC bias current"},
      {"line", "plan_file", "loading plan JSON applied to the line"},
      {"dispersion", "f_start_ghz", "scan start"},
      {"dispersion", "f_stop_ghz", "scan stop"},
      {"dispersion", "points_per_decade", "logarithmic grid density"},
      {"dispersion", "stopband_threshold_np", "attenuation per cell marking a stopband"},
      {"pump", "f_pump_ghz", "pump frequency"},
      {"pump", "power_dbm", "comma-separated pump powers"},
      {"pump", "power_start_dbm", "pump power grid start"},
      {"pump", "power_stop_dbm", "pump power grid stop"},
      {"pump", "power_step_db", "pump power grid step"},
      {"signal", "f_start_ghz", "signal grid start"},
      {"signal", "f_stop_ghz", "signal grid stop"},
      {"signal", "points", "signal grid points"},
      {"signal", "f_list_ghz", "comma-separated signal frequencies"},
      {"signal", "power_dbm", "input signal power"},
      {"sweep", "mode", "3wm or 4wm"},
      {"sweep", "phase_matching", "dispersion or ideal"},
      {"sweep", "qpm", "flip the nonlinearity every coherence length"},
      {"sweep", "tolerance", "integrator relative tolerance"},
      {"sweep", "threads", "worker threads (0: all cores)"},
      {"qpm", "delta_k_rad_per_cell", "phase mismatch; computed from the line when absent"},
      {"qpm", "f_signal_ghz", "signal frequency used to compute the mismatch"},
      {"qpm", "mode", "3wm or 4wm"},
      {"qpm", "n_cells", "profile length (0: line length)"},
      {"kitwpa", "f_pump_ghz", "pump frequency"},
      {"kitwpa", "detuning", "loading frequency offset above the pump, fraction"},
      {"kitwpa", "impedance_scale", "impedance factor of loaded cells"},
      {"kitwpa", "third_length_scale", "length factor of every third loading"},
      {"kitwpa", "scan_stop_ghz", "upper end of the stopband report"},
      {"rpm", "f_gap_ghz", "frequency the resonator gap must contain"},
      {"rpm", "spacing_cells", "cells between resonators"},
      {"rpm", "coupling_fraction", "resonator capacitance per spacing, relative to Cg"},
      {"rpm", "min_relative_gap", "smallest accepted gap width over f_gap"},
      {"noise", "f_start_ghz", "quantum-limit table start"},
      {"noise", "f_stop_ghz", "quantum-limit table stop"},
      {"noise", "points", "quantum-limit table points"},
      {"noise", "stages", "comma-separated stage labels, input first"},
      {"noise", "baseline", "stages forming the reference chain for the SNR gain"},
      {"analysis", "spectrum_on", "pump-on spectrum CSV"},
      {"analysis", "spectrum_off", "pump-off spectrum CSV"},
      {"analysis", "idler_scan", "idler scan CSV"},
      {"analysis", "resistance_csv", "junction resistance CSV"},
      {"analysis", "histogram_bins", "resistance histogram bins"},
      {"analysis", "gap_uev", "superconducting gap"},
      {"analysis", "ic_ua", "critical current for the expected normal resistance"},
  };
  return schema;
}

ConfigSource ConfigSource::from_file(const std::filesystem::path& path) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  try {
    pt::read_ini(path.string(), tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(e.what());
  }
  ConfigSource out;
  out.base_dir_ = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
  for (const auto& [section, keys] : tree) {
    if (keys.empty() && !keys.data().empty()) {
      throw ConfigError(fmt::format("{}: key '{}' outside any section", path.string(), section));
    }
    for (const auto& [key, value] : keys) {
      out.set(section, key, trim(value.data()), path.filename().string());
    }
  }
  return out;
}

void ConfigSource::set(const std::string& section, const std::string& key,
                       const std::string& value, const std::string& origin) {
  if (!known_section(section)) {
    throw ConfigError(fmt::format("unknown section [{}] (set in {})", section, origin));
  }
  if (!known_key(section, key)) {
    throw ConfigError(fmt::format("unknown key [{}] {} (set in {})", section, key, origin));
  }
  entries_[section + "." + key] = {value, origin};
}

void ConfigSource::set_assignment(const std::string& assignment, const std::string& origin) {
  const auto eq = assignment.find('=');
  const auto dot = assignment.find('.');
  if (eq == std::string::npos || dot == std::string::npos || dot > eq) {
    throw ConfigError(
        fmt::format("expected section.key=value, got '{}' ({})", assignment, origin));
  }
  set(trim(assignment.substr(0, dot)), trim(assignment.substr(dot + 1, eq - dot - 1)),
      trim(assignment.substr(eq + 1)), origin);
}

std::optional<std::string> ConfigSource::get(const std::string& section,
                                             const std::string& key) const {
  const auto it = entries_.find(section + "." + key);
  if (it == entries_.end()) return std::nullopt;
  return it->second.value;
}

std::string ConfigSource::origin(const std::string& section, const std::string& key) const {
  const auto it = entries_.find(section + "." + key);
  return it == entries_.end() ? std::string{} : it->second.origin;
}

std::map<std::string, std::string> ConfigSource::entries() const {
  std::map<std::string, std::string> out;
  for (const auto& [k, e] : entries_) out[k] = e.value;
  return out;
}

RunConfig build_run_config(const ConfigSource& source) {
  const Reader r(source);
  RunConfig c;
  c.resolved = source.entries();

  for (const auto& name : r.words("run", "pipelines", "")) {
    try {
      c.pipelines.push_back(parse_pipeline(name));
    } catch (const ConfigError& e) {
      r.fail("run", "pipelines", e.what());
    }
  }
  const bool any_analysis = std::any_of(c.pipelines.begin(), c.pipelines.end(), is_analysis);
  const bool any_simulation =
      std::any_of(c.pipelines.begin(), c.pipelines.end(), [](Pipeline p) { return !is_analysis(p); });
  if (any_analysis && any_simulation && !r.flag("run", "allow_mixed", false)) {
    r.fail("run", "pipelines", "mixes simulation and analysis; set allow_mixed = true to permit");
  }
  c.output_dir = r.text("output", "dir", "twpa_out");

  read_line(r, c);

  c.dispersion.f_start = r.positive("dispersion", "f_start_ghz", 0.1) * 1e9;
  c.dispersion.f_stop = r.positive("dispersion", "f_stop_ghz", 30.0) * 1e9;
  if (!(c.dispersion.f_stop > c.dispersion.f_start)) {
    r.fail("dispersion", "f_stop_ghz", "must exceed f_start_ghz");
  }
  c.dispersion.points_per_decade =
      r.positive("dispersion", "points_per_decade", kDefaultPointsPerDecade);
  c.dispersion.stopband_threshold =
      r.positive("dispersion", "stopband_threshold_np", kDefaultStopbandThreshold);

  c.pump.frequency = r.positive("pump", "f_pump_ghz", 6.75) * 1e9;
  if (r.has("pump", "power_dbm")) {
    c.pump.power_dbm = r.numbers("pump", "power_dbm");
    if (c.pump.power_dbm.empty()) r.fail("pump", "power_dbm", "needs at least one value");
  } else {
    const double start = r.number("pump", "power_start_dbm", -70.0);
    const double stop = r.number("pump", "power_stop_dbm", -40.0);
    const double step = r.positive("pump", "power_step_db", 2.5);
    if (stop < start) r.fail("pump", "power_stop_dbm", "must not be below power_start_dbm");
    const auto n = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
    for (std::size_t i = 0; i < n; ++i) c.pump.power_dbm.push_back(start + step * static_cast<double>(i));
  }

  if (r.has("signal", "f_list_ghz")) {
    for (double f : r.numbers("signal", "f_list_ghz")) {
      if (!(f > 0.0)) r.fail("signal", "f_list_ghz", "frequencies must be positive");
      c.signal.frequency.push_back(f * 1e9);
    }
    if (c.signal.frequency.empty()) r.fail("signal", "f_list_ghz", "needs at least one value");
  } else {
    const double lo = r.positive("signal", "f_start_ghz", 4.5);
    const double hi = r.positive("signal", "f_stop_ghz", 6.5);
    const auto points = r.count("signal", "points", 9);
    if (points < 1) r.fail("signal", "points", "must be at least 1");
    if (hi < lo) r.fail("signal", "f_stop_ghz", "must not be below f_start_ghz");
    for (double f : linear_grid(lo, hi, points)) c.signal.frequency.push_back(f * 1e9);
  }
  c.signal.power_dbm = r.number("signal", "power_dbm", -130.0);

  c.sweep.mode = parse_mode(r, "sweep", "4wm");
  const auto pm = r.text("sweep", "phase_matching", "dispersion");
  if (pm == "dispersion") {
    c.sweep.phase_matching = PhaseMatching::Dispersion;
  } else if (pm == "ideal") {
    c.sweep.phase_matching = PhaseMatching::Ideal;
  } else {
    r.fail("sweep", "phase_matching", fmt::format("expected dispersion or ideal, got '{}'", pm));
  }
  c.sweep.qpm = r.flag("sweep", "qpm", false);
  c.sweep.tolerance = r.number("sweep", "tolerance", kDefaultCmeTolerance);
  if (!(c.sweep.tolerance > 1e-14 && c.sweep.tolerance < 1e-3)) {
    r.fail("sweep", "tolerance", "must lie in (1e-14, 1e-3)");
  }
  c.sweep.threads = r.count("sweep", "threads", 0);

  c.qpm.delta_k = r.optional_number("qpm", "delta_k_rad_per_cell");
  c.qpm.f_signal = r.positive("qpm", "f_signal_ghz", 3.3) * 1e9;
  c.qpm.mode = parse_mode(r, "qpm", "3wm");
  c.qpm.n_cells = r.count("qpm", "n_cells", 0);

  c.kitwpa.f_pump = r.positive("kitwpa", "f_pump_ghz", 9.0) * 1e9;
  c.kitwpa.detuning = r.positive("kitwpa", "detuning", 0.02);
  c.kitwpa.impedance_scale = r.positive("kitwpa", "impedance_scale", 0.8);
  c.kitwpa.third_length_scale = r.positive("kitwpa", "third_length_scale", 1.5);
  c.kitwpa.scan_stop = r.positive("kitwpa", "scan_stop_ghz", 30.0) * 1e9;

  c.rpm.f_gap = r.positive("rpm", "f_gap_ghz", 8.0) * 1e9;
  c.rpm.spacing = r.count("rpm", "spacing_cells", 10);
  if (c.rpm.spacing < 1) r.fail("rpm", "spacing_cells", "must be at least 1");
  c.rpm.coupling_fraction = r.positive("rpm", "coupling_fraction", 0.1);
  c.rpm.min_relative_gap = r.positive("rpm", "min_relative_gap", 1e-3);

  read_noise(r, c.noise);

  c.analysis.spectrum_on = r.existing_path("analysis", "spectrum_on");
  c.analysis.spectrum_off = r.existing_path("analysis", "spectrum_off");
  c.analysis.idler_scan = r.existing_path("analysis", "idler_scan");
  c.analysis.resistance_csv = r.existing_path("analysis", "resistance_csv");
  c.analysis.histogram_bins = r.count("analysis", "histogram_bins", 20);
  if (c.analysis.histogram_bins < 1) r.fail("analysis", "histogram_bins", "must be at least 1");
  c.analysis.gap_ev = r.positive("analysis", "gap_uev", 180.0) * 1e-6;
  c.analysis.critical_current = r.positive("analysis", "ic_ua", 1.5) * 1e-6;

  auto needs = [&](Pipeline p, const std::optional<std::filesystem::path>& value, const char* key) {
    if (!value && std::find(c.pipelines.begin(), c.pipelines.end(), p) != c.pipelines.end()) {
      r.fail("analysis", key, fmt::format("required by {}", to_string(p)));
    }
  };
  needs(Pipeline::AnalyzeGain, c.analysis.spectrum_on, "spectrum_on");
  needs(Pipeline::AnalyzeGain, c.analysis.spectrum_off, "spectrum_off");
  needs(Pipeline::AnalyzeIdler, c.analysis.idler_scan, "idler_scan");
  needs(Pipeline::AnalyzeJj, c.analysis.resistance_csv, "resistance_csv");
  return c;
}

}  // namespace twpa::cli
