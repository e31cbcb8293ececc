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

#include "pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <sstream>

#include <fmt/chrono.h>
#include <fmt/format.h>
#include <openssl/evp.h>

#include "twpa/coupled_mode.hpp"
#include "twpa/data_analysis.hpp"
#include "twpa/errors.hpp"
#include "twpa/io.hpp"
#include "twpa/matching.hpp"
#include "twpa/noise_budget.hpp"

namespace twpa::cli {

namespace {

class OutputDir {
 public:
  OutputDir(const std::filesystem::path& dir, Manifest& manifest)
      : dir_(dir), manifest_(manifest) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw ConfigError(fmt::format("[output] dir: cannot create '{}': {}", dir_.string(), ec.message()));
  }

  void write(const std::string& name, const std::string& payload) {
    const auto path = dir_ / name;
    std::ofstream out(path, std::ios::binary);
    out << payload;
    if (!out) throw Error(fmt::format("failed writing {}", path.string()));
    manifest_.files.push_back({name, sha256_hex(payload), payload.size()});
  }

  template <typename F>
  void write_with(const std::string& name, F&& fill) {
    std::ostringstream os;
    fill(os);
    write(name, os.str());
  }

  void write_json(const std::string& name, const nlohmann::json& j) { write(name, j.dump(2) + "\n"); }

 private:
  std::filesystem::path dir_;
  Manifest& manifest_;
};

template <typename T>
const T& require(const std::optional<T>& value, const char* key, Pipeline p) {
  if (!value) {
    throw ConfigError(fmt::format("[analysis] {}: required by {}", key, to_string(p)));
  }
  return *value;
}

nlohmann::json stopbands_json(const std::vector<Stopband>& bands) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& b : bands) {
    out.push_back({{"lower_hz", b.lower}, {"upper_hz", b.upper}, {"width_hz", b.width()},
                   {"max_attenuation_np", b.max_attenuation}});
  }
  return out;
}

void run_dispersion(const RunConfig& c, OutputDir& out, Manifest& m) {
  const auto grid = log_grid(c.dispersion.f_start, c.dispersion.f_stop, c.dispersion.points_per_decade);
  const auto curve = scan_dispersion(c.line, grid);
  out.write_with("dispersion.csv", [&](std::ostream& os) { write_csv(os, curve); });
  m.summary["dispersion"] = {{"points", curve.size()},
                             {"supercell_cells", c.line.supercell_period()},
                             {"stopbands", stopbands_json(find_stopbands(curve, c.dispersion.stopband_threshold))}};
}

double mismatch_for(const LineSpec& line, double f_pump, double f_signal, MixingMode mode,
                    double points_per_decade) {
  const double f_idler = idler_frequency(f_pump, f_signal, mode);
  const double lo = std::min({f_pump, f_signal, f_idler});
  const double hi = std::max({f_pump, f_signal, f_idler});
  const auto curve = scan_dispersion(line, log_grid(0.99 * lo, 1.01 * hi, points_per_decade));
  return phase_mismatch(curve, f_pump, f_signal, mode);
}

void run_gain(const RunConfig& c, OutputDir& out, Manifest& m) {
  SweepOptions options;
  options.phase_matching = c.sweep.phase_matching;
  options.signal_power_dbm = c.signal.power_dbm;
  options.tolerance = c.sweep.tolerance;
  options.points_per_decade = c.dispersion.points_per_decade;
  options.threads = c.sweep.threads;
  options.line_id = c.line_id;
  nlohmann::json qpm = nullptr;
  if (c.sweep.qpm) {
    const auto& f = c.signal.frequency;
    const double centre = f[f.size() / 2];
    const double dk = mismatch_for(c.line, c.pump.frequency, centre, c.sweep.mode,
                                   c.dispersion.points_per_decade);
    const auto profile = qpm_sign_profile(dk, c.line.n_cells);
    options.sign_profile = profile.signs;
    qpm = {{"delta_k_rad_per_cell", dk}, {"block_length_cells", profile.block_length},
           {"signal_hz", centre}};
  }
  const auto profile = sweep_gain(c.line, c.pump.frequency, c.pump.power_dbm, c.signal.frequency,
                                  c.sweep.mode, options);
  out.write_with("gain.csv", [&](std::ostream& os) { write_csv(os, profile); });
  auto summary = to_json(summarize(profile));
  summary["line_id"] = profile.line_id;
  summary["mode"] = to_string(profile.mode);
  summary["bias"] = profile.bias;
  summary["pump_frequency_hz"] = profile.pump_frequency;
  summary["qpm"] = qpm;
  out.write_json("gain_summary.json", summary);
  m.summary["gain"] = summary;
  for (const auto& f : profile.failures) {
    m.failures.push_back({{"pipeline", "gain"}, {"pump_dbm", f.pump_dbm},
                          {"signal_hz", f.signal_hz}, {"reason", f.reason}});
  }
}

void run_qpm(const RunConfig& c, OutputDir& out, Manifest& m) {
  const double dk = c.qpm.delta_k ? *c.qpm.delta_k
                                  : mismatch_for(c.line, c.pump.frequency, c.qpm.f_signal,
                                                 c.qpm.mode, c.dispersion.points_per_decade);
  const auto profile = qpm_sign_profile(dk, c.qpm.n_cells ? c.qpm.n_cells : c.line.n_cells);
  auto j = to_json(profile);
  j["delta_k_rad_per_cell"] = dk;
  out.write_json("qpm_profile.json", j);
  m.summary["qpm"] = {{"delta_k_rad_per_cell", dk},
                      {"coherence_length_cells", profile.coherence_length},
                      {"block_length_cells", profile.block_length},
                      {"n_cells", profile.signs.size()}};
}

void run_kitwpa(const RunConfig& c, OutputDir& out, Manifest& m) {
  KitwpaOptions options;
  options.impedance_scale = c.kitwpa.impedance_scale;
  options.third_length_scale = c.kitwpa.third_length_scale;
  const auto plan = kitwpa_plan(c.kitwpa.f_pump, c.kitwpa.detuning, c.kinetic_line, options);
  const auto line = apply_plan(c.kinetic_line, plan);
  const auto curve = scan_dispersion(
      line, log_grid(c.dispersion.f_start, c.kitwpa.scan_stop, c.dispersion.points_per_decade));
  const auto bands = find_stopbands(curve, c.dispersion.stopband_threshold);
  out.write_json("kitwpa_plan.json", to_json(plan));
  out.write_with("kitwpa_dispersion.csv", [&](std::ostream& os) { write_csv(os, curve); });
  out.write_with("kitwpa_stopbands.csv", [&](std::ostream& os) { write_csv(os, bands); });
  m.summary["kitwpa"] = {{"loading_period_cells", plan.loading_period},
                         {"base_width_cells", plan.slots.front().width_cells},
                         {"stopbands", stopbands_json(bands)}};
}

void run_rpm(const RunConfig& c, OutputDir& out, Manifest& m) {
  RpmOptions options;
  options.coupling_fraction = c.rpm.coupling_fraction;
  options.min_relative_gap = c.rpm.min_relative_gap;
  const auto plan = rpm_plan(c.rpm.f_gap, c.line, c.rpm.spacing, options);
  const auto line = apply_plan(c.line, plan);
  const auto curve = scan_dispersion(line, log_grid(0.7 * c.rpm.f_gap, 1.3 * c.rpm.f_gap, 20000.0));
  const auto bands = find_stopbands(curve, c.dispersion.stopband_threshold);
  out.write_json("rpm_plan.json", to_json(plan));
  out.write_with("rpm_stopbands.csv", [&](std::ostream& os) { write_csv(os, bands); });
  m.summary["rpm"] = {{"resonance_hz", plan.resonator->resonance_frequency()},
                      {"stopbands", stopbands_json(bands)}};
}

void run_noise(const RunConfig& c, OutputDir& out, Manifest& m) {
  out.write_with("quantum_limit.csv", [&](std::ostream& os) {
    os << "frequency_hz,hf_over_kb_k,hf_over_2kb_k\n";
    for (std::size_t i = 0; i < c.noise.points; ++i) {
      const double f = c.noise.points == 1
                           ? c.noise.f_start
                           : c.noise.f_start + (c.noise.f_stop - c.noise.f_start) *
                                                   static_cast<double>(i) /
                                                   static_cast<double>(c.noise.points - 1);
      os << fmt::format("{:.15g},{:.15g},{:.15g}\n", f, quantum_limit_temperature(f),
                        half_photon_temperature(f));
    }
  });
  out.write_with("noise_budget.csv", [&](std::ostream& os) { write_budget_csv(os, c.noise.stages); });
  out.write_with("noise_budget.txt", [&](std::ostream& os) { write_budget_table(os, c.noise.stages); });
  const double total = friis_cascade(c.noise.stages);
  nlohmann::json summary = {{"system_temperature_k", total}};
  if (!c.noise.baseline.empty()) {
    std::vector<NoiseStage> baseline;
    for (const auto& s : c.noise.stages) {
      if (std::find(c.noise.baseline.begin(), c.noise.baseline.end(), s.label) != c.noise.baseline.end()) {
        baseline.push_back(s);
      }
    }
    const double reference = friis_cascade(baseline);
    summary["baseline_temperature_k"] = reference;
    summary["snr_improvement_db"] = snr_improvement(reference, total);
  }
  m.summary["noise"] = summary;
}

void run_analyze_gain(const RunConfig& c, OutputDir& out, Manifest& m) {
  const auto on = read_spectrum(require(c.analysis.spectrum_on, "spectrum_on", Pipeline::AnalyzeGain));
  const auto off = read_spectrum(require(c.analysis.spectrum_off, "spectrum_off", Pipeline::AnalyzeGain));
  const auto curve = pump_on_off_gain(on, off);
  out.write_with("gain_curve.csv", [&](std::ostream& os) { write_csv(os, curve); });
  const auto peak = std::max_element(curve.gain_db.begin(), curve.gain_db.end());
  const auto index = static_cast<std::size_t>(peak - curve.gain_db.begin());
  m.summary["analyze_gain"] = {{"max_gain_db", *peak}, {"frequency_at_max_hz", curve.frequency[index]},
                               {"bins", curve.frequency.size()}};
}

void run_analyze_idler(const RunConfig& c, OutputDir& out, Manifest& m) {
  const auto scan = read_idler_scan(require(c.analysis.idler_scan, "idler_scan", Pipeline::AnalyzeIdler));
  auto j = to_json(idler_scan_features(scan));
  j["pump_dbm"] = scan.pump_dbm;
  j["floor_dbm"] = scan.floor_dbm;
  out.write_json("idler_features.json", j);
  m.summary["analyze_idler"] = j;
}

void run_analyze_jj(const RunConfig& c, OutputDir& out, Manifest& m) {
  const auto records =
      read_resistance_csv(require(c.analysis.resistance_csv, "resistance_csv", Pipeline::AnalyzeJj));
  const auto stats = jj_statistics(records, c.analysis.histogram_bins);
  auto j = to_json(stats);
  try {
    j["comparison"] = to_json(compare_processes(records));
  } catch (const ComparisonUnavailableError& e) {
    j["comparison"] = nullptr;
    m.warnings.push_back(e.what());
  }
  j["expected_normal_resistance_ohm"] =
      ambegaokar_baratoff_rn(c.analysis.critical_current, c.analysis.gap_ev);
  out.write_with("jj_arrays.csv", [&](std::ostream& os) { write_csv(os, stats.arrays); });
  out.write_json("jj_summary.json", j);
  for (const auto& w : stats.warnings) m.warnings.push_back(w);
  m.summary["analyze_jj"] = {{"records", stats.records}, {"mean_ohm", stats.mean}, {"cv", stats.cv},
                             {"pooled_detrended_cv", stats.pooled_detrended_cv},
                             {"comparison", j["comparison"]}};
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(std::chrono::system_clock::to_time_t(now)));
}

}  // namespace

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw Error("SHA-256 digest failed");
  }
  std::string hex;
  hex.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) hex += fmt::format("{:02x}", digest[i]);
  return hex;
}

Manifest run_pipeline(const RunConfig& config) {
  if (config.pipelines.empty()) throw ConfigError("[run] pipelines: nothing to run");
  Manifest manifest;
  OutputDir out(config.output_dir, manifest);
  for (const auto p : config.pipelines) {
    manifest.pipelines.push_back(to_string(p));
    switch (p) {
      case Pipeline::Dispersion: run_dispersion(config, out, manifest); break;
      case Pipeline::Gain: run_gain(config, out, manifest); break;
      case Pipeline::Qpm: run_qpm(config, out, manifest); break;
      case Pipeline::KitwpaPlan: run_kitwpa(config, out, manifest); break;
      case Pipeline::RpmPlan: run_rpm(config, out, manifest); break;
      case Pipeline::Noise: run_noise(config, out, manifest); break;
      case Pipeline::AnalyzeGain: run_analyze_gain(config, out, manifest); break;
      case Pipeline::AnalyzeIdler: run_analyze_idler(config, out, manifest); break;
      case Pipeline::AnalyzeJj: run_analyze_jj(config, out, manifest); break;
    }
  }
  manifest.timestamp = utc_timestamp();
  std::ofstream(config.output_dir / "manifest.json") << to_json(manifest, config).dump(2) << '\n';
  return manifest;
}

nlohmann::json to_json(const Manifest& m, const RunConfig& config) {
  nlohmann::json files = nlohmann::json::array();
  for (const auto& f : m.files) {
    files.push_back({{"path", f.path}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  }
  return {{"tool", "twpa"},
          {"timestamp", m.timestamp},
          {"status", m.partial() ? "partial" : "complete"},
          {"pipelines", m.pipelines},
          {"config", config.resolved},
          {"files", files},
          {"failures", m.failures},
          {"warnings", m.warnings},
          {"summary", m.summary}};
}

}  // namespace twpa::cli
