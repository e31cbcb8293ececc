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

// Acceptance suite. Prints one PASS/FAIL line per criterion, followed by
// indented detail lines, and exits non-zero when any selected criterion fails.
//
//   twpa_acceptance                 run every criterion
//   twpa_acceptance --criterion 6   run one

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "synthetic.hpp"
#include "twpa/circuit_model.hpp"
#include "twpa/coupled_mode.hpp"
#include "twpa/data_analysis.hpp"
#include "twpa/dispersion.hpp"
#include "twpa/errors.hpp"
#include "twpa/matching.hpp"
#include "twpa/noise_budget.hpp"

#ifdef TWPA_ACCEPTANCE_HAS_CLI
#include "config.hpp"
#include "pipeline.hpp"
#endif

namespace {

using namespace twpa;

struct Outcome {
  bool pass = true;
  std::vector<std::string> details;

  void check(bool ok, std::string line) {
    pass = pass && ok;
    details.push_back(fmt::format("{} {}", ok ? "ok  " : "FAIL", line));
  }
  void note(std::string line) { details.push_back("info " + line); }
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

double rel_err(double a, double b) { return std::abs(a - b) / std::abs(b); }

Outcome impedance_sanity() {
  Outcome o;
  const RfSquidCell cell = prototype_squid_cell();
  const double l = squid_effective_inductance(cell, 0.0);
  const double z = characteristic_impedance(l, cell.ground_capacitance);
  const double lj = josephson_inductance(cell.junction, 0.0);
  const double fp = plasma_frequency(lj, cell.junction.self_capacitance);
  o.check(z >= 48.0 && z <= 60.0, fmt::format("Z0 = {:.4f} ohm in [48, 60]", z));
  o.check(fp >= 60e9 && fp <= 75e9, fmt::format("junction plasma frequency = {:.4f} GHz in [60, 75]", fp / 1e9));
  return o;
}

// Three-wave run against the undepleted closed form. `ratio` is the signal
// to pump photon-flux ratio at the input.
double oracle_error(double gl, double dk_over_g, double ratio) {
  const std::size_t n = 990;
  const double n_p = 1e12;
  const double g = gl / static_cast<double>(n);
  CmeCoefficients c;
  c.mode = MixingMode::ThreeWave;
  c.pump_flux = n_p;
  c.coupling = g / std::sqrt(n_p);
  c.delta_k = dk_over_g * g;
  const ModeState start{std::sqrt(n_p), std::sqrt(n_p * ratio), 0.0};
  const auto traj = integrate_cme(start, c, n, 1e-12);
  const double gain = traj.back().signal_flux() / start.signal_flux();
  return rel_err(gain, undepleted_pump_gain(g, c.delta_k, static_cast<double>(n)));
}

Outcome oracle_equivalence() {
  Outcome o;
  for (double dk : {0.0, 2.0}) {
    for (double gl : {0.5, 1.0, 3.0}) {
      const double e = oracle_error(gl, dk, 1e-4);
      o.check(e < 1e-6, fmt::format("pump 40 dB above signal, gL = {}, |dk| = {}g: rel error {:.3e} < 1e-6",
                                    gl, dk, e));
    }
  }
  // The closed form neglects pump depletion, which at 40 dB is of order
  // (ratio) x (gain); 80 dB isolates the integrator itself.
  double worst = 0.0;
  for (double dk : {0.0, 2.0}) {
    for (double gl : {0.5, 1.0, 3.0}) worst = std::max(worst, oracle_error(gl, dk, 1e-8));
  }
  o.note(fmt::format("pump 80 dB above signal, same six cases: worst rel error {:.3e}", worst));
  return o;
}

Outcome conservation() {
  Outcome o;
  const std::size_t n = 990;
  const double tol = 1e-10;
  for (double ratio : {1e-2, 1e-4}) {
    const double n_p = 1e10;
    CmeCoefficients c;
    c.mode = MixingMode::ThreeWave;
    c.pump_flux = n_p;
    c.coupling = 3.0 / n / std::sqrt(n_p);
    c.delta_k = 0.002;
    const ModeState start{std::sqrt(n_p), std::sqrt(ratio * n_p), 0.0};
    const auto traj = integrate_cme(start, c, n, tol);
    double mr = 0.0;
    double energy = 0.0;
    for (const auto& s : traj) {
      mr = std::max(mr, std::abs(s.signal_flux() - s.idler_flux() - start.signal_flux()));
      energy = std::max(energy, std::abs(s.pump_flux() + s.idler_flux() - start.pump_flux()));
    }
    const double ref = start.signal_flux();
    o.check(mr / ref < 1e-9 && energy / ref < 1e-9,
            fmt::format("3WM ratio {:.0e}: |d(ns - ni)| {:.2e}, |d(np + ni)| {:.2e} relative to ns(0)",
                        ratio, mr / ref, energy / ref));
  }

  const LineSpec line;
  const auto curve = scan_dispersion(line, log_grid(4e9, 9e9));
  for (double pump_dbm : {-50.0, -45.0}) {
    const double n_p = photon_flux(pump_dbm, 6.75e9);
    const auto c = cme_coefficients(line, curve, 6.75e9, 5.5e9, std::sqrt(n_p), MixingMode::FourWave);
    const ModeState start{std::sqrt(n_p), std::sqrt(1e-3 * n_p), 0.0};
    const auto traj = integrate_cme(start, c, n, tol);
    const double total = start.pump_flux() + start.signal_flux();
    double flux = 0.0;
    double mr = 0.0;
    for (const auto& s : traj) {
      flux = std::max(flux, std::abs(s.pump_flux() + s.signal_flux() + s.idler_flux() - total));
      mr = std::max(mr, std::abs(s.signal_flux() - s.idler_flux() - start.signal_flux()));
    }
    o.check(flux / total < 1e-9 && mr / total < 1e-9,
            fmt::format("4WM prototype line at {} dBm: |d(np + ns + ni)| {:.2e}, |d(ns - ni)| {:.2e} "
                        "relative to total flux (gain {:.1f} dB)",
                        pump_dbm, flux / total, mr / total,
                        10 * std::log10(traj.back().signal_flux() / start.signal_flux())));
  }
  return o;
}

Outcome idler_relation() {
  Outcome o;
  const double fi = idler_frequency(6.75e9, 3.3e9, MixingMode::ThreeWave);
  o.check(fi == 3.45e9, fmt::format("idler_frequency(6.75 GHz, 3.3 GHz) = {:.17g} Hz", fi));
  const LineSpec line;
  const auto covering = scan_dispersion(line, log_grid(3.0e9, 7.0e9, 200));
  bool ok = true;
  try {
    const double dk = phase_mismatch(covering, 6.75e9, 3.3e9, MixingMode::ThreeWave);
    const double expected = (covering.at(6.75e9) - covering.at(3.3e9) - covering.at(3.45e9)).real();
    ok = dk == expected;
  } catch (const Error&) {
    ok = false;
  }
  o.check(ok, "phase_mismatch reads the idler at exactly 3.45 GHz");
  const auto short_grid = scan_dispersion(line, log_grid(3.46e9, 7.0e9, 200));
  bool rejected = false;
  try {
    phase_mismatch(short_grid, 6.75e9, 3.3e9, MixingMode::ThreeWave);
  } catch (const OutOfRangeError&) {
    rejected = true;
  }
  o.check(rejected, "a grid missing 3.45 GHz is rejected");
  return o;
}

Outcome qpm_superiority() {
  Outcome o;
  const double dk = std::numbers::pi / 100.0;
  const std::size_t n = 1200;
  const double n_p = 1e10;
  CmeCoefficients c;
  c.mode = MixingMode::ThreeWave;
  c.pump_flux = n_p;
  c.coupling = dk / 8.0 / std::sqrt(n_p);
  c.delta_k = dk;
  const double lc = coherence_length(dk);
  const auto profile = qpm_sign_profile(dk, n);
  o.check(std::abs(dk * lc - std::numbers::pi) < 1e-12 && n >= 8 * lc,
          fmt::format("dk Lc = pi, L = {} cells = {:.1f} Lc", n, n / lc));

  const ModeState start{std::sqrt(n_p), 1.0, 0.0};
  const auto with = integrate_cme(start, c, n, 1e-10, profile.signs);
  const auto without = integrate_cme(start, c, n, 1e-10);
  const double g_qpm = 10 * std::log10(with.back().signal_flux());
  const double g_flat = 10 * std::log10(without.back().signal_flux());
  o.check(g_qpm >= g_flat + 10.0,
          fmt::format("QPM gain {:.2f} dB vs unmodulated {:.2f} dB (difference {:.2f} dB)", g_qpm,
                      g_flat, g_qpm - g_flat));

  const double g = c.parametric_rate();
  const double kappa_sq = 0.25 * dk * dk - g * g;
  const double bound = 1.0 + g * g / kappa_sq;
  double peak = 0.0;
  double first_half = 0.0;
  for (std::size_t i = 0; i < without.size(); ++i) {
    peak = std::max(peak, without[i].signal_flux());
    if (i <= n / 2) first_half = std::max(first_half, without[i].signal_flux());
  }
  o.check(kappa_sq > 0.0 && peak <= bound * (1.0 + 1e-6) && peak <= first_half * (1.0 + 1e-6),
          fmt::format("unmodulated power oscillates below 1 + (g/kappa)^2 = {:.4f} (peak {:.4f})",
                      bound, peak));
  return o;
}

Outcome kitwpa_structure() {
  Outcome o;
  LineSpec line;
  line.base_cell = default_kinetic_cell();
  line.bias = CurrentBias{0.0};
  line.n_cells = 1800;
  const auto grid = log_grid(1e9, 30e9, 4000);

  const auto plan = kitwpa_plan(9e9, 0.02, line);
  const auto bands = find_stopbands(scan_dispersion(apply_plan(line, plan), grid));
  for (const auto& b : bands) {
    o.note(fmt::format("stopband {:.4f}-{:.4f} GHz ({:.1f} MHz)", b.lower / 1e9, b.upper / 1e9,
                       b.width() / 1e6));
  }
  o.check(bands.size() == 2, fmt::format("{} stopbands below 30 GHz (want 2)", bands.size()));
  if (bands.size() == 2) {
    const auto& narrow = bands[0];
    const auto& wide = bands[1];
    o.check(std::abs(narrow.center() - 9e9) < 1e9 && std::abs(wide.center() - 27e9) < 3e9,
            fmt::format("centres {:.3f} GHz and {:.3f} GHz", narrow.center() / 1e9,
                        wide.center() / 1e9));
    o.check(wide.width() >= 5.0 * narrow.width(),
            fmt::format("width ratio {:.2f} >= 5", wide.width() / narrow.width()));
  }

  KitwpaOptions ablated;
  ablated.third_length_scale = 1.0;
  const auto plain = find_stopbands(scan_dispersion(apply_plan(line, kitwpa_plan(9e9, 0.02, line, ablated)), grid));
  const bool narrow_gone = std::none_of(plain.begin(), plain.end(), [](const Stopband& b) {
    return std::abs(b.center() - 9e9) < 2e9;
  });
  o.check(narrow_gone && plain.size() == 1,
          fmt::format("without the every-third modification: {} stopband(s), none near 9 GHz", plain.size()));
  return o;
}

Outcome phase_matched_gain_levels() {
  Outcome o;
  const LineSpec line;
  std::vector<double> pumps;
  for (double p = -70.0; p <= -40.0 + 1e-9; p += 2.5) pumps.push_back(p);
  const std::vector<double> signal{5.5e9};
  SweepOptions options;
  options.phase_matching = PhaseMatching::Ideal;
  const auto profile = sweep_gain(line, 6.75e9, pumps, signal, MixingMode::FourWave, options);
  std::string row;
  for (std::size_t i = 0; i < pumps.size(); ++i) {
    const auto& g = profile.gain(i, 0);
    row += g ? fmt::format(" {:.1f}", *g) : " n/a";
  }
  o.note(fmt::format("gain (dB) at fp 6.75 GHz, fs 5.5 GHz, pump -70..-40 dBm:{}", row));

  std::optional<std::size_t> first;
  for (std::size_t i = 0; i < pumps.size(); ++i) {
    const auto& g = profile.gain(i, 0);
    if (g && *g >= 20.0) {
      first = i;
      break;
    }
  }
  o.check(first.has_value(), first ? fmt::format("gain {:.2f} dB >= 20 dB at {} dBm",
                                                 *profile.gain(*first, 0), pumps[*first])
                                   : std::string("no pump power reaches 20 dB"));
  if (first) {
    bool monotone = true;
    for (std::size_t i = 1; i <= *first; ++i) {
      const auto& a = profile.gain(i - 1, 0);
      const auto& b = profile.gain(i, 0);
      monotone = monotone && a && b && *b >= *a;
    }
    o.check(monotone, fmt::format("gain non-decreasing in pump power up to {} dBm", pumps[*first]));
  }
  return o;
}

Outcome noise_budget() {
  Outcome o;
  double lo = INFINITY;
  double hi = -INFINITY;
  for (int i = 0; i <= 50; ++i) {
    const double t = quantum_limit_temperature(5e9 + 1e8 * i);
    lo = std::min(lo, t);
    hi = std::max(hi, t);
  }
  o.check(lo >= 0.24 && hi <= 0.48,
          fmt::format("h f / kB over 5-10 GHz spans [{:.6f}, {:.6f}] K, want within [0.24, 0.48]", lo, hi));
  o.check(hi <= 0.6, fmt::format("maximum {:.6f} K <= 0.6 K", hi));

  struct Example {
    std::vector<NoiseStage> stages;
    double expected;
  };
  const std::vector<Example> examples{
      {{{"twpa", 20, 0.6}, {"hemt", 30, 4}, {"fet", 30, 100}}, 0.6 + 0.04 + 0.001},
      {{{"a", 10, 1}, {"b", 20, 10}}, 2.0},
      {{{"hemt", 30, 4}, {"fet", 30, 100}}, 4.1},
      {{{"x", 0, 5}, {"y", 3, 7}, {"z", 10, 50}}, 5.0 + 7.0 + 50.0 / std::pow(10.0, 0.3)},
  };
  double worst = 0.0;
  for (const auto& e : examples) worst = std::max(worst, rel_err(friis_cascade(e.stages), e.expected));
  o.check(worst <= 1e-12, fmt::format("Friis cascade hand examples: worst rel error {:.2e}", worst));
  return o;
}

Outcome jj_recovery() {
  Outcome o;
  const testing::JjDatasetParams params;
  const auto primary = testing::make_jj_dataset(0, params);
  const auto summary = jj_statistics(primary);
  o.check(primary.size() == 960, fmt::format("{} records", primary.size()));
  o.check(std::abs(summary.pooled_detrended_cv - params.cv) <= 0.005,
          fmt::format("recovered cv {:.3f}% vs injected {:.1f}%", 100 * summary.pooled_detrended_cv,
                      100 * params.cv));

  int sign_ok = 0;
  int flagged = 0;
  double worst_cv = 0.0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto data = testing::make_jj_dataset(seed, params);
    const auto s = jj_statistics(data);
    worst_cv = std::max(worst_cv, std::abs(s.pooled_detrended_cv - params.cv));
    const bool all_positive = std::all_of(s.arrays.begin(), s.arrays.end(),
                                          [](const ArrayStatistics& a) { return a.slope > 0.0; });
    sign_ok += all_positive && s.pooled_slope > 0.0 ? 1 : 0;
    const auto cmp = compare_processes(data);
    flagged += cmp.significant && cmp.difference > 0.0 ? 1 : 0;
  }
  o.check(sign_ok >= 95, fmt::format("gradient sign correct in every array for {}/100 seeds", sign_ok));
  o.check(flagged == 100, fmt::format("static > dynamic flagged in {}/100 seeds", flagged));
  o.note(fmt::format("worst cv deviation over 100 seeds {:.3f} pp", 100 * worst_cv));
  return o;
}

Outcome determinism() {
  Outcome o;
#ifdef TWPA_ACCEPTANCE_HAS_CLI
  namespace fs = std::filesystem;
  using namespace twpa::cli;
  const fs::path root = fs::temp_directory_path() / "twpa_acceptance_determinism";
  fs::remove_all(root);
  auto config = [&](const fs::path& out) {
    ConfigSource s;
    s.set("run", "pipelines", "dispersion,gain", "acceptance");
    s.set("output", "dir", out.string(), "acceptance");
    s.set("pump", "power_start_dbm", "-55", "acceptance");
    s.set("pump", "power_stop_dbm", "-45", "acceptance");
    s.set("pump", "power_step_db", "5", "acceptance");
    s.set("signal", "points", "5", "acceptance");
    s.set("sweep", "phase_matching", "ideal", "acceptance");
    return build_run_config(s);
  };
  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
  };
  const auto a = run_pipeline(config(root / "a"));
  const auto b = run_pipeline(config(root / "b"));
  for (const char* name : {"dispersion.csv", "gain.csv"}) {
    const auto x = slurp(root / "a" / name);
    const auto y = slurp(root / "b" / name);
    o.check(!x.empty() && x == y, fmt::format("{}: {} bytes, identical across runs", name, x.size()));
  }
  o.check(a.files.size() == b.files.size(), "same file set");
  fs::remove_all(root);
#else
  const LineSpec line;
  const std::vector<double> pumps{-55.0, -50.0, -45.0};
  const std::vector<double> signals{4.5e9, 5.0e9, 5.5e9, 6.0e9, 6.5e9};
  std::ostringstream x;
  std::ostringstream y;
  write_csv(x, sweep_gain(line, 6.75e9, pumps, signals, MixingMode::FourWave));
  write_csv(y, sweep_gain(line, 6.75e9, pumps, signals, MixingMode::FourWave));
  o.check(x.str() == y.str(), "gain CSV identical across runs");
#endif
  return o;
}

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> list{
      {1, "impedance sanity", 1.0, impedance_sanity},
      {2, "oracle equivalence", 10.0, oracle_equivalence},
      {3, "conservation suite", 30.0, conservation},
      {4, "idler relation", 1.0, idler_relation},
      {5, "QPM superiority", 30.0, qpm_superiority},
      {6, "KITWPA stopband structure", 60.0, kitwpa_structure},
      {7, "gain levels", 300.0, phase_matched_gain_levels},
      {8, "noise budget", 1.0, noise_budget},
      {9, "JJ statistics recovery", 5.0, jj_recovery},
      {10, "determinism", 60.0, determinism},
  };
  return list;
}

bool run(const Criterion& c) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = c.run();
  } catch (const std::exception& e) {
    o.check(false, fmt::format("threw: {}", e.what()));
  }
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.check(seconds < c.time_limit_s, fmt::format("runtime {:.3f} s < {} s", seconds, c.time_limit_s));
  std::cout << fmt::format("criterion {:>2}: {}  {}\n", c.id, o.pass ? "PASS" : "FAIL", c.name);
  for (const auto& d : o.details) std::cout << "    " << d << '\n';
  std::cout.flush();
  return o.pass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"TWPA toolkit acceptance suite", "twpa_acceptance"};
  int only = 0;
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  CLI11_PARSE(app, argc, argv);

  bool all_pass = true;
  for (const auto& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    all_pass = run(c) && all_pass;
  }
  return all_pass ? 0 : 1;
}
