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

#include "twpa/coupled_mode.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "twpa/constants.hpp"
#include "twpa/errors.hpp"

namespace twpa {

namespace {

using constants::kPi;
using constants::kPlanck;
using constants::kReducedPlanck;

constexpr cdouble kJ{0.0, 1.0};

enum Tone : std::size_t { kPump = 0, kSignal = 1, kIdler = 2 };

double pump_order(MixingMode mode) { return mode == MixingMode::ThreeWave ? 1.0 : 2.0; }

using Vec = std::array<cdouble, 3>;

Vec to_vec(const ModeState& s) { return {s.pump, s.signal, s.idler}; }
ModeState to_state(const Vec& v) { return {v[kPump], v[kSignal], v[kIdler]}; }

struct Rhs {
  const CmeCoefficients& c;
  double sign;

  Vec operator()(const Vec& a) const {
    const std::array<double, 3> n{std::norm(a[0]), std::norm(a[1]), std::norm(a[2])};
    std::array<double, 3> rot{};
    for (std::size_t j = 0; j < 3; ++j) {
      rot[j] = c.kerr[j][0] * n[0] + c.kerr[j][1] * n[1] + c.kerr[j][2] * n[2];
    }
    const double g = sign * c.coupling;
    const double half_dk = 0.5 * c.delta_k;
    Vec out;
    if (c.mode == MixingMode::ThreeWave) {
      out[kPump] = -kJ * (rot[kPump] * a[kPump] + g * a[kSignal] * a[kIdler]);
      out[kSignal] = kJ * ((half_dk - rot[kSignal]) * a[kSignal] -
                           g * a[kPump] * std::conj(a[kIdler]));
      out[kIdler] = kJ * ((half_dk - rot[kIdler]) * a[kIdler] -
                          g * a[kPump] * std::conj(a[kSignal]));
    } else {
      const cdouble pump_sq = a[kPump] * a[kPump];
      out[kPump] = -kJ * (rot[kPump] * a[kPump] +
                          2.0 * g * std::conj(a[kPump]) * a[kSignal] * a[kIdler]);
      out[kSignal] = kJ * ((half_dk - rot[kSignal]) * a[kSignal] -
                           g * pump_sq * std::conj(a[kIdler]));
      out[kIdler] = kJ * ((half_dk - rot[kIdler]) * a[kIdler] -
                          g * pump_sq * std::conj(a[kSignal]));
    }
    return out;
  }
};

// Dormand-Prince 5(4) tableau.
constexpr double kA21 = 1.0 / 5.0;
constexpr double kA31 = 3.0 / 40.0, kA32 = 9.0 / 40.0;
constexpr double kA41 = 44.0 / 45.0, kA42 = -56.0 / 15.0, kA43 = 32.0 / 9.0;
constexpr double kA51 = 19372.0 / 6561.0, kA52 = -25360.0 / 2187.0, kA53 = 64448.0 / 6561.0,
                 kA54 = -212.0 / 729.0;
constexpr double kA61 = 9017.0 / 3168.0, kA62 = -355.0 / 33.0, kA63 = 46732.0 / 5247.0,
                 kA64 = 49.0 / 176.0, kA65 = -5103.0 / 18656.0;
constexpr double kB1 = 35.0 / 384.0, kB3 = 500.0 / 1113.0, kB4 = 125.0 / 192.0,
                 kB5 = -2187.0 / 6784.0, kB6 = 11.0 / 84.0;
constexpr double kE1 = 71.0 / 57600.0, kE3 = -71.0 / 16695.0, kE4 = 71.0 / 1920.0,
                 kE5 = -17253.0 / 339200.0, kE6 = 22.0 / 525.0, kE7 = -1.0 / 40.0;

Vec axpy(const Vec& y, double h, std::initializer_list<std::pair<double, const Vec*>> terms) {
  Vec out = y;
  for (const auto& [w, k] : terms) {
    if (w == 0.0) continue;
    for (std::size_t j = 0; j < 3; ++j) out[j] += h * w * (*k)[j];
  }
  return out;
}

bool finite(const Vec& v) {
  for (const auto& x : v) {
    if (!std::isfinite(x.real()) || !std::isfinite(x.imag())) return false;
  }
  return true;
}

struct StepResult {
  Vec y;
  Vec k7;
  double error_norm;
};

// One trial step from y with first-stage slope k1 (FSAL).
StepResult dp45_step(const Rhs& f, const Vec& y, const Vec& k1, double h, double tol) {
  const Vec k2 = f(axpy(y, h, {{kA21, &k1}}));
  const Vec k3 = f(axpy(y, h, {{kA31, &k1}, {kA32, &k2}}));
  const Vec k4 = f(axpy(y, h, {{kA41, &k1}, {kA42, &k2}, {kA43, &k3}}));
  const Vec k5 = f(axpy(y, h, {{kA51, &k1}, {kA52, &k2}, {kA53, &k3}, {kA54, &k4}}));
  const Vec k6 =
      f(axpy(y, h, {{kA61, &k1}, {kA62, &k2}, {kA63, &k3}, {kA64, &k4}, {kA65, &k5}}));
  StepResult r;
  r.y = axpy(y, h, {{kB1, &k1}, {kB3, &k3}, {kB4, &k4}, {kB5, &k5}, {kB6, &k6}});
  r.k7 = f(r.y);
  const Vec err = axpy(Vec{}, h,
                       {{kE1, &k1}, {kE3, &k3}, {kE4, &k4}, {kE5, &k5}, {kE6, &k6}, {kE7, &r.k7}});
  // Relative control per component, with a floor tied to the largest
  // amplitude so a component that starts at zero (the idler) is still
  // controlled.
  double largest = 0.0;
  for (std::size_t j = 0; j < 3; ++j) largest = std::max({largest, std::abs(y[j]), std::abs(r.y[j])});
  const double floor = 1e-12 * largest + std::numeric_limits<double>::min();
  r.error_norm = 0.0;
  for (std::size_t j = 0; j < 3; ++j) {
    const double scale = tol * (std::max(std::abs(y[j]), std::abs(r.y[j])) + floor);
    r.error_norm = std::max(r.error_norm, std::abs(err[j]) / scale);
  }
  if (!finite(r.y)) r.error_norm = std::numeric_limits<double>::infinity();
  return r;
}

void require_finite_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ArgumentError(fmt::format("{} must be positive and finite (got {})", name, value));
  }
}

void require_in_passband(const DispersionCurve& curve, double f, const char* tone) {
  if (!curve.covers(f)) {
    throw OutOfRangeError(fmt::format("{} at {} Hz lies outside the dispersion grid", tone, f));
  }
  const double attenuation = curve.at(f).imag();
  if (attenuation > kDefaultStopbandThreshold) {
    throw StopbandPlacementError(fmt::format(
        "{} at {} Hz falls in a stopband ({} Np per cell)", tone, f, attenuation));
  }
}

}  // namespace

double CmeCoefficients::parametric_rate() const {
  return mode == MixingMode::ThreeWave ? coupling * std::sqrt(pump_flux) : coupling * pump_flux;
}

double CmeCoefficients::effective_delta_k() const {
  const double shift = (pump_order(mode) * kerr[kPump][kPump] - kerr[kPump][kSignal] -
                        kerr[kPump][kIdler]) * pump_flux;
  return delta_k + shift;
}

double CmeCoefficients::phase_matched_delta_k() const {
  return delta_k - effective_delta_k();
}

double dbm_to_watts(double dbm) { return 1e-3 * std::pow(10.0, dbm / 10.0); }

double watts_to_dbm(double watts) {
  require_finite_positive(watts, "power");
  return 10.0 * std::log10(watts / 1e-3);
}

double photon_flux(double dbm, double frequency) {
  require_finite_positive(frequency, "frequency");
  return dbm_to_watts(dbm) / (kPlanck * frequency);
}

// Each tone's current amplitude per unit photon-flux amplitude is
// sigma_j = sqrt(2 hbar w_j / Z), Z the Bloch impedance at the pump. The
// interaction energy per cell, c1 I^3 / 6 and c2 I^4 / 24 for
// I = sum_j sigma_j (a_j + c.c.) / 2, keeps the resonant terms
//   3WM: (c1 / 8) sigma_p sigma_s sigma_i (a_p a_s* a_i* + c.c.)
//   4WM: (c2 / 16) sigma_p^2 sigma_s sigma_i (a_p^2 a_s* a_i* + c.c.)
//        + (c2 / 16) sigma_j^4 n_j^2 + (c2 / 8) sigma_j^2 sigma_k^2 n_j n_k
// and dividing by hbar turns them into rates per cell.
CmeCoefficients cme_coefficients(const LineSpec& line, const DispersionCurve& curve,
                                 double f_pump, double f_signal, double pump_amplitude,
                                 MixingMode mode) {
  line.validate();
  require_finite_positive(f_pump, "pump frequency");
  require_finite_positive(f_signal, "signal frequency");
  if (!std::isfinite(pump_amplitude)) throw ArgumentError("pump amplitude must be finite");
  const double f_idler = idler_frequency(f_pump, f_signal, mode);
  require_in_passband(curve, f_pump, "pump");
  require_in_passband(curve, f_signal, "signal");
  require_in_passband(curve, f_idler, "idler");

  const NonlinearExpansion expansion = taylor_nonlinearity(line.base_cell, line.bias);
  const double impedance =
      std::abs(bloch_impedance(cell_abcd(line.base_cell, f_pump, line.bias)));
  auto sigma = [&](double f) { return std::sqrt(2.0 * kReducedPlanck * 2.0 * kPi * f / impedance); };
  const std::array<double, 3> s{sigma(f_pump), sigma(f_signal), sigma(f_idler)};

  CmeCoefficients out;
  out.mode = mode;
  out.pump_flux = pump_amplitude * pump_amplitude;
  out.delta_k = phase_mismatch(curve, f_pump, f_signal, mode);
  if (mode == MixingMode::ThreeWave) {
    out.coupling = expansion.c1 * s[0] * s[1] * s[2] / (8.0 * kReducedPlanck);
  } else {
    out.coupling = expansion.c2 * s[0] * s[0] * s[1] * s[2] / (16.0 * kReducedPlanck);
  }
  for (std::size_t j = 0; j < 3; ++j) {
    for (std::size_t k = 0; k < 3; ++k) {
      const double denom = j == k ? 16.0 : 8.0;
      out.kerr[j][k] = expansion.c2 * s[j] * s[j] * s[k] * s[k] / (denom * kReducedPlanck);
    }
  }
  return out;
}

std::vector<ModeState> integrate_cme(const ModeState& initial, const CmeCoefficients& coeffs,
                                     std::size_t n_cells, double tolerance,
                                     std::span<const std::int8_t> sign_profile) {
  if (!(tolerance > 1e-14 && tolerance < 1e-3)) {
    throw ArgumentError(fmt::format("tolerance {} outside (1e-14, 1e-3)", tolerance));
  }
  if (!sign_profile.empty() && sign_profile.size() != n_cells) {
    throw ArgumentError(fmt::format("sign profile has {} entries for {} cells",
                                    sign_profile.size(), n_cells));
  }
  for (auto s : sign_profile) {
    if (s != 1 && s != -1) throw ArgumentError("sign profile entries must be +1 or -1");
  }
  Vec y = to_vec(initial);
  if (!finite(y)) throw DivergenceError("initial state is not finite", 0);

  std::vector<ModeState> trajectory;
  trajectory.reserve(n_cells + 1);
  trajectory.push_back(initial);

  double h = 0.25;
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    const Rhs f{coeffs, sign_profile.empty() ? 1.0 : static_cast<double>(sign_profile[cell])};
    Vec k1 = f(y);
    double x = 0.0;
    while (x < 1.0) {
      const double step = std::min(h, 1.0 - x);
      const StepResult r = dp45_step(f, y, k1, step, tolerance);
      if (r.error_norm <= 1.0) {
        x = step == 1.0 - x ? 1.0 : x + step;
        y = r.y;
        k1 = r.k7;
      }
      const double factor =
          r.error_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(r.error_norm, -0.2), 0.2, 5.0);
      if (std::isfinite(r.error_norm)) {
        h = std::min(1.0, step * factor);
      } else {
        h = 0.2 * step;
      }
      if (h < 1e-10) {
        throw DivergenceError(
            fmt::format("integration stalled in cell {} (state not finite or step underflow)", cell),
            cell);
      }
    }
    trajectory.push_back(to_state(y));
  }
  return trajectory;
}

double undepleted_pump_gain(double g, double delta_k, double length_cells) {
  if (!(g >= 0.0)) throw ArgumentError(fmt::format("coupling must be non-negative (got {})", g));
  const double kappa_sq = g * g - 0.25 * delta_k * delta_k;
  const double kappa = std::sqrt(std::abs(kappa_sq));
  const double x = kappa * length_cells;
  if (x < 1e-4) {
    // sinh^2(x)/x^2 and sin^2(x)/x^2 share the series 1 +/- x^2/3.
    return 1.0 + g * g * length_cells * length_cells * (1.0 + kappa_sq * length_cells * length_cells / 3.0);
  }
  const double s = kappa_sq > 0.0 ? std::sinh(x) : std::sin(x);
  return 1.0 + (g / kappa) * (g / kappa) * s * s;
}

GainProfile sweep_gain(const LineSpec& line, double f_pump, std::span<const double> pump_dbm,
                       std::span<const double> signal_hz, MixingMode mode,
                       const SweepOptions& options) {
  line.validate();
  require_finite_positive(f_pump, "pump frequency");
  if (pump_dbm.empty() || signal_hz.empty()) {
    throw ArgumentError("pump and signal grids must be non-empty");
  }
  if (!options.sign_profile.empty() && options.sign_profile.size() != line.n_cells) {
    throw ArgumentError(fmt::format("sign profile has {} entries for {} cells",
                                    options.sign_profile.size(), line.n_cells));
  }

  GainProfile profile;
  profile.pump_dbm.assign(pump_dbm.begin(), pump_dbm.end());
  profile.signal_hz.assign(signal_hz.begin(), signal_hz.end());
  profile.gain_db.assign(pump_dbm.size() * signal_hz.size(), std::nullopt);
  profile.mode = mode;
  profile.pump_frequency = f_pump;
  profile.bias = describe(line.bias);
  profile.line_id = options.line_id;

  // One dispersion scan covering every tone that any grid point needs.
  double lo = f_pump;
  double hi = f_pump;
  for (double fs : signal_hz) {
    require_finite_positive(fs, "signal frequency");
    const double fi = mode == MixingMode::ThreeWave ? f_pump - fs : 2.0 * f_pump - fs;
    lo = std::min(lo, fs);
    hi = std::max(hi, fs);
    if (fi > 0.0) {
      lo = std::min(lo, fi);
      hi = std::max(hi, fi);
    }
  }
  const std::vector<double> grid = log_grid(lo * 0.99, hi * 1.01, options.points_per_decade);
  const DispersionCurve curve = scan_dispersion(line, grid);

  std::vector<std::string> reasons(profile.gain_db.size());
  const std::size_t n_signal = signal_hz.size();
  detail::parallel_for(
      profile.gain_db.size(),
      [&](std::size_t index) {
        const double p_dbm = pump_dbm[index / n_signal];
        const double fs = signal_hz[index % n_signal];
        try {
          const double n_p = photon_flux(p_dbm, f_pump);
          const double n_s = photon_flux(options.signal_power_dbm, fs);
          CmeCoefficients c = cme_coefficients(line, curve, f_pump, fs, std::sqrt(n_p), mode);
          if (options.phase_matching == PhaseMatching::Ideal) c.delta_k = c.phase_matched_delta_k();
          const ModeState start{std::sqrt(n_p), std::sqrt(n_s), 0.0};
          const auto trajectory =
              integrate_cme(start, c, line.n_cells, options.tolerance, options.sign_profile);
          const double gain = trajectory.back().signal_flux() / n_s;
          if (!(gain > 0.0) || !std::isfinite(gain)) throw DivergenceError("gain not finite", line.n_cells);
          profile.gain_db[index] = 10.0 * std::log10(gain);
        } catch (const Error& e) {
          reasons[index] = e.what();
        }
      },
      options.threads);

  for (std::size_t index = 0; index < reasons.size(); ++index) {
    if (!profile.gain_db[index]) {
      profile.failures.push_back(
          {pump_dbm[index / n_signal], signal_hz[index % n_signal], reasons[index]});
    }
  }
  return profile;
}

double ripple_metric(const GainProfile& profile, double pump_dbm, double band_lo,
                     double band_hi) {
  const auto row = std::find(profile.pump_dbm.begin(), profile.pump_dbm.end(), pump_dbm);
  if (row == profile.pump_dbm.end()) {
    throw ArgumentError(fmt::format("pump power {} dBm is not on the profile grid", pump_dbm));
  }
  const auto p = static_cast<std::size_t>(row - profile.pump_dbm.begin());
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t s = 0; s < profile.signal_hz.size(); ++s) {
    const double f = profile.signal_hz[s];
    const auto& g = profile.gain(p, s);
    if (f < band_lo || f > band_hi || !g) continue;
    lo = std::min(lo, *g);
    hi = std::max(hi, *g);
  }
  if (!(hi >= lo)) {
    throw ArgumentError(fmt::format("band [{}, {}] Hz holds no profile samples", band_lo, band_hi));
  }
  return hi - lo;
}

GainSummary summarize(const GainProfile& profile) {
  GainSummary out;
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < profile.gain_db.size(); ++i) {
    const auto& g = profile.gain_db[i];
    if (!g) {
      ++out.missing_points;
      continue;
    }
    if (!best || *g > *profile.gain_db[*best]) best = i;
  }
  if (!best) return out;
  const std::size_t n_signal = profile.signal_hz.size();
  const std::size_t p = *best / n_signal;
  const std::size_t s_max = *best % n_signal;
  out.max_gain_db = *profile.gain_db[*best];
  out.pump_dbm_at_max = profile.pump_dbm[p];
  out.signal_hz_at_max = profile.signal_hz[s_max];

  // Contiguous run of signal samples within 3 dB of the peak.
  const double threshold = out.max_gain_db - 3.0;
  auto inside = [&](std::size_t s) {
    const auto& g = profile.gain(p, s);
    return g && *g >= threshold;
  };
  std::size_t first = s_max;
  std::size_t last = s_max;
  while (first > 0 && inside(first - 1)) --first;
  while (last + 1 < n_signal && inside(last + 1)) ++last;
  out.bandwidth_3db_hz = std::abs(profile.signal_hz[last] - profile.signal_hz[first]);

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (std::size_t s = 0; s < n_signal; ++s) {
    if (const auto& g = profile.gain(p, s)) {
      lo = std::min(lo, *g);
      hi = std::max(hi, *g);
    }
  }
  out.ripple_db = hi - lo;
  return out;
}

void write_csv(std::ostream& out, const GainProfile& profile) {
  out << "pump_dbm,signal_hz,gain_db\n";
  for (std::size_t p = 0; p < profile.pump_dbm.size(); ++p) {
    for (std::size_t s = 0; s < profile.signal_hz.size(); ++s) {
      const auto& g = profile.gain(p, s);
      out << fmt::format("{:.15g},{:.15g},", profile.pump_dbm[p], profile.signal_hz[s]);
      if (g) out << fmt::format("{:.15g}", *g);
      out << '\n';
    }
  }
}

nlohmann::json to_json(const GainSummary& summary) {
  return {
      {"max_gain_db", summary.max_gain_db},
      {"pump_dbm_at_max", summary.pump_dbm_at_max},
      {"signal_hz_at_max", summary.signal_hz_at_max},
      {"bandwidth_3db_hz", summary.bandwidth_3db_hz},
      {"ripple_db", summary.ripple_db},
      {"missing_points", summary.missing_points},
  };
}

std::string to_string(MixingMode mode) {
  return mode == MixingMode::ThreeWave ? "3wm" : "4wm";
}

}  // namespace twpa
