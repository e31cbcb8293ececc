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

#include "twpa/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "parallel.hpp"
#include "twpa/constants.hpp"
#include "twpa/errors.hpp"

namespace twpa {

namespace {

using constants::kPi;
constexpr double kTwoPi = 2.0 * kPi;
constexpr cdouble kJ{0.0, 1.0};

cdouble resonator_admittance(const ShuntResonator& r, double omega) {
  return 1.0 / (kJ * omega * r.inductance + 1.0 / (kJ * omega * r.capacitance));
}

// Per-cell products of impedance scales and the summed resonator admittance.
struct AppliedModifiers {
  double impedance_scale = 1.0;
  cdouble extra_shunt{0.0, 0.0};
};

AppliedModifiers apply(std::span<const CellModifier> modifiers, double omega) {
  AppliedModifiers out;
  for (const auto& m : modifiers) {
    if (const auto* z = std::get_if<ImpedanceScale>(&m)) {
      if (!(z->factor > 0.0)) throw ArgumentError("impedance scale factor must be positive");
      out.impedance_scale *= z->factor;
    } else {
      const auto& r = std::get<ShuntResonator>(m);
      if (!(r.inductance > 0.0) || !(r.capacitance > 0.0)) {
        throw ArgumentError("shunt resonator needs positive inductance and capacitance");
      }
      out.extra_shunt += resonator_admittance(r, omega);
    }
  }
  return out;
}

AbcdMatrix t_section(cdouble z_series, cdouble y_shunt) {
  // Closed form of series(Z/2) * shunt(Y) * series(Z/2); det == 1 exactly in
  // exact arithmetic.
  const cdouble zy = z_series * y_shunt;
  const cdouble a = 1.0 + 0.5 * zy;
  return {a, z_series * (1.0 + 0.25 * zy), y_shunt, a};
}

// Chooses the extended-zone phase theta = 2 pi m +/- r closest to `predicted`
// among candidates not below `floor`. Ties go to the larger phase.
double unfold(double r, double floor, double predicted) {
  const double base = std::floor(predicted / kTwoPi);
  double best = 0.0;
  double best_distance = INFINITY;
  for (double m = base - 1.0; m <= base + 1.0; m += 1.0) {
    for (double sign : {-1.0, 1.0}) {
      const double candidate = kTwoPi * m + sign * r;
      if (candidate < floor - 1e-9) continue;
      const double distance = std::abs(candidate - predicted);
      if (distance < best_distance - 1e-12 ||
          (std::abs(distance - best_distance) <= 1e-12 && candidate > best)) {
        best = candidate;
        best_distance = distance;
      }
    }
  }
  if (!std::isfinite(best_distance)) {
    // Every candidate fell below the floor: stay on the nearest branch above it.
    const double m = std::ceil((floor - r) / kTwoPi);
    best = kTwoPi * m + r;
  }
  return best;
}

struct SupercellLayout {
  std::size_t period = 1;
  std::vector<std::vector<CellModifier>> modifiers;
};

SupercellLayout layout_of(const LineSpec& line) {
  SupercellLayout layout;
  layout.period = line.supercell_period();
  layout.modifiers.resize(layout.period);
  for (const auto& l : line.loadings) {
    if (l.position < layout.period) layout.modifiers[l.position].push_back(l.modifier);
  }
  return layout;
}

AbcdMatrix supercell_abcd(const LineSpec& line, const SupercellLayout& layout, double f) {
  const AbcdMatrix plain = cell_abcd(line.base_cell, f, line.bias);
  AbcdMatrix total = AbcdMatrix::identity();
  for (std::size_t i = 0; i < layout.period; ++i) {
    if (layout.modifiers[i].empty()) {
      total = total * plain;
    } else {
      total = total * cell_abcd(line.base_cell, f, line.bias, layout.modifiers[i]);
    }
  }
  return total;
}

}  // namespace

double ShuntResonator::resonance_frequency() const {
  return 1.0 / (kTwoPi * std::sqrt(inductance * capacitance));
}

void LineSpec::validate() const {
  twpa::validate(base_cell);
  if (n_cells < 1) throw ArgumentError("line needs at least one cell");
  for (const auto& l : loadings) {
    if (l.position >= n_cells) {
      throw ArgumentError(
          fmt::format("loading at cell {} lies outside [0, {})", l.position, n_cells));
    }
  }
  if (design_pump_frequency && !(*design_pump_frequency > 0.0)) {
    throw ArgumentError("design pump frequency must be positive");
  }
  // Bias kind must match the cell family.
  (void)taylor_nonlinearity(base_cell, bias);
}

std::vector<CellModifier> LineSpec::modifiers_at(std::size_t index) const {
  std::vector<CellModifier> out;
  for (const auto& l : loadings) {
    if (l.position == index) out.push_back(l.modifier);
  }
  return out;
}

std::size_t LineSpec::supercell_period() const {
  if (loadings.empty()) return 1;
  std::vector<std::vector<CellModifier>> pattern(n_cells);
  for (const auto& l : loadings) {
    if (l.position < n_cells) pattern[l.position].push_back(l.modifier);
  }
  for (std::size_t period = 1; period < n_cells; ++period) {
    bool periodic = true;
    for (std::size_t i = 0; i + period < n_cells && periodic; ++i) {
      periodic = pattern[i] == pattern[i + period];
    }
    if (periodic) return period;
  }
  return n_cells;
}

bool DispersionCurve::covers(double f) const {
  return !frequency.empty() && f >= frequency.front() && f <= frequency.back();
}

cdouble DispersionCurve::at(double f) const {
  if (!covers(f)) {
    throw OutOfRangeError(fmt::format("frequency {} Hz is outside the dispersion grid", f));
  }
  const auto it = std::lower_bound(frequency.begin(), frequency.end(), f);
  const auto hi = static_cast<std::size_t>(it - frequency.begin());
  if (hi == 0 || frequency[hi] == f) return bloch_phase[hi];
  const std::size_t lo = hi - 1;
  const double t = (f - frequency[lo]) / (frequency[hi] - frequency[lo]);
  return bloch_phase[lo] + t * (bloch_phase[hi] - bloch_phase[lo]);
}

AbcdMatrix cell_abcd(const UnitCell& cell, double frequency, const OperatingPoint& bias,
                     std::span<const CellModifier> modifiers) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw ArgumentError(fmt::format("frequency must be positive (got {})", frequency));
  }
  const double omega = kTwoPi * frequency;
  const AppliedModifiers mod = apply(modifiers, omega);
  const double z = mod.impedance_scale;
  const double l0 = taylor_nonlinearity(cell, bias).l0;

  cdouble series;
  cdouble shunt;
  if (const auto* squid = std::get_if<RfSquidCell>(&cell)) {
    // (Lg || LJ) in parallel with CJ; the product L CJ is scale invariant.
    const double cj = squid->junction.self_capacitance;
    series = kJ * omega * l0 * z / (1.0 - omega * omega * l0 * cj);
    shunt = kJ * omega * squid->ground_capacitance / z;
  } else {
    const auto& kinetic = std::get<KineticCell>(cell);
    series = kJ * omega * l0 * z;
    const cdouble finger = kJ * omega * kinetic.finger_inductance * z +
                           1.0 / (kJ * omega * 0.5 * kinetic.ground_capacitance / z);
    shunt = 2.0 / finger;
  }
  return t_section(series, shunt + mod.extra_shunt);
}

AbcdMatrix cascade(std::span<const AbcdMatrix> matrices) {
  if (matrices.empty()) throw ArgumentError("cascade of an empty list");
  AbcdMatrix total = matrices.front();
  for (std::size_t i = 1; i < matrices.size(); ++i) total = total * matrices[i];
  return total;
}

cdouble bloch_wavenumber(const AbcdMatrix& m) {
  const double det_error = std::abs(m.determinant() - 1.0);
  if (!(det_error <= 1e-6)) {
    throw InconsistentMatrixError(
        fmt::format("transfer matrix determinant deviates from 1 by {}", det_error));
  }
  const cdouble k = std::acos(m.half_trace());
  // Lossless sections have a real half-trace; folding onto Re in [0, pi],
  // Im >= 0 picks the forward-decaying branch.
  return {std::abs(k.real()), std::abs(k.imag())};
}

cdouble bloch_impedance(const AbcdMatrix& m) {
  if (std::abs(m.c) == 0.0) throw ArgumentError("Bloch impedance undefined for C = 0");
  cdouble z = std::sqrt(m.b / m.c);
  if (z.real() < 0.0) z = -z;
  return z;
}

AbcdMatrix supercell_abcd(const LineSpec& line, double frequency) {
  return supercell_abcd(line, layout_of(line), frequency);
}

DispersionCurve scan_dispersion(const LineSpec& line, std::span<const double> grid) {
  line.validate();
  if (grid.empty()) throw ArgumentError("empty frequency grid");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0) || !std::isfinite(grid[i])) {
      throw ArgumentError(fmt::format("grid frequency {} Hz is not positive", grid[i]));
    }
    if (i > 0 && !(grid[i] > grid[i - 1])) {
      throw ArgumentError("frequency grid must be strictly increasing");
    }
  }
  if (line.design_pump_frequency && grid.back() > 4.5 * *line.design_pump_frequency) {
    throw ArgumentError(fmt::format(
        "grid extends to {} Hz, beyond 1.5x the third pump harmonic ({} Hz)", grid.back(),
        4.5 * *line.design_pump_frequency));
  }

  const SupercellLayout layout = layout_of(line);
  const double n = static_cast<double>(layout.period);

  std::vector<cdouble> folded(grid.size());
  detail::parallel_for(grid.size(), [&](std::size_t i) {
    folded[i] = bloch_wavenumber(supercell_abcd(line, layout, grid[i]));
  });

  // Establish the extended-zone branch at grid[0] by walking up from a
  // frequency where the super-cell phase is certainly in the first zone.
  auto unloaded_estimate = [&](double f) {
    return n * bloch_wavenumber(cell_abcd(line.base_cell, f, line.bias)).real();
  };
  double f = grid.front();
  for (int halvings = 0; halvings < 80 && unloaded_estimate(f) > 0.25; ++halvings) f *= 0.5;

  double theta_prev = bloch_wavenumber(supercell_abcd(line, layout, f)).real();
  double theta_prev2 = theta_prev;
  double f_prev = f;
  double f_prev2 = f;
  auto advance = [&](double f_next, double r) {
    double predicted = theta_prev;
    if (f_prev > f_prev2) {
      predicted += (theta_prev - theta_prev2) * (f_next - f_prev) / (f_prev - f_prev2);
    }
    const double theta = unfold(r, theta_prev, predicted);
    theta_prev2 = theta_prev;
    f_prev2 = f_prev;
    theta_prev = theta;
    f_prev = f_next;
    return theta;
  };
  while (f < grid.front()) {
    const double estimate = std::max(unloaded_estimate(f), 0.05);
    const double next = std::min(grid.front(), f * (1.0 + 0.02 / estimate));
    if (next >= grid.front()) break;
    advance(next, bloch_wavenumber(supercell_abcd(line, layout, next)).real());
    f = next;
  }

  DispersionCurve curve;
  curve.frequency.assign(grid.begin(), grid.end());
  curve.bloch_phase.resize(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    double theta;
    if (grid[i] == f_prev) {
      theta = theta_prev;
    } else {
      theta = advance(grid[i], folded[i].real());
    }
    curve.bloch_phase[i] = {theta / n, folded[i].imag() / n};
  }
  return curve;
}

std::vector<double> log_grid(double lo, double hi, double points_per_decade) {
  if (!(lo > 0.0) || !(hi > lo) || !(points_per_decade > 0.0)) {
    throw ArgumentError("log grid needs 0 < lo < hi and a positive density");
  }
  const double decades = std::log10(hi / lo);
  const auto intervals =
      std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(decades * points_per_decade)));
  std::vector<double> grid(intervals + 1);
  for (std::size_t i = 0; i <= intervals; ++i) {
    grid[i] = lo * std::pow(10.0, decades * static_cast<double>(i) / static_cast<double>(intervals));
  }
  grid.front() = lo;
  grid.back() = hi;
  return grid;
}

std::vector<Stopband> find_stopbands(const DispersionCurve& curve, double min_attenuation) {
  if (curve.size() == 0) throw ArgumentError("empty dispersion curve");
  const auto& f = curve.frequency;
  const std::size_t count = curve.size();
  std::vector<Stopband> bands;
  std::size_t i = 0;
  while (i < count) {
    if (!(curve.bloch_phase[i].imag() > min_attenuation)) {
      ++i;
      continue;
    }
    std::size_t j = i;
    double peak = curve.bloch_phase[i].imag();
    while (j + 1 < count && curve.bloch_phase[j + 1].imag() > min_attenuation) {
      ++j;
      peak = std::max(peak, curve.bloch_phase[j].imag());
    }
    // Edges sit halfway to the neighbouring passband samples.
    Stopband band;
    band.lower = i > 0 ? 0.5 * (f[i - 1] + f[i]) : f[i];
    band.upper = j + 1 < count ? 0.5 * (f[j] + f[j + 1]) : f[j];
    band.max_attenuation = peak;
    if (band.upper > band.lower) bands.push_back(band);
    i = j + 1;
  }
  return bands;
}

double idler_frequency(double f_pump, double f_signal, MixingMode mode) {
  const double idler =
      mode == MixingMode::ThreeWave ? f_pump - f_signal : 2.0 * f_pump - f_signal;
  if (!(idler > 0.0)) {
    throw OutOfRangeError(fmt::format("idler frequency {} Hz is not positive (fp={}, fs={})",
                                      idler, f_pump, f_signal));
  }
  return idler;
}

double phase_mismatch(const DispersionCurve& curve, double f_pump, double f_signal,
                      MixingMode mode) {
  const double f_idler = idler_frequency(f_pump, f_signal, mode);
  for (double f : {f_pump, f_signal, f_idler}) {
    if (!curve.covers(f)) {
      throw OutOfRangeError(fmt::format("tone at {} Hz lies outside the dispersion grid", f));
    }
  }
  const double kp = curve.at(f_pump).real();
  const double ks = curve.at(f_signal).real();
  const double ki = curve.at(f_idler).real();
  const double pump_order = mode == MixingMode::ThreeWave ? 1.0 : 2.0;
  return pump_order * kp - ks - ki;
}

void write_csv(std::ostream& out, const DispersionCurve& curve) {
  out << "frequency_hz,re_ka,im_ka\n";
  for (std::size_t i = 0; i < curve.size(); ++i) {
    out << fmt::format("{:.15g},{:.15g},{:.15g}\n", curve.frequency[i],
                       curve.bloch_phase[i].real(), curve.bloch_phase[i].imag());
  }
}

void write_csv(std::ostream& out, std::span<const Stopband> stopbands) {
  out << "lower_hz,upper_hz,max_attenuation_np\n";
  for (const auto& b : stopbands) {
    out << fmt::format("{:.15g},{:.15g},{:.15g}\n", b.lower, b.upper, b.max_attenuation);
  }
}

}  // namespace twpa
