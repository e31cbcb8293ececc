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

#include "oracles.hpp"

#include <array>
#include <cmath>
#include <numbers>

namespace twpa::testing {

namespace {

using Matrix = std::array<std::array<cdouble, 2>, 2>;

Matrix multiply(const Matrix& l, const Matrix& r) {
  Matrix out{};
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      out[i][j] = l[i][0] * r[0][j] + l[i][1] * r[1][j];
    }
  }
  return out;
}

Matrix series(cdouble z) { return {{{1.0, z}, {0.0, 1.0}}}; }
Matrix shunt(cdouble y) { return {{{1.0, 0.0}, {y, 1.0}}}; }

Matrix cell_matrix(const LineSpec& line, double f, std::size_t index) {
  const cdouble j{0.0, 1.0};
  const double w = 2.0 * std::numbers::pi * f;
  double z = 1.0;
  cdouble extra{0.0, 0.0};
  for (const auto& m : line.modifiers_at(index)) {
    if (const auto* s = std::get_if<ImpedanceScale>(&m)) {
      z *= s->factor;
    } else {
      const auto& r = std::get<ShuntResonator>(m);
      extra += 1.0 / (j * w * r.inductance + 1.0 / (j * w * r.capacitance));
    }
  }
  cdouble z_series;
  cdouble y_shunt;
  if (const auto* sq = std::get_if<RfSquidCell>(&line.base_cell)) {
    const double phase = std::get<PhaseBias>(line.bias).radians;
    const double lj = squid_effective_inductance(*sq, phase) * z;
    const double cj = sq->junction.self_capacitance / z;
    // Inductor and junction capacitance in parallel.
    z_series = 1.0 / (1.0 / (j * w * lj) + j * w * cj);
    y_shunt = j * w * sq->ground_capacitance / z;
  } else {
    const auto& k = std::get<KineticCell>(line.base_cell);
    const double current = std::get<CurrentBias>(line.bias).amperes;
    z_series = j * w * kinetic_inductance(k, current) * z;
    // Two fingers, each Lf in series with C/2.
    const cdouble finger = j * w * k.finger_inductance * z + 1.0 / (j * w * 0.5 * k.ground_capacitance / z);
    y_shunt = 1.0 / finger + 1.0 / finger;
  }
  return multiply(multiply(series(0.5 * z_series), shunt(y_shunt + extra)), series(0.5 * z_series));
}

}  // namespace

cdouble brute_force_bloch_phase(const LineSpec& line, double frequency) {
  const std::size_t period = line.supercell_period();
  Matrix total{{{1.0, 0.0}, {0.0, 1.0}}};
  for (std::size_t i = 0; i < period; ++i) total = multiply(total, cell_matrix(line, frequency, i));
  const cdouble k = std::acos(0.5 * (total[0][0] + total[1][1]));
  return cdouble{std::abs(k.real()), std::abs(k.imag())} / static_cast<double>(period);
}

std::vector<ModeState> rk4_cme(const ModeState& initial, const CmeCoefficients& c,
                               std::size_t n_cells, std::size_t steps_per_cell,
                               std::span<const std::int8_t> signs) {
  const cdouble j{0.0, 1.0};
  using V = std::array<cdouble, 3>;
  auto rhs = [&](const V& a, double s) {
    std::array<double, 3> n{std::norm(a[0]), std::norm(a[1]), std::norm(a[2])};
    std::array<double, 3> rot{};
    for (int p = 0; p < 3; ++p) {
      for (int q = 0; q < 3; ++q) rot[p] += c.kerr[p][q] * n[q];
    }
    const double g = s * c.coupling;
    V d;
    if (c.mode == MixingMode::ThreeWave) {
      d[0] = -j * rot[0] * a[0] - j * g * a[1] * a[2];
      d[1] = j * (0.5 * c.delta_k - rot[1]) * a[1] - j * g * a[0] * std::conj(a[2]);
      d[2] = j * (0.5 * c.delta_k - rot[2]) * a[2] - j * g * a[0] * std::conj(a[1]);
    } else {
      d[0] = -j * rot[0] * a[0] - 2.0 * j * g * std::conj(a[0]) * a[1] * a[2];
      d[1] = j * (0.5 * c.delta_k - rot[1]) * a[1] - j * g * a[0] * a[0] * std::conj(a[2]);
      d[2] = j * (0.5 * c.delta_k - rot[2]) * a[2] - j * g * a[0] * a[0] * std::conj(a[1]);
    }
    return d;
  };
  auto add = [](const V& a, const V& b, double h) {
    return V{a[0] + h * b[0], a[1] + h * b[1], a[2] + h * b[2]};
  };
  std::vector<ModeState> out{initial};
  V y{initial.pump, initial.signal, initial.idler};
  const double h = 1.0 / static_cast<double>(steps_per_cell);
  for (std::size_t cell = 0; cell < n_cells; ++cell) {
    const double s = signs.empty() ? 1.0 : signs[cell];
    for (std::size_t k = 0; k < steps_per_cell; ++k) {
      const V k1 = rhs(y, s);
      const V k2 = rhs(add(y, k1, 0.5 * h), s);
      const V k3 = rhs(add(y, k2, 0.5 * h), s);
      const V k4 = rhs(add(y, k3, h), s);
      for (int p = 0; p < 3; ++p) y[p] += h / 6.0 * (k1[p] + 2.0 * k2[p] + 2.0 * k3[p] + k4[p]);
    }
    out.push_back({y[0], y[1], y[2]});
  }
  return out;
}

double phase_walk_coherence_length(double delta_k) {
  // Walk in fine sub-steps so the answer is not quantised to whole cells.
  constexpr int kSub = 100000;
  double phase = 0.0;
  long steps = 0;
  while (phase < std::numbers::pi) {
    phase += std::abs(delta_k) / kSub;
    ++steps;
  }
  return static_cast<double>(steps) / kSub;
}

double nonlinear_phase_sum(std::span<const std::int8_t> signs, double delta_k) {
  cdouble sum{0.0, 0.0};
  for (std::size_t x = 0; x < signs.size(); ++x) {
    sum += static_cast<double>(signs[x]) * std::polar(1.0, delta_k * static_cast<double>(x));
  }
  return std::abs(sum);
}

}  // namespace twpa::testing
