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

#include "twpa/circuit_model.hpp"

#include <cmath>

#include <fmt/format.h>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"

namespace twpa {

namespace {

using constants::kFluxQuantum;
using constants::kPi;

constexpr double kHalfPi = kPi / 2.0;

void require_positive(double value, const char* name) {
  if (!(value > 0.0) || !std::isfinite(value)) {
    throw ArgumentError(fmt::format("{} must be positive and finite (got {})", name, value));
  }
}

void require_inductive_branch(double phase) {
  if (!std::isfinite(phase) || std::abs(phase) >= kHalfPi) {
    throw SingularBiasError(
        fmt::format("junction phase {} rad is outside the inductive branch |phase| < pi/2", phase));
  }
}

double bare_josephson_inductance(double critical_current) {
  return kFluxQuantum / (2.0 * kPi * critical_current);
}

}  // namespace

double RfSquidCell::screening_parameter() const {
  return 2.0 * kPi * geometric_inductance * junction.critical_current / kFluxQuantum;
}

void validate(const JosephsonJunction& jj) {
  require_positive(jj.critical_current, "critical_current");
  require_positive(jj.self_capacitance, "self_capacitance");
}

void validate(const RfSquidCell& cell) {
  require_positive(cell.geometric_inductance, "geometric_inductance");
  require_positive(cell.ground_capacitance, "ground_capacitance");
  validate(cell.junction);
  const double beta = cell.screening_parameter();
  if (beta >= 1.0) {
    throw ArgumentError(fmt::format("rf-SQUID is hysteretic (beta_L = {} >= 1)", beta));
  }
}

void validate(const KineticCell& cell) {
  require_positive(cell.series_inductance, "series_inductance");
  require_positive(cell.finger_inductance, "finger_inductance");
  require_positive(cell.ground_capacitance, "ground_capacitance");
  require_positive(cell.scale_current, "scale_current");
}

void validate(const UnitCell& cell) {
  std::visit([](const auto& c) { validate(c); }, cell);
}

double josephson_inductance(const JosephsonJunction& jj, double phase) {
  validate(jj);
  require_inductive_branch(phase);
  return bare_josephson_inductance(jj.critical_current) / std::cos(phase);
}

double squid_effective_inductance(const RfSquidCell& cell, double phase) {
  validate(cell);
  const double lj = josephson_inductance(cell.junction, phase);
  const double lg = cell.geometric_inductance;
  return lg * lj / (lg + lj);
}

double squid_cell_current(const RfSquidCell& cell, double phase) {
  validate(cell);
  require_inductive_branch(phase);
  return kFluxQuantum / (2.0 * kPi) * phase / cell.geometric_inductance +
         cell.junction.critical_current * std::sin(phase);
}

double squid_phase_for_current(const RfSquidCell& cell, double current) {
  validate(cell);
  const double limit = squid_cell_current(cell, std::nextafter(kHalfPi, 0.0));
  if (!std::isfinite(current) || std::abs(current) >= limit) {
    throw SingularBiasError(fmt::format(
        "cell current {} A drives the junction beyond the inductive branch (|I| < {} A)",
        current, limit));
  }
  // I(phase) is strictly increasing for beta_L < 1; Newton with a bisection fallback.
  double lo = -kHalfPi;
  double hi = kHalfPi;
  double phase = current / limit * kHalfPi;
  for (int iter = 0; iter < 200; ++iter) {
    const double residual = squid_cell_current(cell, phase) - current;
    if (residual > 0.0) {
      hi = phase;
    } else {
      lo = phase;
    }
    const double slope = kFluxQuantum / (2.0 * kPi) / squid_effective_inductance(cell, phase);
    double next = phase - residual / slope;
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (std::abs(next - phase) <= 1e-15 * (1.0 + std::abs(phase))) return next;
    phase = next;
  }
  return phase;
}

double kinetic_inductance(const KineticCell& cell, double current) {
  validate(cell);
  const double ratio = current / cell.scale_current;
  return cell.series_inductance * (1.0 + ratio * ratio);
}

// With y(phase) = 1/Lg + cos(phase)/LJ0 the cell inductance is L = 1/y and
// dI/dphase = y / K, K = 2 pi / Phi0. Chain rule on L(phase(I)) gives
//   dL/dI     = -K y' / y^3
//   d2L/dI2   = -K^2 (y'' / y^4 - 3 y'^2 / y^5)
NonlinearExpansion taylor_nonlinearity(const RfSquidCell& cell, PhaseBias bias) {
  validate(cell);
  require_inductive_branch(bias.radians);
  const double k = 2.0 * kPi / kFluxQuantum;
  const double lj0 = bare_josephson_inductance(cell.junction.critical_current);
  const double y = 1.0 / cell.geometric_inductance + std::cos(bias.radians) / lj0;
  const double dy = -std::sin(bias.radians) / lj0;
  const double d2y = -std::cos(bias.radians) / lj0;
  NonlinearExpansion out;
  out.l0 = 1.0 / y;
  out.c1 = -k * dy / (y * y * y);
  out.c2 = -0.5 * k * k * (d2y / std::pow(y, 4) - 3.0 * dy * dy / std::pow(y, 5));
  return out;
}

NonlinearExpansion taylor_nonlinearity(const KineticCell& cell, CurrentBias bias) {
  validate(cell);
  if (!std::isfinite(bias.amperes) || std::abs(bias.amperes) >= cell.scale_current) {
    throw SingularBiasError(fmt::format("DC current {} A is not below the scale current {} A",
                                        bias.amperes, cell.scale_current));
  }
  const double l0 = cell.series_inductance;
  const double istar2 = cell.scale_current * cell.scale_current;
  NonlinearExpansion out;
  out.l0 = l0 * (1.0 + bias.amperes * bias.amperes / istar2);
  out.c1 = 2.0 * l0 * bias.amperes / istar2;
  out.c2 = l0 / istar2;
  return out;
}

NonlinearExpansion taylor_nonlinearity(const UnitCell& cell, const OperatingPoint& bias) {
  if (const auto* squid = std::get_if<RfSquidCell>(&cell)) {
    if (const auto* phase = std::get_if<PhaseBias>(&bias)) return taylor_nonlinearity(*squid, *phase);
    throw ArgumentError("rf-SQUID cells are biased by a junction phase, not a current");
  }
  const auto& kinetic = std::get<KineticCell>(cell);
  if (const auto* current = std::get_if<CurrentBias>(&bias)) {
    return taylor_nonlinearity(kinetic, *current);
  }
  throw ArgumentError("kinetic-inductance cells are biased by a DC current, not a phase");
}

double characteristic_impedance(double l_cell, double c_cell) {
  require_positive(l_cell, "inductance");
  require_positive(c_cell, "capacitance");
  return std::sqrt(l_cell / c_cell);
}

double plasma_frequency(double l, double c) {
  require_positive(l, "inductance");
  require_positive(c, "capacitance");
  return 1.0 / (2.0 * kPi * std::sqrt(l * c));
}

RfSquidCell prototype_squid_cell() {
  RfSquidCell cell;
  cell.geometric_inductance = 45e-12;
  cell.junction.critical_current = 1.5e-6;
  cell.junction.self_capacitance = 25.8e-15;
  cell.ground_capacitance = 13.0e-15;
  return cell;
}

KineticCell default_kinetic_cell() {
  KineticCell cell;
  cell.series_inductance = 50e-12;
  cell.finger_inductance = 10e-12;
  cell.ground_capacitance = 20e-15;
  cell.scale_current = 1e-3;
  return cell;
}

OperatingPoint zero_bias(const UnitCell& cell) {
  if (std::holds_alternative<RfSquidCell>(cell)) return PhaseBias{0.0};
  return CurrentBias{0.0};
}

std::string describe(const OperatingPoint& bias) {
  if (const auto* phase = std::get_if<PhaseBias>(&bias)) {
    return fmt::format("phase={:.6g} rad", phase->radians);
  }
  return fmt::format("current={:.6g} A", std::get<CurrentBias>(bias).amperes);
}

}  // namespace twpa
