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

// Unit cells of the two nonlinear line families and their linear and
// nonlinear per-cell constants. All quantities are SI.

#ifndef TWPA_CIRCUIT_MODEL_HPP
#define TWPA_CIRCUIT_MODEL_HPP

#include <string>
#include <variant>

namespace twpa {

struct JosephsonJunction {
  double critical_current = 0.0;   // A
  double self_capacitance = 0.0;   // F
};

/// One rf-SQUID of the Josephson line: a geometric inductance in parallel with
/// a junction, shunted to ground by `ground_capacitance`.
struct RfSquidCell {
  double geometric_inductance = 0.0;  // H
  JosephsonJunction junction;
  double ground_capacitance = 0.0;    // F

  /// beta_L = 2 pi Lg Ic / Phi0. Below one the loop is nonhysteretic.
  double screening_parameter() const;
};

/// Lumped kinetic-inductance cell: series inductance Ld and two finger
/// resonators, each an inductance Lf in series with C/2 to ground.
/// `scale_current` sets the quadratic nonlinearity L(I) = L0 (1 + (I/I*)^2).
struct KineticCell {
  double series_inductance = 0.0;  // H
  double finger_inductance = 0.0;  // H
  double ground_capacitance = 0.0; // F (total C of both fingers)
  double scale_current = 0.0;      // A
};

using UnitCell = std::variant<RfSquidCell, KineticCell>;

/// Junction phase at the operating point of an rf-SQUID line.
struct PhaseBias {
  double radians = 0.0;
};

/// DC current through a kinetic-inductance line.
struct CurrentBias {
  double amperes = 0.0;
};

using OperatingPoint = std::variant<PhaseBias, CurrentBias>;

/// Linear map from a DC bias current to junction phase. The transfer and the
/// offset (e.g. from trapped flux) are device calibration inputs.
struct BiasCalibration {
  double radians_per_ampere = 0.0;
  double offset_amperes = 0.0;

  PhaseBias phase_for(double dc_current) const {
    return PhaseBias{radians_per_ampere * (dc_current - offset_amperes)};
  }
};

/// Second-order expansion L(I_b + i) ~= l0 + c1 i + c2 i^2 of the differential
/// cell inductance around the bias current I_b.
struct NonlinearExpansion {
  double l0 = 0.0;  // H
  double c1 = 0.0;  // H / A
  double c2 = 0.0;  // H / A^2

  double inductance_at(double delta_current) const {
    return l0 + (c1 + c2 * delta_current) * delta_current;
  }
};

void validate(const JosephsonJunction& jj);
void validate(const RfSquidCell& cell);
void validate(const KineticCell& cell);
void validate(const UnitCell& cell);

/// Phi0 / (2 pi Ic cos(phase)). Throws SingularBiasError for |phase| >= pi/2.
double josephson_inductance(const JosephsonJunction& jj, double phase);

/// Differential inductance dPhi/dI of the rf-SQUID at junction phase `phase`:
/// Lg in parallel with LJ(phase).
double squid_effective_inductance(const RfSquidCell& cell, double phase);

/// Current through the cell when the junction sits at `phase`:
/// I = (Phi0 / 2 pi) phase / Lg + Ic sin(phase).
double squid_cell_current(const RfSquidCell& cell, double phase);

/// Inverse of squid_cell_current on the inductive branch.
double squid_phase_for_current(const RfSquidCell& cell, double current);

/// L0 (1 + (I/I*)^2) with L0 the series inductance.
double kinetic_inductance(const KineticCell& cell, double current);

NonlinearExpansion taylor_nonlinearity(const RfSquidCell& cell, PhaseBias bias);
NonlinearExpansion taylor_nonlinearity(const KineticCell& cell, CurrentBias bias);
/// Dispatches on the cell family; throws ArgumentError when the bias kind
/// does not match the cell.
NonlinearExpansion taylor_nonlinearity(const UnitCell& cell, const OperatingPoint& bias);

/// sqrt(l / c).
double characteristic_impedance(double l_cell, double c_cell);

/// 1 / (2 pi sqrt(l c)).
double plasma_frequency(double l, double c);

/// Cell parameters of the 990-cell rf-SQUID prototype: Cg = 13.0 fF,
/// Lg = 45 pH, CJ = 25.8 fF, Ic = 1.5 uA.
RfSquidCell prototype_squid_cell();

/// 50-ohm lumped kinetic cell used as the default for KITWPA plans.
KineticCell default_kinetic_cell();

/// Zero bias of the kind matching the cell family.
OperatingPoint zero_bias(const UnitCell& cell);

std::string describe(const OperatingPoint& bias);

}  // namespace twpa

#endif  // TWPA_CIRCUIT_MODEL_HPP
