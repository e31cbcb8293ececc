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

// Bloch dispersion of periodically loaded lines from 2x2 transfer matrices.
//
// A line is a chain of identical unit cells, some of which carry a modifier
// (impedance rescaling or a shunt resonator). The smallest repeating block of
// cells, the super-cell, is cascaded into one ABCD matrix whose half-trace
// gives the Floquet phase. Phases are reported per cell, unfolded to the
// extended zone.

#ifndef TWPA_DISPERSION_HPP
#define TWPA_DISPERSION_HPP

#include <complex>
#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "twpa/circuit_model.hpp"

namespace twpa {

using cdouble = std::complex<double>;

inline constexpr double kDefaultStopbandThreshold = 1e-6;  // nepers per cell
inline constexpr double kDefaultPointsPerDecade = 2001.0;

struct AbcdMatrix {
  cdouble a{1.0, 0.0};
  cdouble b{0.0, 0.0};
  cdouble c{0.0, 0.0};
  cdouble d{1.0, 0.0};

  static AbcdMatrix identity() { return {}; }
  static AbcdMatrix series(cdouble impedance) { return {1.0, impedance, 0.0, 1.0}; }
  static AbcdMatrix shunt(cdouble admittance) { return {1.0, 0.0, admittance, 1.0}; }

  cdouble determinant() const { return a * d - b * c; }
  cdouble half_trace() const { return 0.5 * (a + d); }
  /// Same network traversed from the other port.
  AbcdMatrix mirrored() const { return {d, b, c, a}; }

  friend AbcdMatrix operator*(const AbcdMatrix& l, const AbcdMatrix& r) {
    return {l.a * r.a + l.b * r.c, l.a * r.b + l.b * r.d,
            l.c * r.a + l.d * r.c, l.c * r.b + l.d * r.d};
  }
};

/// Scales every reactive element so the cell impedance changes by `factor`
/// while its phase velocity is unchanged (L -> L z, C -> C / z).
struct ImpedanceScale {
  double factor = 1.0;
  friend bool operator==(const ImpedanceScale&, const ImpedanceScale&) = default;
};

/// Series LC branch from the cell's shunt node to ground.
struct ShuntResonator {
  double inductance = 0.0;   // H
  double capacitance = 0.0;  // F
  double resonance_frequency() const;
  friend bool operator==(const ShuntResonator&, const ShuntResonator&) = default;
};

using CellModifier = std::variant<ImpedanceScale, ShuntResonator>;

struct Loading {
  std::size_t position = 0;
  CellModifier modifier;
  friend bool operator==(const Loading&, const Loading&) = default;
};

struct LineSpec {
  UnitCell base_cell = prototype_squid_cell();
  std::size_t n_cells = 990;
  double cell_length = 0.0;  // m, informational
  std::vector<Loading> loadings;
  OperatingPoint bias = PhaseBias{0.0};
  /// Pump frequency the line is designed for; bounds scan grids when set.
  std::optional<double> design_pump_frequency;

  void validate() const;
  /// Modifiers attached to cell `index`, in insertion order.
  std::vector<CellModifier> modifiers_at(std::size_t index) const;
  /// Smallest N such that the loading pattern of the whole line is N-periodic.
  std::size_t supercell_period() const;
};

struct DispersionCurve {
  std::vector<double> frequency;     // Hz, strictly increasing
  std::vector<cdouble> bloch_phase;  // rad per cell; Im >= 0

  std::size_t size() const { return frequency.size(); }
  /// Linear interpolation. Throws OutOfRangeError outside the grid.
  cdouble at(double f) const;
  bool covers(double f) const;
};

struct Stopband {
  double lower = 0.0;            // Hz
  double upper = 0.0;            // Hz
  double max_attenuation = 0.0;  // nepers per cell
  double width() const { return upper - lower; }
  double center() const { return 0.5 * (lower + upper); }
  bool contains(double f) const { return f > lower && f < upper; }
};

enum class MixingMode { ThreeWave, FourWave };

/// ABCD matrix of one cell at `frequency`, linearised at `bias`, as a
/// symmetric T-section (half series element, shunt, half series element).
AbcdMatrix cell_abcd(const UnitCell& cell, double frequency, const OperatingPoint& bias,
                     std::span<const CellModifier> modifiers = {});

/// Ordered product m[0] * m[1] * ... Throws ArgumentError when empty.
AbcdMatrix cascade(std::span<const AbcdMatrix> matrices);

/// Floquet phase k a = arccos((A + D) / 2) with Re in [0, pi] and Im >= 0.
/// Throws InconsistentMatrixError when |det - 1| > 1e-6.
cdouble bloch_wavenumber(const AbcdMatrix& m);

/// Bloch impedance sqrt(B / C) of a symmetric section.
cdouble bloch_impedance(const AbcdMatrix& m);

/// Transfer matrix of the super-cell of `line` at `frequency`.
AbcdMatrix supercell_abcd(const LineSpec& line, double frequency);

DispersionCurve scan_dispersion(const LineSpec& line, std::span<const double> grid);

/// Logarithmic grid [lo, hi] with the given density; endpoints included.
std::vector<double> log_grid(double lo, double hi,
                             double points_per_decade = kDefaultPointsPerDecade);

std::vector<Stopband> find_stopbands(const DispersionCurve& curve,
                                     double min_attenuation = kDefaultStopbandThreshold);

/// fp - fs (three-wave) or 2 fp - fs (four-wave). Throws OutOfRangeError when
/// the result is not positive.
double idler_frequency(double f_pump, double f_signal, MixingMode mode);

/// k_p - k_s - k_i (three-wave) or 2 k_p - k_s - k_i (four-wave), real parts,
/// rad per cell.
double phase_mismatch(const DispersionCurve& curve, double f_pump, double f_signal,
                      MixingMode mode);

/// Columns frequency_hz,re_ka,im_ka.
void write_csv(std::ostream& out, const DispersionCurve& curve);
void write_csv(std::ostream& out, std::span<const Stopband> stopbands);

}  // namespace twpa

#endif  // TWPA_DISPERSION_HPP
