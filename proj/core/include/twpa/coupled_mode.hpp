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

// Spatial coupled-mode equations for pump, signal and idler.
//
// Amplitudes are photon-flux normalised (|a|^2 in photons per second) and
// expressed in a frame where the linear mismatch is split evenly between
// signal and idler, so the equations are autonomous:
//
//   three-wave:
//     a_p' = -i (G n)_p a_p - i s g a_s a_i
//     a_s' =  i dk/2 a_s - i (G n)_s a_s - i s g a_p conj(a_i)
//     a_i' =  i dk/2 a_i - i (G n)_i a_i - i s g a_p conj(a_s)
//   four-wave:
//     a_p' = -i (G n)_p a_p - 2 i s g conj(a_p) a_s a_i
//     a_s' =  i dk/2 a_s - i (G n)_s a_s - i s g a_p^2 conj(a_i)
//     a_i' =  i dk/2 a_i - i (G n)_i a_i - i s g a_p^2 conj(a_s)
//
// with n the photon fluxes, G the symmetric Kerr matrix, s = +/-1 the local
// sign of the nonlinearity and the derivative taken per cell. Both systems
// follow from a Hamiltonian, so the Manley-Rowe relations hold exactly.

#ifndef TWPA_COUPLED_MODE_HPP
#define TWPA_COUPLED_MODE_HPP

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "twpa/dispersion.hpp"

namespace twpa {

inline constexpr double kDefaultCmeTolerance = 1e-9;

struct ModeState {
  cdouble pump{0.0, 0.0};
  cdouble signal{0.0, 0.0};
  cdouble idler{0.0, 0.0};

  double pump_flux() const { return std::norm(pump); }
  double signal_flux() const { return std::norm(signal); }
  double idler_flux() const { return std::norm(idler); }
};

struct CmeCoefficients {
  MixingMode mode = MixingMode::ThreeWave;
  /// g3 in 1/(cell sqrt(photon/s)) or g4 in 1/(cell photon/s).
  double coupling = 0.0;
  /// Linear phase mismatch, rad per cell.
  double delta_k = 0.0;
  /// Symmetric Kerr matrix (pump, signal, idler), rad per cell per photon/s.
  /// Tone j advances its phase at sum_k kerr[j][k] n_k.
  std::array<std::array<double, 3>, 3> kerr{};
  /// Input pump photon flux used by the power-dependent quantities below.
  double pump_flux = 0.0;

  /// g3 |a_p| (three-wave) or g4 |a_p|^2 (four-wave), per cell.
  double parametric_rate() const;
  /// Linear mismatch plus the pump-induced self/cross phase modulation.
  double effective_delta_k() const;
  /// Value of delta_k that cancels the pump-induced mismatch at pump_flux.
  double phase_matched_delta_k() const;
};

/// Power in dBm to watts.
double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);
/// Photon flux P / (h f) of a tone of power `dbm` at `frequency`.
double photon_flux(double dbm, double frequency);

/// Coupling constants for the line at its bias from the Taylor expansion of
/// the cell inductance. Throws StopbandPlacementError when a tone sits in a
/// stopband of `curve`.
CmeCoefficients cme_coefficients(const LineSpec& line, const DispersionCurve& curve,
                                 double f_pump, double f_signal, double pump_amplitude,
                                 MixingMode mode);

/// Integrates over `n_cells` cells and returns n_cells + 1 states, one per
/// cell boundary. A non-empty `sign_profile` (length n_cells, entries +/-1)
/// sets the sign of the parametric coupling in each cell.
std::vector<ModeState> integrate_cme(const ModeState& initial, const CmeCoefficients& coeffs,
                                     std::size_t n_cells,
                                     double tolerance = kDefaultCmeTolerance,
                                     std::span<const std::int8_t> sign_profile = {});

/// 1 + (g/kappa)^2 sinh^2(kappa L), kappa^2 = g^2 - (dk/2)^2, continued to
/// the oscillatory branch when kappa^2 < 0.
double undepleted_pump_gain(double g, double delta_k, double length_cells);

enum class PhaseMatching {
  /// Use the mismatch of the line's dispersion as computed.
  Dispersion,
  /// Replace the linear mismatch by the value cancelling the pump-induced
  /// phase modulation at each pump power (ideal dispersion engineering).
  Ideal,
};

struct SweepOptions {
  PhaseMatching phase_matching = PhaseMatching::Dispersion;
  /// Optional per-cell sign of the nonlinearity (quasi-phase matching).
  std::vector<std::int8_t> sign_profile;
  double signal_power_dbm = -130.0;
  double tolerance = kDefaultCmeTolerance;
  double points_per_decade = kDefaultPointsPerDecade;
  std::size_t threads = 0;  // 0: hardware concurrency
  std::string line_id = "line";
};

struct SweepFailure {
  double pump_dbm = 0.0;
  double signal_hz = 0.0;
  std::string reason;
};

struct GainProfile {
  std::vector<double> pump_dbm;
  std::vector<double> signal_hz;
  /// Row-major [pump][signal]; empty where the point failed.
  std::vector<std::optional<double>> gain_db;
  std::vector<SweepFailure> failures;

  MixingMode mode = MixingMode::FourWave;
  double pump_frequency = 0.0;
  std::string bias;
  std::string line_id;

  const std::optional<double>& gain(std::size_t pump_index, std::size_t signal_index) const {
    return gain_db[pump_index * signal_hz.size() + signal_index];
  }
};

GainProfile sweep_gain(const LineSpec& line, double f_pump, std::span<const double> pump_dbm,
                       std::span<const double> signal_hz, MixingMode mode,
                       const SweepOptions& options = {});

/// max - min gain over signal frequencies in [band_lo, band_hi] at the pump
/// power `pump_dbm`. Throws ArgumentError when no sample lies in the band.
double ripple_metric(const GainProfile& profile, double pump_dbm, double band_lo,
                     double band_hi);

struct GainSummary {
  double max_gain_db = 0.0;
  double pump_dbm_at_max = 0.0;
  double signal_hz_at_max = 0.0;
  double bandwidth_3db_hz = 0.0;
  double ripple_db = 0.0;
  std::size_t missing_points = 0;
};

GainSummary summarize(const GainProfile& profile);

/// Columns pump_dbm,signal_hz,gain_db; failed points leave gain_db empty.
void write_csv(std::ostream& out, const GainProfile& profile);
nlohmann::json to_json(const GainSummary& summary);

std::string to_string(MixingMode mode);

}  // namespace twpa

#endif  // TWPA_COUPLED_MODE_HPP
