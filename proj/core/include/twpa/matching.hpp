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

// Phase-matching structures: sign-modulated nonlinearity (QPM), resonator
// loading (RPM) and the periodically loaded kinetic-inductance line.

#ifndef TWPA_MATCHING_HPP
#define TWPA_MATCHING_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "twpa/dispersion.hpp"

namespace twpa {

struct QpmProfile {
  std::vector<std::int8_t> signs;
  double coherence_length = 0.0;  // cells, unrounded
  std::size_t block_length = 0;   // cells
};

/// pi / |dk|. Throws NoMismatchError for dk == 0.
double coherence_length(double delta_k);

/// Alternating blocks of round(L_c) cells, the first one positive.
QpmProfile qpm_sign_profile(double delta_k, std::size_t n_cells);

/// One loading slot of a KITWPA pattern.
struct LoadingSlot {
  double impedance_scale = 1.0;
  double length_scale = 1.0;
  double width_cells = 0.0;  // loaded length, may be fractional
};

enum class PlanKind { Kitwpa, Rpm };

struct LoadingPlan {
  PlanKind kind = PlanKind::Kitwpa;
  /// Cells between consecutive loadings.
  std::size_t loading_period = 1;
  /// Loadings before the pattern repeats.
  std::size_t pattern_period = 1;
  std::vector<LoadingSlot> slots;            // Kitwpa
  std::optional<ShuntResonator> resonator;   // Rpm
  /// Frequency the plan was designed around (pump or gap centre).
  double design_frequency = 0.0;
  /// Modifiers of one full pattern, positions relative to its first cell.
  std::vector<Loading> pattern;

  std::size_t pattern_cells() const { return loading_period * pattern_period; }
  void validate() const;
};

/// Copy of `line` with the plan's pattern tiled over every cell.
LineSpec apply_plan(const LineSpec& line, const LoadingPlan& plan);

struct RpmOptions {
  /// Resonator capacitance as a fraction of the ground capacitance it replaces
  /// per spacing (Cr = fraction * spacing * Cg).
  double coupling_fraction = 0.1;
  /// Smallest acceptable gap width relative to f_gap.
  double min_relative_gap = 1e-3;
};

/// Series-LC shunt resonators every `spacing` cells, tuned so the loaded line
/// has a stopband containing `f_gap`.
LoadingPlan rpm_plan(double f_gap, const LineSpec& line, std::size_t spacing,
                     const RpmOptions& options = {});

struct KitwpaOptions {
  double impedance_scale = 0.8;
  /// Length factor of every third loading; 1 disables the modification.
  double third_length_scale = 1.5;
};

/// Loadings every sixth of a wavelength at f_pump (1 + detuning), every third
/// one length-scaled. The base width is tuned so the pattern has no
/// second-order Bragg gap, leaving a narrow band near f_pump and a wide one
/// near 3 f_pump.
LoadingPlan kitwpa_plan(double f_pump, double detuning, const LineSpec& line,
                        const KitwpaOptions& options = {});

nlohmann::json to_json(const QpmProfile& profile);
nlohmann::json to_json(const LoadingPlan& plan);
LoadingPlan loading_plan_from_json(const nlohmann::json& j);

std::string to_string(PlanKind kind);

}  // namespace twpa

#endif  // TWPA_MATCHING_HPP
