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

// Receiver noise: quantum limits, Friis cascades and SNR gains.

#ifndef TWPA_NOISE_BUDGET_HPP
#define TWPA_NOISE_BUDGET_HPP

#include <iosfwd>
#include <span>
#include <string>

namespace twpa {

struct NoiseStage {
  std::string label;
  double gain_db = 0.0;
  double noise_temperature = 0.0;  // K
};

/// h f / kB, the added-noise limit of a phase-insensitive amplifier.
double quantum_limit_temperature(double frequency);

/// h f / (2 kB), the half-photon convention, reported alongside.
double half_photon_temperature(double frequency);

/// T1 + T2 / G1 + T3 / (G1 G2) + ...
double friis_cascade(std::span<const NoiseStage> stages);

/// 10 log10(t_before / t_after).
double snr_improvement(double t_before, double t_after);

/// Per-stage contribution to the input-referred system temperature.
void write_budget_table(std::ostream& out, std::span<const NoiseStage> stages);
void write_budget_csv(std::ostream& out, std::span<const NoiseStage> stages);

}  // namespace twpa

#endif  // TWPA_NOISE_BUDGET_HPP
