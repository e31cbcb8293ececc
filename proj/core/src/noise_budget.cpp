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

#include "twpa/noise_budget.hpp"

#include <cmath>
#include <ostream>

#include <fmt/format.h>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"

namespace twpa {

namespace {

void check_stage(const NoiseStage& s) {
  if (!std::isfinite(s.gain_db)) {
    throw ArgumentError(fmt::format("stage '{}' has a non-finite gain", s.label));
  }
  if (!(s.noise_temperature >= 0.0) || !std::isfinite(s.noise_temperature)) {
    throw ArgumentError(
        fmt::format("stage '{}' needs a non-negative noise temperature", s.label));
  }
}

double linear(double db) { return std::pow(10.0, db / 10.0); }

}  // namespace

double quantum_limit_temperature(double frequency) {
  if (!(frequency > 0.0) || !std::isfinite(frequency)) {
    throw ArgumentError(fmt::format("frequency must be positive (got {})", frequency));
  }
  return constants::kPlanck * frequency / constants::kBoltzmann;
}

double half_photon_temperature(double frequency) {
  return 0.5 * quantum_limit_temperature(frequency);
}

double friis_cascade(std::span<const NoiseStage> stages) {
  if (stages.empty()) throw ArgumentError("noise cascade needs at least one stage");
  double total = 0.0;
  double gain = 1.0;
  for (const auto& s : stages) {
    check_stage(s);
    total += s.noise_temperature / gain;
    gain *= linear(s.gain_db);
  }
  return total;
}

double snr_improvement(double t_before, double t_after) {
  if (!(t_before > 0.0) || !(t_after > 0.0)) {
    throw ArgumentError("noise temperatures must be positive");
  }
  return 10.0 * std::log10(t_before / t_after);
}

void write_budget_table(std::ostream& out, std::span<const NoiseStage> stages) {
  const double total = friis_cascade(stages);
  std::size_t width = 5;
  for (const auto& s : stages) width = std::max(width, s.label.size());
  out << fmt::format("{:<{}}  {:>10}  {:>12}  {:>14}\n", "stage", width, "gain_db",
                     "noise_k", "input_ref_k");
  double gain = 1.0;
  for (const auto& s : stages) {
    out << fmt::format("{:<{}}  {:>10.3f}  {:>12.6g}  {:>14.6g}\n", s.label, width, s.gain_db,
                       s.noise_temperature, s.noise_temperature / gain);
    gain *= linear(s.gain_db);
  }
  out << fmt::format("{:<{}}  {:>10}  {:>12}  {:>14.6g}\n", "total", width, "", "", total);
}

void write_budget_csv(std::ostream& out, std::span<const NoiseStage> stages) {
  (void)friis_cascade(stages);
  out << "stage,gain_db,noise_temperature_k,input_referred_k\n";
  double gain = 1.0;
  for (const auto& s : stages) {
    out << fmt::format("{},{:.15g},{:.15g},{:.15g}\n", s.label, s.gain_db, s.noise_temperature,
                       s.noise_temperature / gain);
    gain *= linear(s.gain_db);
  }
}

}  // namespace twpa
