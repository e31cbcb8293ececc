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

// Slow reference implementations used to cross-check the library.

#ifndef TWPA_TESTS_ORACLES_HPP
#define TWPA_TESTS_ORACLES_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "twpa/coupled_mode.hpp"

namespace twpa::testing {

/// Cascades explicit series/shunt/series matrices of every cell in one period
/// and returns the folded Bloch phase per cell.
cdouble brute_force_bloch_phase(const LineSpec& line, double frequency);

/// Classic fixed-step RK4 on the same equations, `steps_per_cell` steps.
std::vector<ModeState> rk4_cme(const ModeState& initial, const CmeCoefficients& c,
                               std::size_t n_cells, std::size_t steps_per_cell,
                               std::span<const std::int8_t> signs = {});

/// Cells walked, accumulating delta_k per cell, until the phase reaches pi.
double phase_walk_coherence_length(double delta_k);

/// |sum_x s(x) exp(i dk x)| over whole cells.
double nonlinear_phase_sum(std::span<const std::int8_t> signs, double delta_k);

}  // namespace twpa::testing

#endif  // TWPA_TESTS_ORACLES_HPP
