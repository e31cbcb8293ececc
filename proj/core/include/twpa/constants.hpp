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

#ifndef TWPA_CONSTANTS_HPP
#define TWPA_CONSTANTS_HPP

#include <numbers>

// Exact SI (2019) defining constants and the quantities derived from them.
namespace twpa::constants {

inline constexpr double kPi = std::numbers::pi;

inline constexpr double kPlanck = 6.62607015e-34;            // J s
inline constexpr double kReducedPlanck = kPlanck / (2.0 * kPi);  // J s
inline constexpr double kBoltzmann = 1.380649e-23;          // J / K
inline constexpr double kElectronCharge = 1.602176634e-19;  // C
inline constexpr double kFluxQuantum = kPlanck / (2.0 * kElectronCharge);  // Wb

}  // namespace twpa::constants

#endif  // TWPA_CONSTANTS_HPP
