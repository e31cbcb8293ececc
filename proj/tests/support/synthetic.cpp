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

#include "synthetic.hpp"

#include <random>

#include <fmt/format.h>

namespace twpa::testing {

std::vector<ResistanceRecord> make_jj_dataset(std::uint64_t seed, const JjDatasetParams& p) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<ResistanceRecord> out;
  const double centre = 0.5 * static_cast<double>(p.junctions_per_array - 1);
  for (auto process : {OxidationProcess::Static, OxidationProcess::Dynamic}) {
    const double base = p.mean_ohm + (process == OxidationProcess::Static ? p.static_offset_ohm : 0.0);
    for (std::size_t a = 0; a < p.arrays_per_process; ++a) {
      const auto id = fmt::format("{}{:02d}", process == OxidationProcess::Static ? "S" : "D", a);
      for (std::size_t j = 0; j < p.junctions_per_array; ++j) {
        ResistanceRecord r;
        r.wafer_x = static_cast<int>(a);
        r.wafer_y = process == OxidationProcess::Static ? 0 : 1;
        r.array_id = id;
        r.junction_index = static_cast<int>(j);
        r.resistance_ohm = base * (1.0 + p.cv * normal(rng)) +
                           p.slope * (static_cast<double>(j) - centre);
        r.process = process;
        out.push_back(r);
      }
    }
  }
  return out;
}

}  // namespace twpa::testing
