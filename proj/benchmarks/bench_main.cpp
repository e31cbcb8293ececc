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

#include <cmath>
#include <vector>

#include <benchmark/benchmark.h>

#include "twpa/coupled_mode.hpp"
#include "twpa/dispersion.hpp"
#include "twpa/matching.hpp"

namespace {

using namespace twpa;

void BM_ScanDispersionUniform(benchmark::State& state) {
  const LineSpec line;
  const auto grid = log_grid(0.1e9, 30e9, static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(scan_dispersion(line, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_ScanDispersionUniform)->Arg(200)->Arg(2001);

void BM_ScanDispersionKitwpa(benchmark::State& state) {
  LineSpec line;
  line.base_cell = default_kinetic_cell();
  line.bias = CurrentBias{0.0};
  line.n_cells = 1800;
  const auto loaded = apply_plan(line, kitwpa_plan(9e9, 0.02, line));
  const auto grid = log_grid(1e9, 30e9, 2001);
  for (auto _ : state) benchmark::DoNotOptimize(scan_dispersion(loaded, grid));
  state.SetItemsProcessed(state.iterations() * static_cast<int64_t>(grid.size()));
}
BENCHMARK(BM_ScanDispersionKitwpa)->Unit(benchmark::kMillisecond);

void BM_IntegrateCme(benchmark::State& state) {
  const LineSpec line;
  const auto curve = scan_dispersion(line, log_grid(4e9, 9e9));
  const double n_p = photon_flux(-47.5, 6.75e9);
  auto c = cme_coefficients(line, curve, 6.75e9, 5.5e9, std::sqrt(n_p), MixingMode::FourWave);
  c.delta_k = c.phase_matched_delta_k();
  const ModeState start{std::sqrt(n_p), std::sqrt(photon_flux(-130.0, 5.5e9)), 0.0};
  const double tol = std::pow(10.0, -static_cast<double>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(integrate_cme(start, c, line.n_cells, tol));
}
BENCHMARK(BM_IntegrateCme)->Arg(6)->Arg(9)->Arg(12)->Unit(benchmark::kMicrosecond);

void BM_SweepGain(benchmark::State& state) {
  const LineSpec line;
  std::vector<double> pumps;
  for (double p = -70.0; p <= -40.0; p += 2.5) pumps.push_back(p);
  std::vector<double> signals;
  for (int i = 0; i < 21; ++i) signals.push_back(4.5e9 + 0.1e9 * i);
  SweepOptions options;
  options.threads = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        sweep_gain(line, 6.75e9, pumps, signals, MixingMode::FourWave, options));
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(pumps.size() * signals.size()));
}
BENCHMARK(BM_SweepGain)->Arg(1)->Arg(0)->Unit(benchmark::kMillisecond)->UseRealTime();

}  // namespace

BENCHMARK_MAIN();
