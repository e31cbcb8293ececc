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

#include "twpa/matching.hpp"

#include <algorithm>
#include <cmath>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "twpa/constants.hpp"
#include "twpa/errors.hpp"

namespace twpa {

namespace {

using constants::kPi;

constexpr double kGoldenRatio = 0.6180339887498949;

// Golden-section minimisation of a unimodal function on [lo, hi].
template <typename F>
double golden_minimum(F&& f, double lo, double hi, double tolerance) {
  double a = hi - kGoldenRatio * (hi - lo);
  double b = lo + kGoldenRatio * (hi - lo);
  double fa = f(a);
  double fb = f(b);
  while (hi - lo > tolerance) {
    if (fa <= fb) {
      hi = b;
      b = a;
      fb = fa;
      a = hi - kGoldenRatio * (hi - lo);
      fa = f(a);
    } else {
      lo = a;
      a = b;
      fa = fb;
      b = lo + kGoldenRatio * (hi - lo);
      fb = f(b);
    }
  }
  return 0.5 * (lo + hi);
}

double ground_capacitance(const UnitCell& cell) {
  return std::visit([](const auto& c) { return c.ground_capacitance; }, cell);
}

// Loaded line holding exactly two pattern periods; enough for the
// super-cell to be recognised without scanning the full line.
LineSpec probe_line(const LineSpec& line, const LoadingPlan& plan) {
  LineSpec probe = line;
  probe.loadings.clear();
  probe.n_cells = 2 * plan.pattern_cells();
  probe.design_pump_frequency.reset();
  return apply_plan(probe, plan);
}

// Builds the KITWPA pattern for base width w1: each slot centred in its
// period, cells partially covered by a slot scaled by z^overlap.
void fill_kitwpa_pattern(LoadingPlan& plan, double z, double w1) {
  plan.pattern.clear();
  const double period = static_cast<double>(plan.loading_period);
  for (std::size_t slot = 0; slot < plan.slots.size(); ++slot) {
    auto& s = plan.slots[slot];
    s.impedance_scale = z;
    s.width_cells = w1 * s.length_scale;
    const double start = static_cast<double>(slot) * period + 0.5 * (period - s.width_cells);
    const double end = start + s.width_cells;
    for (std::size_t c = 0; c < plan.loading_period; ++c) {
      const std::size_t cell = slot * plan.loading_period + c;
      const double lo = static_cast<double>(cell);
      const double overlap = std::max(0.0, std::min(end, lo + 1.0) - std::max(start, lo));
      if (overlap <= 0.0) continue;
      plan.pattern.push_back({cell, ImpedanceScale{std::pow(z, overlap)}});
    }
  }
}

// Largest |Re half-trace| of the pattern super-cell in [lo, hi]. Equal to 1
// where the second-order Bragg gap is closed, above 1 where it is open.
double peak_half_trace(const LineSpec& probe, double lo, double hi) {
  constexpr int kSamples = 401;
  auto h = [&](double f) { return std::abs(supercell_abcd(probe, f).half_trace().real()); };
  double best_f = lo;
  double best = -1.0;
  const double step = (hi - lo) / (kSamples - 1);
  for (int i = 0; i < kSamples; ++i) {
    const double f = lo + step * i;
    const double v = h(f);
    if (v > best) {
      best = v;
      best_f = f;
    }
  }
  const double f_peak = golden_minimum([&](double f) { return -h(f); },
                                       std::max(lo, best_f - step), std::min(hi, best_f + step),
                                       step * 1e-9);
  return std::max(best, h(f_peak));
}

std::optional<Stopband> band_near(const std::vector<Stopband>& bands, double f) {
  std::optional<Stopband> best;
  for (const auto& b : bands) {
    if (b.contains(f)) return b;
    if (!best || std::abs(b.center() - f) < std::abs(best->center() - f)) best = b;
  }
  return best;
}

}  // namespace

double coherence_length(double delta_k) {
  if (!std::isfinite(delta_k)) throw ArgumentError("phase mismatch must be finite");
  if (delta_k == 0.0) throw NoMismatchError("phase mismatch is zero; no coherence length");
  return kPi / std::abs(delta_k);
}

QpmProfile qpm_sign_profile(double delta_k, std::size_t n_cells) {
  if (n_cells < 1) throw ArgumentError("QPM profile needs at least one cell");
  QpmProfile out;
  out.coherence_length = coherence_length(delta_k);
  const double rounded = std::round(out.coherence_length);
  if (rounded < 1.0) {
    throw ResolutionError(fmt::format("coherence length {} cells rounds below one cell",
                                      out.coherence_length));
  }
  out.block_length = rounded >= static_cast<double>(n_cells) ? n_cells
                                                             : static_cast<std::size_t>(rounded);
  out.signs.resize(n_cells);
  for (std::size_t i = 0; i < n_cells; ++i) {
    out.signs[i] = (i / out.block_length) % 2 == 0 ? 1 : -1;
  }
  return out;
}

void LoadingPlan::validate() const {
  if (loading_period < 1) throw ArgumentError("loading period must be at least one cell");
  if (pattern_period < 1) throw ArgumentError("pattern period must be at least one loading");
  for (const auto& s : slots) {
    if (!(s.impedance_scale > 0.0) || !(s.length_scale > 0.0)) {
      throw ArgumentError("loading scale factors must be positive");
    }
  }
  for (const auto& l : pattern) {
    if (l.position >= pattern_cells()) {
      throw ArgumentError(fmt::format("pattern loading at {} exceeds the pattern length {}",
                                      l.position, pattern_cells()));
    }
  }
}

LineSpec apply_plan(const LineSpec& line, const LoadingPlan& plan) {
  plan.validate();
  LineSpec out = line;
  const std::size_t block = plan.pattern_cells();
  for (std::size_t start = 0; start < line.n_cells; start += block) {
    for (const auto& l : plan.pattern) {
      if (start + l.position < line.n_cells) {
        out.loadings.push_back({start + l.position, l.modifier});
      }
    }
  }
  if (plan.kind == PlanKind::Kitwpa && plan.design_frequency > 0.0) {
    out.design_pump_frequency = plan.design_frequency;
  }
  return out;
}

// The resonator branch shorts the shunt node at f_r, opening a gap from
// roughly f_r upwards. It is first measured with f_r = f_gap, then f_r is
// lowered by half the gap width and nudged until the gap is centred on f_gap.
LoadingPlan rpm_plan(double f_gap, const LineSpec& line, std::size_t spacing,
                     const RpmOptions& options) {
  line.validate();
  if (!(f_gap > 0.0) || !std::isfinite(f_gap)) throw ArgumentError("gap frequency must be positive");
  if (spacing < 1) throw ArgumentError("resonator spacing must be at least one cell");
  if (!(options.coupling_fraction > 0.0)) throw ArgumentError("coupling fraction must be positive");

  const cdouble ka = bloch_wavenumber(cell_abcd(line.base_cell, f_gap, line.bias));
  if (ka.imag() > kDefaultStopbandThreshold) {
    throw StopbandPlacementError(
        fmt::format("{} Hz is not in a passband of the unloaded line", f_gap));
  }
  if (static_cast<double>(spacing) * ka.real() >= kPi) {
    throw DesignInfeasibleError(fmt::format(
        "resonators every {} cells span {} rad at {} Hz; the gap cannot be placed", spacing,
        static_cast<double>(spacing) * ka.real(), f_gap));
  }

  LoadingPlan plan;
  plan.kind = PlanKind::Rpm;
  plan.loading_period = spacing;
  plan.pattern_period = 1;
  plan.design_frequency = f_gap;
  const double cr = options.coupling_fraction * static_cast<double>(spacing) *
                    ground_capacitance(line.base_cell);

  const std::vector<double> grid = log_grid(0.7 * f_gap, 1.3 * f_gap, 20000.0);
  auto measure = [&](double fr) {
    const double omega = 2.0 * kPi * fr;
    plan.resonator = ShuntResonator{1.0 / (omega * omega * cr), cr};
    plan.pattern = {{spacing / 2, *plan.resonator}};
    const LineSpec probe = probe_line(line, plan);
    return band_near(find_stopbands(scan_dispersion(probe, grid)), fr);
  };

  auto band = measure(f_gap);
  if (!band) throw DesignInfeasibleError("resonator loading opens no stopband near f_gap");
  double fr = f_gap - 0.5 * band->width();
  for (int iter = 0; iter < 8; ++iter) {
    band = measure(fr);
    if (!band) throw DesignInfeasibleError("resonator loading opens no stopband near f_gap");
    if (band->width() < options.min_relative_gap * f_gap) {
      throw DesignInfeasibleError(fmt::format(
          "stopband of {} Hz is narrower than the required {} Hz", band->width(),
          options.min_relative_gap * f_gap));
    }
    if (band->contains(f_gap) &&
        std::abs(band->center() - f_gap) < 0.25 * band->width()) {
      return plan;
    }
    fr += f_gap - band->center();
  }
  if (band->contains(f_gap)) return plan;
  throw DesignInfeasibleError(fmt::format("could not centre a stopband on {} Hz", f_gap));
}

LoadingPlan kitwpa_plan(double f_pump, double detuning, const LineSpec& line,
                        const KitwpaOptions& options) {
  line.validate();
  if (!(f_pump > 0.0) || !std::isfinite(f_pump)) throw ArgumentError("pump frequency must be positive");
  if (!(detuning > 0.0)) throw ArgumentError("detuning fraction must be positive");
  if (!(options.impedance_scale > 0.0) || !(options.third_length_scale > 0.0)) {
    throw ArgumentError("KITWPA scale factors must be positive");
  }

  const double f_load = f_pump * (1.0 + detuning);
  const cdouble ka = bloch_wavenumber(cell_abcd(line.base_cell, f_load, line.bias));
  if (ka.imag() > kDefaultStopbandThreshold || !(ka.real() > 0.0)) {
    throw StopbandPlacementError(
        fmt::format("{} Hz is not in a passband of the unloaded line", f_load));
  }
  const double sixth = 2.0 * kPi / ka.real() / 6.0;
  const double period = std::round(sixth);
  if (period < 1.0) {
    throw ResolutionError(
        fmt::format("one-sixth wavelength is {} cells, shorter than one cell", sixth));
  }

  LoadingPlan plan;
  plan.kind = PlanKind::Kitwpa;
  plan.loading_period = static_cast<std::size_t>(period);
  plan.pattern_period = 3;
  plan.design_frequency = f_pump;
  plan.slots = {LoadingSlot{options.impedance_scale, 1.0, 0.0},
                LoadingSlot{options.impedance_scale, 1.0, 0.0},
                LoadingSlot{options.impedance_scale, options.third_length_scale, 0.0}};

  const double s = options.third_length_scale;
  const double guess = 1.5 * period / (1.0 + s);
  const double widest = period / std::max(1.0, s);
  if (s == 1.0) {
    fill_kitwpa_pattern(plan, options.impedance_scale, std::min(guess, widest));
    return plan;
  }
  // The pattern is mirror symmetric, so its second-order Bragg coupling is
  // real and crosses zero as the base width varies. Close that gap.
  const double lo = 0.6 * guess;
  const double hi = std::min(widest, 1.4 * guess);
  auto residual = [&](double w1) {
    fill_kitwpa_pattern(plan, options.impedance_scale, w1);
    return peak_half_trace(probe_line(line, plan), 1.6 * f_load, 2.5 * f_load);
  };
  const double w1 = golden_minimum(residual, lo, hi, 1e-9 * period);
  fill_kitwpa_pattern(plan, options.impedance_scale, w1);
  return plan;
}

nlohmann::json to_json(const QpmProfile& profile) {
  std::vector<int> signs(profile.signs.begin(), profile.signs.end());
  return {{"coherence_length_cells", profile.coherence_length},
          {"block_length_cells", profile.block_length},
          {"signs", signs}};
}

nlohmann::json to_json(const LoadingPlan& plan) {
  nlohmann::json j;
  j["kind"] = to_string(plan.kind);
  j["loading_period_cells"] = plan.loading_period;
  j["pattern_period"] = plan.pattern_period;
  j["design_frequency_hz"] = plan.design_frequency;
  j["slots"] = nlohmann::json::array();
  for (const auto& s : plan.slots) {
    j["slots"].push_back({{"impedance_scale", s.impedance_scale},
                          {"length_scale", s.length_scale},
                          {"width_cells", s.width_cells}});
  }
  if (plan.resonator) {
    j["resonator"] = {{"inductance_h", plan.resonator->inductance},
                      {"capacitance_f", plan.resonator->capacitance},
                      {"resonance_hz", plan.resonator->resonance_frequency()}};
  }
  j["pattern"] = nlohmann::json::array();
  for (const auto& l : plan.pattern) {
    if (const auto* z = std::get_if<ImpedanceScale>(&l.modifier)) {
      j["pattern"].push_back(
          {{"position", l.position}, {"type", "impedance_scale"}, {"factor", z->factor}});
    } else {
      const auto& r = std::get<ShuntResonator>(l.modifier);
      j["pattern"].push_back({{"position", l.position},
                              {"type", "shunt_resonator"},
                              {"inductance_h", r.inductance},
                              {"capacitance_f", r.capacitance}});
    }
  }
  return j;
}

LoadingPlan loading_plan_from_json(const nlohmann::json& j) {
  try {
    LoadingPlan plan;
    const auto kind = j.at("kind").get<std::string>();
    if (kind == "kitwpa") {
      plan.kind = PlanKind::Kitwpa;
    } else if (kind == "rpm") {
      plan.kind = PlanKind::Rpm;
    } else {
      throw ArgumentError(fmt::format("unknown plan kind '{}'", kind));
    }
    plan.loading_period = j.at("loading_period_cells").get<std::size_t>();
    plan.pattern_period = j.at("pattern_period").get<std::size_t>();
    plan.design_frequency = j.value("design_frequency_hz", 0.0);
    for (const auto& s : j.value("slots", nlohmann::json::array())) {
      plan.slots.push_back({s.at("impedance_scale").get<double>(),
                            s.at("length_scale").get<double>(),
                            s.at("width_cells").get<double>()});
    }
    if (j.contains("resonator")) {
      const auto& r = j.at("resonator");
      plan.resonator =
          ShuntResonator{r.at("inductance_h").get<double>(), r.at("capacitance_f").get<double>()};
    }
    for (const auto& l : j.at("pattern")) {
      const auto position = l.at("position").get<std::size_t>();
      const auto type = l.at("type").get<std::string>();
      if (type == "impedance_scale") {
        plan.pattern.push_back({position, ImpedanceScale{l.at("factor").get<double>()}});
      } else if (type == "shunt_resonator") {
        plan.pattern.push_back({position, ShuntResonator{l.at("inductance_h").get<double>(),
                                                         l.at("capacitance_f").get<double>()}});
      } else {
        throw ArgumentError(fmt::format("unknown loading type '{}'", type));
      }
    }
    plan.validate();
    return plan;
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(fmt::format("malformed loading plan: {}", e.what()));
  }
}

std::string to_string(PlanKind kind) { return kind == PlanKind::Kitwpa ? "kitwpa" : "rpm"; }

}  // namespace twpa
