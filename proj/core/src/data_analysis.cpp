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

#include "twpa/data_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <ostream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "parallel.hpp"
#include "twpa/constants.hpp"
#include "twpa/errors.hpp"

namespace twpa {

namespace {

bool all_finite(const std::vector<double>& v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

double mean_of(const std::vector<double>& v) {
  return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

// Sample standard deviation (n - 1).
double stddev_of(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

struct LinearFit {
  double slope = 0.0;
  double residual_ss = 0.0;
  double sxx = 0.0;
  double sxy = 0.0;
};

LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y) {
  const double mx = mean_of(x);
  const double my = mean_of(y);
  LinearFit fit;
  for (std::size_t i = 0; i < x.size(); ++i) {
    fit.sxx += (x[i] - mx) * (x[i] - mx);
    fit.sxy += (x[i] - mx) * (y[i] - my);
  }
  fit.slope = fit.sxx > 0.0 ? fit.sxy / fit.sxx : 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double r = y[i] - my - fit.slope * (x[i] - mx);
    fit.residual_ss += r * r;
  }
  return fit;
}

ProcessSummary summarize_process(const std::vector<double>& values) {
  ProcessSummary s;
  s.count = values.size();
  s.mean = mean_of(values);
  s.cv = stddev_of(values, s.mean) / s.mean;
  return s;
}

}  // namespace

void SpectrumTrace::validate() const {
  if (frequency.empty() || frequency.size() != power_dbm.size()) {
    throw ArgumentError("spectrum trace needs equally sized, non-empty frequency and power");
  }
  if (!all_finite(power_dbm)) throw ArgumentError("spectrum powers must be finite");
}

GainCurve pump_on_off_gain(const SpectrumTrace& on, const SpectrumTrace& off) {
  on.validate();
  off.validate();
  if (on.frequency != off.frequency) {
    throw AlignmentError(fmt::format(
        "pump-on ({} bins) and pump-off ({} bins) traces are not on the same grid",
        on.frequency.size(), off.frequency.size()));
  }
  GainCurve out;
  out.frequency = on.frequency;
  out.gain_db.resize(on.frequency.size());
  for (std::size_t i = 0; i < out.gain_db.size(); ++i) {
    out.gain_db[i] = on.power_dbm[i] - off.power_dbm[i];
  }
  return out;
}

void IdlerScan::validate() const {
  if (bias_a.size() != idler_dbm.size()) {
    throw ArgumentError("idler scan needs one power per bias point");
  }
  if (bias_a.size() < 5) throw ArgumentError("idler scan needs at least five points");
  for (std::size_t i = 1; i < bias_a.size(); ++i) {
    if (!(bias_a[i] > bias_a[i - 1])) {
      throw ArgumentError("idler scan bias grid must be strictly increasing");
    }
  }
  if (!all_finite(bias_a) || !all_finite(idler_dbm)) {
    throw ArgumentError("idler scan values must be finite");
  }
}

IdlerFeatures idler_scan_features(const IdlerScan& scan) {
  scan.validate();
  const auto lowest = std::min_element(scan.idler_dbm.begin(), scan.idler_dbm.end());
  const auto highest = std::max_element(scan.idler_dbm.begin(), scan.idler_dbm.end());
  IdlerFeatures out;
  out.modulation_depth_db = *highest - *lowest;
  if (out.modulation_depth_db < 0.5) {
    throw NoModulationError(
        fmt::format("idler modulation depth {} dB is below 0.5 dB", out.modulation_depth_db));
  }
  const auto n = scan.bias_a.size();
  const auto i_min = static_cast<std::size_t>(lowest - scan.idler_dbm.begin());
  const std::size_t first = std::min(i_min >= 2 ? i_min - 2 : 0, n - 5);

  // Quadratic least squares in a coordinate centred on the window so the
  // result is equivariant under bias shifts.
  const double centre = 0.5 * (scan.bias_a[first] + scan.bias_a[first + 4]);
  double s[5] = {0, 0, 0, 0, 0};  // sums of x^k
  double t[3] = {0, 0, 0};        // sums of x^k y
  for (std::size_t i = first; i < first + 5; ++i) {
    const double x = scan.bias_a[i] - centre;
    const double y = scan.idler_dbm[i];
    double xk = 1.0;
    for (int k = 0; k < 5; ++k) {
      s[k] += xk;
      if (k < 3) t[k] += xk * y;
      xk *= x;
    }
  }
  // Normal equations for y = c0 + c1 x + c2 x^2 by Cramer's rule.
  auto det3 = [](double a, double b, double c, double d, double e, double f, double g, double h,
                 double i) { return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g); };
  const double det = det3(s[0], s[1], s[2], s[1], s[2], s[3], s[2], s[3], s[4]);
  const double c1 = det3(s[0], t[0], s[2], s[1], t[1], s[3], s[2], t[2], s[4]) / det;
  const double c2 = det3(s[0], s[1], t[0], s[1], s[2], t[1], s[2], s[3], t[2]) / det;
  const double c0 = det3(t[0], s[1], s[2], t[1], s[2], s[3], t[2], s[3], s[4]) / det;

  out.minimum_bias_a = scan.bias_a[i_min];
  out.minimum_dbm = *lowest;
  if (c2 > 0.0 && std::isfinite(det) && det != 0.0) {
    const double vertex = -c1 / (2.0 * c2);
    if (vertex >= scan.bias_a[first] - centre && vertex <= scan.bias_a[first + 4] - centre) {
      out.minimum_bias_a = centre + vertex;
      out.minimum_dbm = std::min(*lowest, c0 - c1 * c1 / (4.0 * c2));
    }
  }
  out.floor_reached = *lowest <= scan.floor_dbm + 1.0;
  return out;
}

JjSummary jj_statistics(const std::vector<ResistanceRecord>& records, std::size_t histogram_bins) {
  if (histogram_bins < 1) throw ArgumentError("histogram needs at least one bin");
  std::map<std::string, std::vector<const ResistanceRecord*>> groups;
  for (const auto& r : records) {
    if (!(r.resistance_ohm > 0.0) || !std::isfinite(r.resistance_ohm)) {
      throw ArgumentError(fmt::format("array {} junction {}: resistance must be positive",
                                      r.array_id, r.junction_index));
    }
    groups[r.array_id].push_back(&r);
  }

  JjSummary out;
  std::vector<std::vector<const ResistanceRecord*>> analysed;
  for (auto& [id, members] : groups) {
    if (members.size() < 2) {
      out.warnings.push_back(
          fmt::format("array {} skipped: {} record(s), need at least 2", id, members.size()));
      continue;
    }
    // Order within an array by junction index so results ignore input order.
    std::sort(members.begin(), members.end(), [](const auto* a, const auto* b) {
      if (a->junction_index != b->junction_index) return a->junction_index < b->junction_index;
      return a->resistance_ohm < b->resistance_ohm;
    });
    analysed.push_back(members);
  }

  out.arrays.resize(analysed.size());
  std::vector<LinearFit> fits(analysed.size());
  detail::parallel_for(analysed.size(), [&](std::size_t k) {
    const auto& members = analysed[k];
    std::vector<double> x;
    std::vector<double> y;
    for (const auto* r : members) {
      x.push_back(static_cast<double>(r->junction_index));
      y.push_back(r->resistance_ohm);
    }
    ArrayStatistics& a = out.arrays[k];
    a.array_id = members.front()->array_id;
    a.process = members.front()->process;
    a.count = members.size();
    a.mean = mean_of(y);
    a.cv = stddev_of(y, a.mean) / a.mean;
    fits[k] = fit_line(x, y);
    a.slope = fits[k].slope;
    a.detrended_cv = y.size() > 2
                         ? std::sqrt(fits[k].residual_ss / static_cast<double>(y.size() - 2)) / a.mean
                         : 0.0;
  });

  std::vector<double> all;
  double weighted_cv_sq = 0.0;
  double dof = 0.0;
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t k = 0; k < analysed.size(); ++k) {
    for (const auto* r : analysed[k]) all.push_back(r->resistance_ohm);
    const double d = static_cast<double>(out.arrays[k].count) - 2.0;
    if (d > 0.0) {
      weighted_cv_sq += d * out.arrays[k].detrended_cv * out.arrays[k].detrended_cv;
      dof += d;
    }
    sxy += fits[k].sxy;
    sxx += fits[k].sxx;
  }
  out.records = all.size();
  if (all.empty()) return out;
  std::sort(all.begin(), all.end());
  out.mean = mean_of(all);
  out.cv = stddev_of(all, out.mean) / out.mean;
  out.pooled_detrended_cv = dof > 0.0 ? std::sqrt(weighted_cv_sq / dof) : 0.0;
  out.pooled_slope = sxx > 0.0 ? sxy / sxx : 0.0;

  const double lo = all.front();
  const double hi = all.back() > lo ? all.back() : lo + 1.0;
  const double width = (hi - lo) / static_cast<double>(histogram_bins);
  out.histogram.edges.resize(histogram_bins + 1);
  for (std::size_t b = 0; b <= histogram_bins; ++b) {
    out.histogram.edges[b] = lo + width * static_cast<double>(b);
  }
  out.histogram.edges.back() = hi;
  out.histogram.counts.assign(histogram_bins, 0);
  for (double v : all) {
    auto b = static_cast<std::size_t>((v - lo) / width);
    out.histogram.counts[std::min(b, histogram_bins - 1)]++;
  }
  return out;
}

ProcessComparison compare_processes(const std::vector<ResistanceRecord>& records) {
  std::vector<double> stat;
  std::vector<double> dyn;
  for (const auto& r : records) {
    (r.process == OxidationProcess::Static ? stat : dyn).push_back(r.resistance_ohm);
  }
  if (stat.size() < 2 || dyn.size() < 2) {
    throw ComparisonUnavailableError(fmt::format(
        "need at least two records of each process (static {}, dynamic {})", stat.size(),
        dyn.size()));
  }
  ProcessComparison out;
  out.static_process = summarize_process(stat);
  out.dynamic_process = summarize_process(dyn);
  out.difference = out.static_process.mean - out.dynamic_process.mean;
  const double var_s = std::pow(out.static_process.cv * out.static_process.mean, 2);
  const double var_d = std::pow(out.dynamic_process.cv * out.dynamic_process.mean, 2);
  const double se = std::sqrt(var_s / static_cast<double>(stat.size()) +
                              var_d / static_cast<double>(dyn.size()));
  if (se > 0.0) {
    out.t_statistic = out.difference / se;
  } else {
    out.t_statistic = out.difference == 0.0 ? 0.0 : std::copysign(INFINITY, out.difference);
  }
  out.significant = std::abs(out.t_statistic) >= kSignificanceThreshold;
  return out;
}

double ambegaokar_baratoff_rn(double critical_current, double gap_ev) {
  if (!(critical_current > 0.0) || !(gap_ev > 0.0)) {
    throw ArgumentError("critical current and gap must be positive");
  }
  // Delta / e in volts is numerically the gap in eV.
  return constants::kPi * gap_ev / (2.0 * critical_current);
}

std::string to_string(OxidationProcess process) {
  return process == OxidationProcess::Static ? "static" : "dynamic";
}

OxidationProcess parse_process(const std::string& label) {
  if (label == "static") return OxidationProcess::Static;
  if (label == "dynamic") return OxidationProcess::Dynamic;
  throw ArgumentError(fmt::format("unknown oxidation process '{}' (static|dynamic)", label));
}

nlohmann::json to_json(const IdlerFeatures& f) {
  return {{"minimum_bias_a", f.minimum_bias_a},
          {"minimum_dbm", f.minimum_dbm},
          {"modulation_depth_db", f.modulation_depth_db},
          {"floor_reached", f.floor_reached}};
}

nlohmann::json to_json(const JjSummary& s) {
  nlohmann::json arrays = nlohmann::json::array();
  for (const auto& a : s.arrays) {
    arrays.push_back({{"array_id", a.array_id},
                      {"process", to_string(a.process)},
                      {"count", a.count},
                      {"mean_ohm", a.mean},
                      {"cv", a.cv},
                      {"slope_ohm_per_index", a.slope},
                      {"detrended_cv", a.detrended_cv}});
  }
  return {{"records", s.records},
          {"mean_ohm", s.mean},
          {"cv", s.cv},
          {"pooled_detrended_cv", s.pooled_detrended_cv},
          {"pooled_slope_ohm_per_index", s.pooled_slope},
          {"histogram", {{"edges_ohm", s.histogram.edges}, {"counts", s.histogram.counts}}},
          {"arrays", arrays},
          {"warnings", s.warnings}};
}

nlohmann::json to_json(const ProcessComparison& c) {
  auto side = [](const ProcessSummary& p) {
    return nlohmann::json{{"count", p.count}, {"mean_ohm", p.mean}, {"cv", p.cv}};
  };
  return {{"static", side(c.static_process)},
          {"dynamic", side(c.dynamic_process)},
          {"difference_ohm", c.difference},
          {"t_statistic", c.t_statistic},
          {"significant", c.significant}};
}

void write_csv(std::ostream& out, const GainCurve& curve) {
  out << "frequency_hz,gain_db\n";
  for (std::size_t i = 0; i < curve.frequency.size(); ++i) {
    out << fmt::format("{:.15g},{:.15g}\n", curve.frequency[i], curve.gain_db[i]);
  }
}

void write_csv(std::ostream& out, const std::vector<ArrayStatistics>& arrays) {
  out << "array_id,process,count,mean_ohm,cv,slope_ohm_per_index,detrended_cv\n";
  for (const auto& a : arrays) {
    out << fmt::format("{},{},{},{:.15g},{:.15g},{:.15g},{:.15g}\n", a.array_id,
                       to_string(a.process), a.count, a.mean, a.cv, a.slope, a.detrended_cv);
  }
}

}  // namespace twpa
