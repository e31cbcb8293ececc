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

// Measurement analysis: pump-on/pump-off gain, idler modulation scans and
// junction-array resistance statistics.

#ifndef TWPA_DATA_ANALYSIS_HPP
#define TWPA_DATA_ANALYSIS_HPP

#include <cstddef>
#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace twpa {

inline constexpr double kAluminiumGapEv = 180e-6;

struct SpectrumTrace {
  std::vector<double> frequency;  // Hz
  std::vector<double> power_dbm;
  double rbw_hz = 0.0;
  std::string label;  // "pump-on" or "pump-off"

  void validate() const;
};

struct GainCurve {
  std::vector<double> frequency;
  std::vector<double> gain_db;
};

/// on - off in dB, bin by bin. Throws AlignmentError unless the grids match.
GainCurve pump_on_off_gain(const SpectrumTrace& on, const SpectrumTrace& off);

struct IdlerScan {
  std::vector<double> bias_a;
  std::vector<double> idler_dbm;
  double pump_dbm = 0.0;
  double floor_dbm = 0.0;

  void validate() const;
};

struct IdlerFeatures {
  double minimum_bias_a = 0.0;
  double minimum_dbm = 0.0;
  double modulation_depth_db = 0.0;
  bool floor_reached = false;
};

/// Minimum located by a least-squares parabola through the five samples
/// around the lowest one. Throws NoModulationError when depth < 0.5 dB.
IdlerFeatures idler_scan_features(const IdlerScan& scan);

enum class OxidationProcess { Static, Dynamic };

struct ResistanceRecord {
  int wafer_x = 0;
  int wafer_y = 0;
  std::string array_id;
  int junction_index = 0;
  double resistance_ohm = 0.0;
  OxidationProcess process = OxidationProcess::Static;
};

struct ArrayStatistics {
  std::string array_id;
  OxidationProcess process = OxidationProcess::Static;
  std::size_t count = 0;
  double mean = 0.0;
  double cv = 0.0;
  /// Least-squares slope against junction index, ohm per index.
  double slope = 0.0;
  /// Spread of the residuals about the linear trend, relative to the mean.
  double detrended_cv = 0.0;
};

struct Histogram {
  std::vector<double> edges;  // bins + 1 edges
  std::vector<std::size_t> counts;
};

struct JjSummary {
  std::vector<ArrayStatistics> arrays;  // sorted by array id
  std::vector<std::string> warnings;
  std::size_t records = 0;
  double mean = 0.0;
  double cv = 0.0;
  /// Degree-of-freedom weighted RMS of the per-array detrended cv.
  double pooled_detrended_cv = 0.0;
  /// Within-array slope pooled over every analysed array.
  double pooled_slope = 0.0;
  Histogram histogram;
};

/// Arrays with fewer than two records are skipped with a warning.
JjSummary jj_statistics(const std::vector<ResistanceRecord>& records,
                        std::size_t histogram_bins = 20);

struct ProcessSummary {
  std::size_t count = 0;
  double mean = 0.0;
  double cv = 0.0;
};

struct ProcessComparison {
  ProcessSummary static_process;
  ProcessSummary dynamic_process;
  /// mean(static) - mean(dynamic), ohm.
  double difference = 0.0;
  /// Welch two-sample t statistic of the difference.
  double t_statistic = 0.0;
  bool significant = false;
};

inline constexpr double kSignificanceThreshold = 3.0;

/// Throws ComparisonUnavailableError unless both processes are present.
ProcessComparison compare_processes(const std::vector<ResistanceRecord>& records);

/// Zero-temperature normal resistance pi Delta / (2 e Ic), Delta in eV.
double ambegaokar_baratoff_rn(double critical_current, double gap_ev = kAluminiumGapEv);

std::string to_string(OxidationProcess process);
OxidationProcess parse_process(const std::string& label);

nlohmann::json to_json(const IdlerFeatures& features);
nlohmann::json to_json(const JjSummary& summary);
nlohmann::json to_json(const ProcessComparison& comparison);

/// Columns frequency_hz,gain_db.
void write_csv(std::ostream& out, const GainCurve& curve);
/// Columns array_id,process,count,mean_ohm,cv,slope_ohm_per_index,detrended_cv.
void write_csv(std::ostream& out, const std::vector<ArrayStatistics>& arrays);

}  // namespace twpa

#endif  // TWPA_DATA_ANALYSIS_HPP
