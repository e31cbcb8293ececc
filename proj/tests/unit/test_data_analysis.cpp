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

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "synthetic.hpp"
#include "twpa/data_analysis.hpp"
#include "twpa/errors.hpp"

namespace twpa {
namespace {

SpectrumTrace trace(std::vector<double> f, std::vector<double> p, const char* label) {
  return SpectrumTrace{std::move(f), std::move(p), 1e3, label};
}

TEST(OnOffGain, Difference) {
  const auto g = pump_on_off_gain(trace({1e9, 2e9}, {-60, -55}, "pump-on"),
                                  trace({1e9, 2e9}, {-80, -70}, "pump-off"));
  EXPECT_EQ(g.frequency, (std::vector<double>{1e9, 2e9}));
  EXPECT_EQ(g.gain_db, (std::vector<double>{20, 15}));
  std::ostringstream os;
  write_csv(os, g);
  EXPECT_EQ(os.str(), "frequency_hz,gain_db\n1000000000,20\n2000000000,15\n");
}

TEST(OnOffGain, TraceAgainstItselfIsZero) {
  const auto t = trace({1e9, 1.5e9, 2e9}, {-61.3, -70.25, -55.0}, "pump-on");
  for (double g : pump_on_off_gain(t, t).gain_db) EXPECT_EQ(g, 0.0);
}

TEST(OnOffGain, MisalignedGridsRejected) {
  EXPECT_THROW(pump_on_off_gain(trace({1e9, 2e9}, {-60, -55}, "pump-on"),
                                trace({1e9, 2.1e9}, {-80, -70}, "pump-off")),
               AlignmentError);
  EXPECT_THROW(pump_on_off_gain(trace({1e9, 2e9}, {-60, -55}, "pump-on"),
                                trace({1e9}, {-80}, "pump-off")),
               AlignmentError);
  EXPECT_THROW(pump_on_off_gain(trace({1e9}, {NAN}, "pump-on"), trace({1e9}, {-80}, "pump-off")),
               ArgumentError);
}

IdlerScan parabola_scan(double x0, double shift) {
  IdlerScan s;
  s.pump_dbm = -60;
  s.floor_dbm = -120;
  for (int i = 0; i < 41; ++i) {
    const double x = -1e-3 + 5e-5 * i;
    s.bias_a.push_back(x + shift);
    s.idler_dbm.push_back(-80.0 + 4e7 * (x - x0) * (x - x0));
  }
  return s;
}

TEST(Idler, VertexBetweenSamples) {
  const auto f = idler_scan_features(parabola_scan(1.23e-4, 0.0));
  EXPECT_NEAR(f.minimum_bias_a, 1.23e-4, 1e-12);
  EXPECT_NEAR(f.minimum_dbm, -80.0, 1e-9);
  EXPECT_FALSE(f.floor_reached);
  EXPECT_GT(f.modulation_depth_db, 40.0);
}

TEST(Idler, EquivariantUnderBiasShift) {
  const auto a = idler_scan_features(parabola_scan(1.23e-4, 0.0));
  const auto b = idler_scan_features(parabola_scan(1.23e-4, 2.5e-3));
  EXPECT_NEAR(b.minimum_bias_a - a.minimum_bias_a, 2.5e-3, 1e-12);
  EXPECT_NEAR(b.minimum_dbm, a.minimum_dbm, 1e-9);
}

TEST(Idler, MinimumAtEdgeUsesSample) {
  auto s = parabola_scan(-2e-3, 0.0);
  const auto f = idler_scan_features(s);
  EXPECT_DOUBLE_EQ(f.minimum_bias_a, s.bias_a.front());
}

TEST(Idler, FloorAndFlatScans) {
  auto s = parabola_scan(0.0, 0.0);
  s.floor_dbm = -80.5;
  EXPECT_TRUE(idler_scan_features(s).floor_reached);
  IdlerScan flat = s;
  std::fill(flat.idler_dbm.begin(), flat.idler_dbm.end(), -90.0);
  flat.idler_dbm[3] = -90.3;
  EXPECT_THROW(idler_scan_features(flat), NoModulationError);
  IdlerScan short_scan = s;
  short_scan.bias_a.resize(4);
  short_scan.idler_dbm.resize(4);
  EXPECT_THROW(idler_scan_features(short_scan), ArgumentError);
}

TEST(Jj, ExactStatisticsOfSmallArray) {
  std::vector<ResistanceRecord> r;
  for (int j = 0; j < 4; ++j) {
    r.push_back({0, 0, "A", j, 10.0 + j, OxidationProcess::Static});
  }
  const auto s = jj_statistics(r, 3);
  ASSERT_EQ(s.arrays.size(), 1u);
  EXPECT_DOUBLE_EQ(s.arrays[0].mean, 11.5);
  EXPECT_NEAR(s.arrays[0].cv, std::sqrt(5.0 / 3.0) / 11.5, 1e-15);
  EXPECT_NEAR(s.arrays[0].slope, 1.0, 1e-15);
  EXPECT_NEAR(s.arrays[0].detrended_cv, 0.0, 1e-15);
  EXPECT_EQ(s.histogram.counts, (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_DOUBLE_EQ(s.histogram.edges.front(), 10.0);
  EXPECT_DOUBLE_EQ(s.histogram.edges.back(), 13.0);
}

TEST(Jj, SingletonArraysWarned) {
  std::vector<ResistanceRecord> r{{0, 0, "A", 0, 10, OxidationProcess::Static},
                                  {0, 0, "B", 0, 11, OxidationProcess::Static},
                                  {0, 0, "B", 1, 12, OxidationProcess::Static}};
  const auto s = jj_statistics(r);
  EXPECT_EQ(s.arrays.size(), 1u);
  ASSERT_EQ(s.warnings.size(), 1u);
  EXPECT_NE(s.warnings[0].find("A"), std::string::npos);
  r.push_back({0, 0, "C", 0, -1.0, OxidationProcess::Static});
  EXPECT_THROW(jj_statistics(r), ArgumentError);
  EXPECT_THROW(jj_statistics(r, 0), ArgumentError);
}

TEST(Jj, IndependentOfRecordOrder) {
  auto data = testing::make_jj_dataset(5);
  const auto a = to_json(jj_statistics(data)).dump();
  std::mt19937_64 rng(9);
  std::shuffle(data.begin(), data.end(), rng);
  EXPECT_EQ(to_json(jj_statistics(data)).dump(), a);
}

TEST(Jj, RecoversInjectedParameters) {
  const auto s = jj_statistics(testing::make_jj_dataset(11));
  EXPECT_EQ(s.records, 960u);
  EXPECT_EQ(s.arrays.size(), 8u);
  EXPECT_NEAR(s.pooled_detrended_cv, 0.07, 0.005);
  EXPECT_NEAR(s.pooled_slope, 0.01, 0.003);
  std::size_t total = 0;
  for (auto c : s.histogram.counts) total += c;
  EXPECT_EQ(total, 960u);
}

TEST(Jj, CvIsScaleInvariant) {
  auto data = testing::make_jj_dataset(3);
  const auto a = jj_statistics(data);
  for (auto& r : data) r.resistance_ohm *= 2.5;
  const auto b = jj_statistics(data);
  EXPECT_NEAR(a.cv, b.cv, 1e-12);
  EXPECT_NEAR(a.pooled_detrended_cv, b.pooled_detrended_cv, 1e-12);
  EXPECT_NEAR(2.5 * a.pooled_slope, b.pooled_slope, 1e-12);
}

TEST(Compare, StaticAboveDynamic) {
  const auto c = compare_processes(testing::make_jj_dataset(1));
  EXPECT_EQ(c.static_process.count, 480u);
  EXPECT_NEAR(c.difference, 1.0, 0.3);
  EXPECT_GT(c.t_statistic, kSignificanceThreshold);
  EXPECT_TRUE(c.significant);
  const auto j = to_json(c);
  EXPECT_TRUE(j.at("significant").get<bool>());
}

TEST(Compare, AntisymmetricUnderRelabel) {
  auto data = testing::make_jj_dataset(2);
  const auto a = compare_processes(data);
  for (auto& r : data) {
    r.process = r.process == OxidationProcess::Static ? OxidationProcess::Dynamic
                                                      : OxidationProcess::Static;
  }
  const auto b = compare_processes(data);
  EXPECT_NEAR(b.t_statistic, -a.t_statistic, 1e-12);
  EXPECT_NEAR(b.difference, -a.difference, 1e-12);
}

TEST(Compare, NeedsBothProcesses) {
  testing::JjDatasetParams p;
  auto data = testing::make_jj_dataset(1, p);
  std::erase_if(data, [](const auto& r) { return r.process == OxidationProcess::Dynamic; });
  EXPECT_THROW(compare_processes(data), ComparisonUnavailableError);
}

TEST(Compare, NoOffsetIsNotSignificantUsually) {
  testing::JjDatasetParams p;
  p.static_offset_ohm = 0.0;
  int flagged = 0;
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    flagged += compare_processes(testing::make_jj_dataset(seed, p)).significant ? 1 : 0;
  }
  EXPECT_LE(flagged, 2);
}

TEST(AmbegaokarBaratoff, FrozenValues) {
  EXPECT_NEAR(ambegaokar_baratoff_rn(4e-6), 70.68583470577036, 1e-10);
  EXPECT_NEAR(ambegaokar_baratoff_rn(1.5e-6), 188.4955592153876, 1e-10);
  EXPECT_THROW(ambegaokar_baratoff_rn(0.0), ArgumentError);
}

TEST(Process, Labels) {
  EXPECT_EQ(parse_process("static"), OxidationProcess::Static);
  EXPECT_EQ(parse_process(to_string(OxidationProcess::Dynamic)), OxidationProcess::Dynamic);
  EXPECT_THROW(parse_process("Static"), ArgumentError);
}

TEST(ArraysCsv, Header) {
  std::ostringstream os;
  write_csv(os, std::vector<ArrayStatistics>{{"A", OxidationProcess::Dynamic, 2, 10, 0.1, 0.5, 0}});
  EXPECT_EQ(os.str(),
            "array_id,process,count,mean_ohm,cv,slope_ohm_per_index,detrended_cv\n"
            "A,dynamic,2,10,0.1,0.5,0\n");
}

}  // namespace
}  // namespace twpa
