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

#include "twpa/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "twpa/errors.hpp"

namespace twpa {

namespace {

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string strip_cr(std::string s) {
  if (!s.empty() && s.back() == '\r') s.pop_back();
  return s;
}

template <typename T>
T parse_number(const std::string& text, std::size_t line, const char* column) {
  T value{};
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc{} || ptr != end) {
    throw ArgumentError(fmt::format("line {}: cannot parse {} from '{}'", line, column, text));
  }
  return value;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError(fmt::format("cannot open {}", path.string()));
  return in;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ArgumentError(fmt::format("cannot write {}", path.string()));
  return out;
}

// Two-column numeric CSV with an exact header.
void read_pairs(const std::filesystem::path& path, const std::string& header,
                std::vector<double>& first, std::vector<double>& second) {
  auto in = open_input(path);
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != header) {
    throw ArgumentError(fmt::format("{}: expected header '{}'", path.string(), header));
  }
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto fields = split(line);
    if (fields.size() != 2) {
      throw ArgumentError(fmt::format("{}:{}: expected 2 fields", path.string(), number));
    }
    first.push_back(parse_number<double>(fields[0], number, "column 1"));
    second.push_back(parse_number<double>(fields[1], number, "column 2"));
  }
}

nlohmann::json read_sidecar(const std::filesystem::path& csv) {
  const auto path = sidecar_path(csv);
  auto in = open_input(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw ArgumentError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

template <typename T>
T sidecar_field(const nlohmann::json& j, const char* key, const std::filesystem::path& csv) {
  if (!j.contains(key)) {
    throw ArgumentError(fmt::format("{}: missing '{}'", sidecar_path(csv).string(), key));
  }
  try {
    return j.at(key).get<T>();
  } catch (const nlohmann::json::exception&) {
    throw ArgumentError(fmt::format("{}: '{}' has the wrong type", sidecar_path(csv).string(), key));
  }
}

}  // namespace

std::vector<ResistanceRecord> read_resistance_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || strip_cr(line) != kResistanceHeader) {
    throw ArgumentError(fmt::format("resistance CSV must start with '{}'", kResistanceHeader));
  }
  std::vector<ResistanceRecord> records;
  std::size_t number = 1;
  while (std::getline(in, line)) {
    ++number;
    line = strip_cr(line);
    if (line.empty()) continue;
    const auto f = split(line);
    if (f.size() != 6) {
      throw ArgumentError(fmt::format("line {}: expected 6 fields, found {}", number, f.size()));
    }
    ResistanceRecord r;
    r.wafer_x = parse_number<int>(f[0], number, "wafer_x");
    r.wafer_y = parse_number<int>(f[1], number, "wafer_y");
    r.array_id = f[2];
    if (r.array_id.empty()) throw ArgumentError(fmt::format("line {}: empty array_id", number));
    r.junction_index = parse_number<int>(f[3], number, "junction_index");
    r.resistance_ohm = parse_number<double>(f[4], number, "resistance_ohm");
    if (!(r.resistance_ohm > 0.0)) {
      throw ArgumentError(fmt::format("line {}: resistance must be positive", number));
    }
    try {
      r.process = parse_process(f[5]);
    } catch (const ArgumentError& e) {
      throw ArgumentError(fmt::format("line {}: {}", number, e.what()));
    }
    records.push_back(std::move(r));
  }
  return records;
}

std::vector<ResistanceRecord> read_resistance_csv(const std::filesystem::path& path) {
  auto in = open_input(path);
  try {
    return read_resistance_csv(in);
  } catch (const ArgumentError& e) {
    throw ArgumentError(fmt::format("{}: {}", path.string(), e.what()));
  }
}

void write_resistance_csv(std::ostream& out, const std::vector<ResistanceRecord>& records) {
  out << kResistanceHeader << '\n';
  for (const auto& r : records) {
    out << fmt::format("{},{},{},{},{:.15g},{}\n", r.wafer_x, r.wafer_y, r.array_id,
                       r.junction_index, r.resistance_ohm, to_string(r.process));
  }
}

std::filesystem::path sidecar_path(const std::filesystem::path& csv) {
  auto p = csv;
  p.replace_extension(".json");
  return p;
}

SpectrumTrace read_spectrum(const std::filesystem::path& csv) {
  SpectrumTrace t;
  read_pairs(csv, "frequency_hz,power_dbm", t.frequency, t.power_dbm);
  const auto meta = read_sidecar(csv);
  t.rbw_hz = sidecar_field<double>(meta, "rbw_hz", csv);
  t.label = sidecar_field<std::string>(meta, "label", csv);
  if (t.label != "pump-on" && t.label != "pump-off") {
    throw ArgumentError(fmt::format("{}: label must be pump-on or pump-off",
                                    sidecar_path(csv).string()));
  }
  t.validate();
  return t;
}

void write_spectrum(const std::filesystem::path& csv, const SpectrumTrace& trace) {
  auto out = open_output(csv);
  out << "frequency_hz,power_dbm\n";
  for (std::size_t i = 0; i < trace.frequency.size(); ++i) {
    out << fmt::format("{:.15g},{:.15g}\n", trace.frequency[i], trace.power_dbm[i]);
  }
  auto meta = open_output(sidecar_path(csv));
  meta << nlohmann::json{{"rbw_hz", trace.rbw_hz}, {"label", trace.label}}.dump(2) << '\n';
}

IdlerScan read_idler_scan(const std::filesystem::path& csv) {
  IdlerScan s;
  read_pairs(csv, "bias_a,idler_dbm", s.bias_a, s.idler_dbm);
  const auto meta = read_sidecar(csv);
  s.pump_dbm = sidecar_field<double>(meta, "pump_dbm", csv);
  s.floor_dbm = sidecar_field<double>(meta, "floor_dbm", csv);
  s.validate();
  return s;
}

void write_idler_scan(const std::filesystem::path& csv, const IdlerScan& scan) {
  auto out = open_output(csv);
  out << "bias_a,idler_dbm\n";
  for (std::size_t i = 0; i < scan.bias_a.size(); ++i) {
    out << fmt::format("{:.15g},{:.15g}\n", scan.bias_a[i], scan.idler_dbm[i]);
  }
  auto meta = open_output(sidecar_path(csv));
  meta << nlohmann::json{{"pump_dbm", scan.pump_dbm}, {"floor_dbm", scan.floor_dbm}}.dump(2)
       << '\n';
}

}  // namespace twpa
