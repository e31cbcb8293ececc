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

// Readers and writers for measurement files. Spectrum traces and idler scans
// carry their metadata in a JSON sidecar next to the CSV (trace.csv ->
// trace.json).

#ifndef TWPA_IO_HPP
#define TWPA_IO_HPP

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "twpa/data_analysis.hpp"

namespace twpa {

inline constexpr const char* kResistanceHeader =
    "wafer_x,wafer_y,array_id,junction_index,resistance_ohm,process";

std::vector<ResistanceRecord> read_resistance_csv(std::istream& in);
std::vector<ResistanceRecord> read_resistance_csv(const std::filesystem::path& path);
void write_resistance_csv(std::ostream& out, const std::vector<ResistanceRecord>& records);

std::filesystem::path sidecar_path(const std::filesystem::path& csv);

/// frequency_hz,power_dbm plus sidecar {rbw_hz, label}.
SpectrumTrace read_spectrum(const std::filesystem::path& csv);
void write_spectrum(const std::filesystem::path& csv, const SpectrumTrace& trace);

/// bias_a,idler_dbm plus sidecar {pump_dbm, floor_dbm}.
IdlerScan read_idler_scan(const std::filesystem::path& csv);
void write_idler_scan(const std::filesystem::path& csv, const IdlerScan& scan);

}  // namespace twpa

#endif  // TWPA_IO_HPP
