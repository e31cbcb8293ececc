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

#ifndef TWPA_CLI_PIPELINE_HPP
#define TWPA_CLI_PIPELINE_HPP

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "config.hpp"

namespace twpa::cli {

struct ManifestEntry {
  std::string path;  // relative to the output directory
  std::string sha256;
  std::uintmax_t bytes = 0;
};

struct Manifest {
  std::vector<std::string> pipelines;
  std::vector<ManifestEntry> files;
  /// Per-point sweep failures and analysis warnings.
  std::vector<nlohmann::json> failures;
  std::vector<std::string> warnings;
  nlohmann::json summary = nlohmann::json::object();
  std::string timestamp;

  bool partial() const { return !failures.empty(); }
};

std::string sha256_hex(std::string_view data);

/// Runs every pipeline in config.pipelines, writing into config.output_dir.
/// Writes manifest.json last; it is not listed among its own files.
Manifest run_pipeline(const RunConfig& config);

nlohmann::json to_json(const Manifest& manifest, const RunConfig& config);

}  // namespace twpa::cli

#endif  // TWPA_CLI_PIPELINE_HPP
