// Copyright 2026 The chainsim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CT_IO_HPP
#define CT_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

#include "ct/sweep.hpp"

namespace ct {

/// UTC wall-clock timestamp, e.g. 2026-08-14T09:30:00Z.
std::string iso8601_now();

/// create_directories wrapper; throws std::runtime_error on failure.
void ensure_dir(const std::string& path);

/// CSV with one header row; numbers rendered with %.12g.
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);

/// Reproducibility metadata written next to every run's outputs.
struct RunManifest {
  std::string config_hash;
  std::string code_version;
  std::uint64_t seed = 0;
  std::string command_line;
  std::string started_at;
  std::string finished_at;
  std::vector<std::string> outputs;
};

void write_manifest(const std::string& path, const RunManifest& manifest);

nlohmann::json sweep_to_json(const SweepResult& result);
SweepResult sweep_from_json(const nlohmann::json& j);

/// Cache key: hash of the physical base configuration plus the axis grids,
/// so figures sharing a sweep reuse each other's points.
std::string sweep_cache_key(const SweepSpec& spec);

/// Loads <cache_dir>/<key>.json if present and readable.
bool load_cached_sweep(const std::string& cache_dir, const std::string& key,
                       SweepResult& result);

/// Stores the result under <cache_dir>/<key>.json, stamping the timestamp.
void store_cached_sweep(const std::string& cache_dir, const std::string& key,
                        SweepResult& result);

}  // namespace ct

#endif  // CT_IO_HPP
