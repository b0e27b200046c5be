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

#ifndef CT_CONFIG_HPP
#define CT_CONFIG_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "ct/couplings.hpp"
#include "ct/ga.hpp"
#include "ct/sweep.hpp"

namespace ct {

/// Raised on malformed or inconsistent configuration input; maps to exit
/// code 2 in the CLI.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parsed INI-style document: sections of key = value pairs. Sorted maps so
/// the canonical form (and thus the hash) ignores key order in the file.
using ConfigSection = std::map<std::string, std::string>;
using ConfigDoc = std::map<std::string, ConfigSection>;

/// Parses `[section]` / `key = value` lines; `#` and `;` start comments.
/// Errors carry the line number and offending text.
ConfigDoc parse_config_text(const std::string& text);
ConfigDoc parse_config_file(const std::string& path);

/// Canonical rendering: sections and keys sorted, whitespace normalized.
std::string canonical_config(const ConfigDoc& doc);

/// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view data);

/// Hash of the canonical rendering, as 16 hex digits. Stable under key and
/// section reordering in the source file.
std::string config_hash(const ConfigDoc& doc);

/// Builds the physical configuration from [emitter], [bath], [geometry] and
/// [drive]. Required fields: [bath] temperature_k and [geometry] n_atoms;
/// everything else has the documented defaults. Geometry precedence:
/// positions_m, then gaps_m, then spacing_m (regular chain).
ChainConfig chain_config_from(const ConfigDoc& doc);

/// Reads the [sweep] section into axes over {d, d_j, T, omega}.
SweepSpec sweep_spec_from(const ConfigDoc& doc, const ChainConfig& base);

/// Reads the [dynamics] section (t_min, t_max, points; gamma0*t units).
std::vector<double> time_grid_from(const ConfigDoc& doc);

/// Reads the [ga] section; n_genes fixes the per-gene bounds vector length.
GAConfig ga_config_from(const ConfigDoc& doc, int n_genes);

/// Uniform grid helper (linear in the value).
std::vector<double> linear_grid(double lo, double hi, int n);

}  // namespace ct

#endif  // CT_CONFIG_HPP
