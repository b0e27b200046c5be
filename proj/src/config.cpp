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

#include "ct/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ct {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

[[noreturn]] void fail_line(int line, const std::string& what) {
  throw ConfigError("config line " + std::to_string(line) + ": " + what);
}

[[noreturn]] void fail_field(const std::string& section, const std::string& key,
                             const std::string& what) {
  throw ConfigError("config field [" + section + "] " + key + ": " + what);
}

const std::string* find(const ConfigDoc& doc, const std::string& section,
                        const std::string& key) {
  const auto sec = doc.find(section);
  if (sec == doc.end()) return nullptr;
  const auto it = sec->second.find(key);
  if (it == sec->second.end()) return nullptr;
  return &it->second;
}

std::string need(const ConfigDoc& doc, const std::string& section,
                 const std::string& key) {
  const std::string* v = find(doc, section, key);
  if (v == nullptr)
    throw ConfigError("missing required field [" + section + "] " + key);
  return *v;
}

double to_double(const std::string& section, const std::string& key,
                 const std::string& raw) {
  try {
    std::size_t used = 0;
    const double v = std::stod(raw, &used);
    if (trim(raw.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  fail_field(section, key, "expected a number, got '" + raw + "'");
}

long to_long(const std::string& section, const std::string& key,
             const std::string& raw) {
  try {
    std::size_t used = 0;
    const long v = std::stol(raw, &used);
    if (trim(raw.substr(used)).empty()) return v;
  } catch (const std::exception&) {
  }
  fail_field(section, key, "expected an integer, got '" + raw + "'");
}

bool to_bool(const std::string& section, const std::string& key,
             const std::string& raw) {
  std::string v = trim(raw);
  std::transform(v.begin(), v.end(), v.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  fail_field(section, key, "expected a boolean, got '" + raw + "'");
}

std::vector<double> to_double_list(const std::string& section,
                                   const std::string& key,
                                   const std::string& raw) {
  std::string cleaned = raw;
  std::replace(cleaned.begin(), cleaned.end(), ',', ' ');
  std::istringstream in(cleaned);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(to_double(section, key, tok));
  if (out.empty()) fail_field(section, key, "expected a list of numbers");
  return out;
}

double get_double(const ConfigDoc& doc, const std::string& section,
                  const std::string& key, double fallback) {
  const std::string* v = find(doc, section, key);
  return v != nullptr ? to_double(section, key, *v) : fallback;
}

long get_long(const ConfigDoc& doc, const std::string& section,
              const std::string& key, long fallback) {
  const std::string* v = find(doc, section, key);
  return v != nullptr ? to_long(section, key, *v) : fallback;
}

bool get_bool(const ConfigDoc& doc, const std::string& section,
              const std::string& key, bool fallback) {
  const std::string* v = find(doc, section, key);
  return v != nullptr ? to_bool(section, key, *v) : fallback;
}

std::string get_string(const ConfigDoc& doc, const std::string& section,
                       const std::string& key, const std::string& fallback) {
  const std::string* v = find(doc, section, key);
  return v != nullptr ? *v : fallback;
}

std::vector<double> grid_for(const std::string& scale, double lo, double hi,
                             int n) {
  if (!(lo <= hi) || n < 1)
    throw ConfigError("sweep grid needs min <= max and points >= 1");
  if (scale == "log") {
    if (!(lo > 0.0)) throw ConfigError("log-scale sweep needs min > 0");
    return log_grid(lo, hi, n);
  }
  if (scale == "linear") return linear_grid(lo, hi, n);
  throw ConfigError("sweep scale must be 'log' or 'linear', got '" + scale +
                    "'");
}

}  // namespace

ConfigDoc parse_config_text(const std::string& text) {
  ConfigDoc doc;
  std::istringstream in(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const std::size_t cut = line.find_first_of("#;");
    if (cut != std::string::npos) line.resize(cut);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') fail_line(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) fail_line(line_no, "empty section name");
      doc[section];  // sections may legitimately stay empty
      continue;
    }
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail_line(line_no, "expected 'key = value', got '" + line + "'");
    if (section.empty()) fail_line(line_no, "key outside of any [section]");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) fail_line(line_no, "empty key");
    if (!doc[section].emplace(key, value).second)
      fail_line(line_no, "duplicate key '" + key + "' in [" + section + "]");
  }
  return doc;
}

ConfigDoc parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

std::string canonical_config(const ConfigDoc& doc) {
  std::string out;
  for (const auto& [section, entries] : doc) {
    out += "[" + section + "]\n";
    for (const auto& [key, value] : entries) out += key + " = " + value + "\n";
    out += "\n";
  }
  return out;
}

std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string config_hash(const ConfigDoc& doc) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(canonical_config(doc))));
  return buf;
}

ChainConfig chain_config_from(const ConfigDoc& doc) {
  ChainConfig c;
  c.emitter.omega = get_double(doc, "emitter", "omega_rad_s", 1e14);
  c.emitter.mu_mag = get_double(doc, "emitter", "dipole_c_m", 1e-30);
  const std::vector<double> orient = to_double_list(
      "emitter", "orientation", get_string(doc, "emitter", "orientation", "0 0 1"));
  if (orient.size() != 3)
    fail_field("emitter", "orientation", "expected three components");
  Eigen::Vector3d mu_hat(orient[0], orient[1], orient[2]);
  const double norm = mu_hat.norm();
  if (norm <= 0.0)
    fail_field("emitter", "orientation", "vector must be non-zero");
  c.emitter.mu_hat = mu_hat / norm;

  c.bath_T = to_double("bath", "temperature_k", need(doc, "bath", "temperature_k"));

  const long n_atoms = to_long("geometry", "n_atoms", need(doc, "geometry", "n_atoms"));
  if (n_atoms < 2) fail_field("geometry", "n_atoms", "need at least two atoms");
  if (const std::string* v = find(doc, "geometry", "positions_m")) {
    const std::vector<double> pos = to_double_list("geometry", "positions_m", *v);
    if (static_cast<long>(pos.size()) != n_atoms)
      fail_field("geometry", "positions_m", "length must equal n_atoms");
    c.positions = pos;
  } else if (const std::string* g = find(doc, "geometry", "gaps_m")) {
    const std::vector<double> gaps = to_double_list("geometry", "gaps_m", *g);
    if (static_cast<long>(gaps.size()) != n_atoms - 1)
      fail_field("geometry", "gaps_m", "length must equal n_atoms - 1");
    c.positions.assign(1, 0.0);
    for (double gap : gaps) c.positions.push_back(c.positions.back() + gap);
  } else {
    const double a = get_double(doc, "geometry", "spacing_m", 0.1e-6);
    c.positions.clear();
    for (long j = 0; j < n_atoms; ++j)
      c.positions.push_back(static_cast<double>(j) * a);
  }

  const double g0 = gamma0(c.emitter);
  const bool in_rel = find(doc, "drive", "gamma_in_over_gamma0") != nullptr;
  const bool in_abs = find(doc, "drive", "gamma_in_s_inv") != nullptr;
  if (in_rel && in_abs)
    fail_field("drive", "gamma_in_s_inv",
               "give either the relative or the absolute pump rate, not both");
  c.gamma_in = in_abs ? get_double(doc, "drive", "gamma_in_s_inv", 0.0)
                      : get_double(doc, "drive", "gamma_in_over_gamma0", 1e-3) * g0;
  const bool out_rel = find(doc, "drive", "gamma_out_over_gamma0") != nullptr;
  const bool out_abs = find(doc, "drive", "gamma_out_s_inv") != nullptr;
  if (out_rel && out_abs)
    fail_field("drive", "gamma_out_s_inv",
               "give either the relative or the absolute extraction rate, not both");
  c.gamma_out = out_abs ? get_double(doc, "drive", "gamma_out_s_inv", 0.0)
                        : get_double(doc, "drive", "gamma_out_over_gamma0", 1e2) * g0;
  c.pump_site = static_cast<int>(get_long(doc, "drive", "pump_site", 0));
  c.extract_site = static_cast<int>(get_long(doc, "drive", "extract_site", -1));

  try {
    c.validate();
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("invalid configuration: ") + ex.what());
  }
  return c;
}

SweepSpec sweep_spec_from(const ConfigDoc& doc, const ChainConfig& base) {
  SweepSpec spec;
  spec.base = base;
  if (doc.find("sweep") == doc.end())
    throw ConfigError("missing required section [sweep]");

  SweepAxis axis;
  axis.param = need(doc, "sweep", "param");
  axis.atom_index = static_cast<int>(get_long(doc, "sweep", "atom_index", -1));
  axis.values = grid_for(get_string(doc, "sweep", "scale", "log"),
                         to_double("sweep", "min", need(doc, "sweep", "min")),
                         to_double("sweep", "max", need(doc, "sweep", "max")),
                         static_cast<int>(get_long(doc, "sweep", "points", 60)));
  spec.axes.push_back(axis);

  if (find(doc, "sweep", "param2") != nullptr) {
    SweepAxis second;
    second.param = need(doc, "sweep", "param2");
    second.atom_index = static_cast<int>(get_long(doc, "sweep", "atom_index2", -1));
    second.values =
        grid_for(get_string(doc, "sweep", "scale2", "log"),
                 to_double("sweep", "min2", need(doc, "sweep", "min2")),
                 to_double("sweep", "max2", need(doc, "sweep", "max2")),
                 static_cast<int>(get_long(doc, "sweep", "points2", 40)));
    spec.axes.push_back(second);
  }
  spec.want_deltas = get_bool(doc, "sweep", "deltas", false);
  return spec;
}

std::vector<double> time_grid_from(const ConfigDoc& doc) {
  const double t_min = get_double(doc, "dynamics", "t_min", 1e-4);
  const double t_max = get_double(doc, "dynamics", "t_max", 1e4);
  const int points = static_cast<int>(get_long(doc, "dynamics", "points", 241));
  if (!(t_min > 0.0) || !(t_max > t_min))
    throw ConfigError("dynamics time window must satisfy 0 < t_min < t_max");
  if (points < 2) throw ConfigError("dynamics points must be >= 2");
  return log_grid(t_min, t_max, points);
}

GAConfig ga_config_from(const ConfigDoc& doc, int n_genes) {
  GAConfig ga;
  ga.population_size =
      static_cast<int>(get_long(doc, "ga", "population_size", ga.population_size));
  ga.survival_fraction =
      get_double(doc, "ga", "survival_fraction", ga.survival_fraction);
  ga.mutation_rate = get_double(doc, "ga", "mutation_rate", ga.mutation_rate);
  ga.mutation_sigma_frac =
      get_double(doc, "ga", "mutation_sigma_frac", ga.mutation_sigma_frac);
  ga.convergence_tol =
      get_double(doc, "ga", "convergence_tol", ga.convergence_tol);
  ga.elite_window =
      static_cast<int>(get_long(doc, "ga", "elite_window", ga.elite_window));
  ga.max_generations =
      static_cast<int>(get_long(doc, "ga", "max_generations", ga.max_generations));
  ga.seed = static_cast<std::uint64_t>(get_long(doc, "ga", "seed", 0));
  const double lo = get_double(doc, "ga", "gene_min_m", kGeneLowerDefault);
  const double hi = get_double(doc, "ga", "gene_max_m", kGeneUpperDefault);
  ga.bounds.assign(static_cast<std::size_t>(std::max(0, n_genes)), {lo, hi});
  try {
    ga.validate(n_genes);
  } catch (const std::exception& ex) {
    throw ConfigError(std::string("invalid [ga] section: ") + ex.what());
  }
  return ga;
}

std::vector<double> linear_grid(double lo, double hi, int n) {
  if (n < 1) throw ConfigError("grid needs at least one point");
  std::vector<double> grid(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double f = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
    grid[static_cast<std::size_t>(i)] = lo + f * (hi - lo);
  }
  return grid;
}

}  // namespace ct
