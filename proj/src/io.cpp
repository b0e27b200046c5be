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

#include "ct/io.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "ct/config.hpp"

namespace ct {

namespace {

using nlohmann::json;

json mat_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::MatrixXd mat_from_json(const json& j) {
  const Eigen::Index rows = static_cast<Eigen::Index>(j.size());
  const Eigen::Index cols = rows > 0 ? static_cast<Eigen::Index>(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index k = 0; k < cols; ++k)
      m(i, k) = j[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)]
                    .get<double>();
  return m;
}

json vec_to_json(const Eigen::VectorXd& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v(i));
  return out;
}

Eigen::VectorXd vec_from_json(const json& j) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (Eigen::Index i = 0; i < v.size(); ++i)
    v(i) = j[static_cast<std::size_t>(i)].get<double>();
  return v;
}

json flux_to_json(const FluxReport& f) {
  json j;
  j["hop"] = mat_to_json(f.hop);
  j["loc"] = vec_to_json(f.loc);
  j["nl"] = mat_to_json(f.nl);
  j["P"] = f.pump_P;
  j["E"] = f.extract_E;
  j["coherences_re"] = mat_to_json(f.coherences.real());
  j["coherences_im"] = mat_to_json(f.coherences.imag());
  j["populations"] = vec_to_json(f.populations);
  j["hop_from_coherences"] = mat_to_json(f.hop_from_coherences);
  j["nl_from_coherences"] = mat_to_json(f.nl_from_coherences);
  return j;
}

FluxReport flux_from_json(const json& j) {
  FluxReport f;
  f.hop = mat_from_json(j.at("hop"));
  f.loc = vec_from_json(j.at("loc"));
  f.nl = mat_from_json(j.at("nl"));
  f.pump_P = j.at("P").get<double>();
  f.extract_E = j.at("E").get<double>();
  const Eigen::MatrixXd re = mat_from_json(j.at("coherences_re"));
  const Eigen::MatrixXd im = mat_from_json(j.at("coherences_im"));
  f.coherences = re.cast<Complex>() + Complex(0.0, 1.0) * im.cast<Complex>();
  f.populations = vec_from_json(j.at("populations"));
  f.hop_from_coherences = mat_from_json(j.at("hop_from_coherences"));
  f.nl_from_coherences = mat_from_json(j.at("nl_from_coherences"));
  return f;
}

json delta_to_json(const DeltaReport& d) {
  json j;
  j["hop"] = mat_to_json(d.hop);
  j["loc"] = vec_to_json(d.loc);
  j["nl"] = mat_to_json(d.nl);
  j["hop_atom"] = vec_to_json(d.hop_atom);
  j["nl_atom"] = vec_to_json(d.nl_atom);
  j["P"] = d.P;
  j["with_pump"] = flux_to_json(d.with_pump);
  j["no_pump"] = flux_to_json(d.no_pump);
  return j;
}

DeltaReport delta_from_json(const json& j) {
  DeltaReport d;
  d.hop = mat_from_json(j.at("hop"));
  d.loc = vec_from_json(j.at("loc"));
  d.nl = mat_from_json(j.at("nl"));
  d.hop_atom = vec_from_json(j.at("hop_atom"));
  d.nl_atom = vec_from_json(j.at("nl_atom"));
  d.P = j.at("P").get<double>();
  d.with_pump = flux_from_json(j.at("with_pump"));
  d.no_pump = flux_from_json(j.at("no_pump"));
  return d;
}

}  // namespace

std::string iso8601_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

void ensure_dir(const std::string& path) {
  std::error_code ec;
  std::filesystem::create_directories(path, ec);
  if (ec) throw std::runtime_error("cannot create directory " + path + ": " +
                                   ec.message());
}

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (i > 0) out << ',';
    out << header[i];
  }
  out << '\n';
  char buf[32];
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i > 0) out << ',';
      std::snprintf(buf, sizeof(buf), "%.12g", row[i]);
      out << buf;
    }
    out << '\n';
  }
  if (!out) throw std::runtime_error("short write on " + path);
}

void write_manifest(const std::string& path, const RunManifest& manifest) {
  json j;
  j["config_hash"] = manifest.config_hash;
  j["code_version"] = manifest.code_version;
  j["seed"] = manifest.seed;
  j["command_line"] = manifest.command_line;
  j["started_at"] = manifest.started_at;
  j["finished_at"] = manifest.finished_at;
  j["outputs"] = manifest.outputs;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

json sweep_to_json(const SweepResult& result) {
  json j;
  j["code_version"] = result.code_version;
  j["config_hash"] = result.config_hash;
  j["timestamp"] = result.timestamp;
  json axes = json::array();
  for (const SweepAxis& axis : result.axes) {
    json a;
    a["param"] = axis.param;
    a["atom_index"] = axis.atom_index;
    a["values"] = axis.values;
    axes.push_back(std::move(a));
  }
  j["axes"] = std::move(axes);
  json points = json::array();
  for (const SweepPoint& pt : result.points) {
    json p;
    p["coords"] = pt.coords;
    p["chi"] = pt.eff.chi;
    p["E"] = pt.eff.E;
    p["E0"] = pt.eff.E0;
    p["P"] = pt.eff.P;
    p["ok"] = pt.ok;
    p["error"] = pt.error;
    if (pt.deltas.has_value()) p["deltas"] = delta_to_json(*pt.deltas);
    points.push_back(std::move(p));
  }
  j["points"] = std::move(points);
  return j;
}

SweepResult sweep_from_json(const json& j) {
  SweepResult result;
  result.code_version = j.at("code_version").get<std::string>();
  result.config_hash = j.value("config_hash", std::string());
  result.timestamp = j.value("timestamp", std::string());
  for (const json& a : j.at("axes")) {
    SweepAxis axis;
    axis.param = a.at("param").get<std::string>();
    axis.atom_index = a.at("atom_index").get<int>();
    axis.values = a.at("values").get<std::vector<double>>();
    result.axes.push_back(std::move(axis));
  }
  for (const json& p : j.at("points")) {
    SweepPoint pt;
    pt.coords = p.at("coords").get<std::vector<double>>();
    pt.eff.chi = p.at("chi").get<double>();
    pt.eff.E = p.at("E").get<double>();
    pt.eff.E0 = p.at("E0").get<double>();
    pt.eff.P = p.at("P").get<double>();
    pt.ok = p.at("ok").get<bool>();
    pt.error = p.at("error").get<std::string>();
    if (p.contains("deltas")) pt.deltas = delta_from_json(p.at("deltas"));
    result.points.push_back(std::move(pt));
  }
  return result;
}

std::string sweep_cache_key(const SweepSpec& spec) {
  std::string blob;
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof(buf), "%.17g|", v);
    blob += buf;
  };
  const ChainConfig& c = spec.base;
  for (double p : c.positions) put(p);
  put(c.emitter.omega);
  put(c.emitter.mu_mag);
  for (int i = 0; i < 3; ++i) put(c.emitter.mu_hat(i));
  put(c.bath_T);
  put(c.gamma_in);
  put(c.gamma_out);
  blob += std::to_string(c.pump_site) + "|" + std::to_string(c.extract_site) + "|";
  for (const SweepAxis& axis : spec.axes) {
    blob += axis.param + "|" + std::to_string(axis.atom_index) + "|";
    for (double v : axis.values) put(v);
  }
  blob += spec.want_deltas ? "D" : "d";
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(fnv1a64(blob)));
  return buf;
}

bool load_cached_sweep(const std::string& cache_dir, const std::string& key,
                       SweepResult& result) {
  const std::string path = cache_dir + "/" + key + ".json";
  std::ifstream in(path);
  if (!in) return false;
  try {
    json j;
    in >> j;
    result = sweep_from_json(j);
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

void store_cached_sweep(const std::string& cache_dir, const std::string& key,
                        SweepResult& result) {
  ensure_dir(cache_dir);
  if (result.timestamp.empty()) result.timestamp = iso8601_now();
  const std::string path = cache_dir + "/" + key + ".json";
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << sweep_to_json(result).dump() << '\n';
}

}  // namespace ct
