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
//
// End-to-end tests of the chainsim binary. The path to the binary comes
// from the CHAINSIM_BIN environment variable (set by the CTest fixture).

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "ct/config.hpp"
#include "json.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string binary() {
  const char* env = std::getenv("CHAINSIM_BIN");
  REQUIRE_MESSAGE(env != nullptr,
                  "CHAINSIM_BIN must point at the chainsim binary");
  return env;
}

struct CmdResult {
  int exit_code = -1;
  std::string output;
};

CmdResult run_cmd(const std::string& args) {
  static int counter = 0;
  const fs::path log =
      fs::temp_directory_path() / ("chainsim_cli_" + std::to_string(::getpid()) +
                                   "_" + std::to_string(counter++) + ".log");
  const std::string cmd =
      binary() + " " + args + " > " + log.string() + " 2>&1";
  const int raw = std::system(cmd.c_str());
  CmdResult r;
  r.exit_code = (raw == -1) ? -1 : WEXITSTATUS(raw);
  std::ifstream in(log);
  std::ostringstream buf;
  buf << in.rdbuf();
  r.output = buf.str();
  fs::remove(log);
  return r;
}

fs::path scratch_dir(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() /
                       ("chainsim_test_" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

fs::path write_config(const fs::path& dir, const std::string& body) {
  const fs::path path = dir / "config.ini";
  std::ofstream out(path);
  out << body;
  return path;
}

const char kReferenceConfig[] =
    "[bath]\n"
    "temperature_k = 361\n"
    "[geometry]\n"
    "n_atoms = 4\n"
    "gaps_m = 1e-7, 1e-7, 1.03e-6\n"
    "[drive]\n"
    "gamma_in_over_gamma0 = 1e-3\n"
    "gamma_out_over_gamma0 = 1e2\n";

}  // namespace

TEST_CASE("efficiency run: output files, values and provenance") {
  const fs::path dir = scratch_dir("efficiency");
  const fs::path cfg = write_config(dir, kReferenceConfig);
  const fs::path out = dir / "out";
  const CmdResult r = run_cmd("efficiency --config " + cfg.string() +
                              " --out " + out.string());
  CHECK(r.exit_code == 0);
  CHECK(r.output.find("chi = 10.2") != std::string::npos);

  REQUIRE(fs::exists(out / "efficiency.json"));
  REQUIRE(fs::exists(out / "manifest.json"));
  REQUIRE(fs::exists(out / "config_used.ini"));

  std::ifstream ej(out / "efficiency.json");
  const json eff = json::parse(ej);
  CHECK(eff.at("chi").get<double>() == doctest::Approx(10.2079).epsilon(1e-4));
  CHECK(eff.at("P").get<double>() ==
        doctest::Approx(8.513285e-04).epsilon(1e-4));
  CHECK(eff.at("units") == "hbar*omega*gamma0");

  // The manifest's hash matches a fresh hash of the copied config, so a run
  // can always be traced back to its exact inputs.
  std::ifstream mj(out / "manifest.json");
  const json manifest = json::parse(mj);
  const ct::ConfigDoc copied =
      ct::parse_config_file((out / "config_used.ini").string());
  CHECK(manifest.at("config_hash").get<std::string>() ==
        ct::config_hash(copied));
  CHECK(manifest.at("config_hash").get<std::string>() ==
        eff.at("config_hash").get<std::string>());
  CHECK(!manifest.at("code_version").get<std::string>().empty());
  const auto outputs = manifest.at("outputs").get<std::vector<std::string>>();
  CHECK(std::find(outputs.begin(), outputs.end(), "efficiency.json") !=
        outputs.end());
}

TEST_CASE("global flags may follow the subcommand name") {
  const fs::path dir = scratch_dir("flag_order");
  const fs::path cfg = write_config(dir, kReferenceConfig);
  const fs::path out = dir / "out";
  const CmdResult r =
      run_cmd("efficiency --tolerance 1e-9 --threads 1 --config " +
              cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);
}

TEST_CASE("configuration problems exit with code 2") {
  const fs::path dir = scratch_dir("errors2");
  // Missing required field.
  const fs::path bad = write_config(dir, "[geometry]\nn_atoms = 4\n");
  CmdResult r = run_cmd("efficiency --config " + bad.string() + " --out " +
                        (dir / "o1").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("[bath] temperature_k") != std::string::npos);

  // Missing --config entirely.
  r = run_cmd("efficiency --out " + (dir / "o2").string());
  CHECK(r.exit_code == 2);

  // Unknown option is a parse error.
  r = run_cmd("efficiency --definitely-not-a-flag");
  CHECK(r.exit_code == 2);

  // Unknown figure id.
  r = run_cmd("figure fig99 --out " + (dir / "o3").string());
  CHECK(r.exit_code == 2);
  CHECK(r.output.find("fig99") != std::string::npos);

  // No subcommand at all.
  r = run_cmd("");
  CHECK(r.exit_code == 2);
}

TEST_CASE("numerical domain problems exit with code 3") {
  const fs::path dir = scratch_dir("errors3");
  // gamma_in = 0 makes chi undefined.
  const fs::path cfg = write_config(dir,
                                    "[bath]\n"
                                    "temperature_k = 361\n"
                                    "[geometry]\n"
                                    "n_atoms = 4\n"
                                    "[drive]\n"
                                    "gamma_in_over_gamma0 = 0\n");
  const CmdResult r = run_cmd("efficiency --config " + cfg.string() +
                              " --out " + (dir / "out").string());
  CHECK(r.exit_code == 3);
}

TEST_CASE("sweep run: csv, json and the sweep cache") {
  const fs::path dir = scratch_dir("sweep");
  const fs::path cfg = write_config(dir, std::string(kReferenceConfig) +
                                             "[sweep]\n"
                                             "param = d\n"
                                             "min = 0.8e-6\n"
                                             "max = 1.2e-6\n"
                                             "points = 3\n");
  const fs::path out = dir / "out";
  CmdResult r = run_cmd("sweep --config " + cfg.string() + " --out " +
                        out.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out / "sweep.csv"));
  REQUIRE(fs::exists(out / "sweep.json"));
  REQUIRE(fs::exists(out / "manifest.json"));

  // Header plus one line per grid point.
  std::ifstream csv(out / "sweep.csv");
  int lines = 0;
  std::string line;
  while (std::getline(csv, line))
    if (!line.empty()) ++lines;
  CHECK(lines == 4);

  // A cache entry appears, and a second identical run reuses it.
  REQUIRE(fs::exists(out / "cache"));
  std::size_t cached = 0;
  for (const auto& e : fs::directory_iterator(out / "cache")) {
    (void)e;
    ++cached;
  }
  CHECK(cached == 1);
  r = run_cmd("sweep --config " + cfg.string() + " --out " + out.string());
  CHECK(r.exit_code == 0);

  std::ifstream sj(out / "sweep.json");
  const json sweep = json::parse(sj);
  REQUIRE(sweep.at("points").size() == 3);
  CHECK(sweep.at("points")[0].at("ok").get<bool>());
  CHECK(sweep.at("points")[0].at("chi").is_number());
}

TEST_CASE("dynamics run emits the time series") {
  const fs::path dir = scratch_dir("dynamics");
  const fs::path cfg = write_config(dir,
                                    "[bath]\n"
                                    "temperature_k = 361\n"
                                    "[geometry]\n"
                                    "n_atoms = 2\n"
                                    "gaps_m = 1.03e-6\n"
                                    "[dynamics]\n"
                                    "t_min = 1e-2\n"
                                    "t_max = 1e2\n"
                                    "points = 5\n");
  const fs::path out = dir / "out";
  const CmdResult r = run_cmd("dynamics --config " + cfg.string() + " --out " +
                              out.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out / "dynamics.csv"));
  std::ifstream csv(out / "dynamics.csv");
  int lines = 0;
  std::string line;
  std::string header;
  while (std::getline(csv, line)) {
    if (lines == 0) header = line;
    if (!line.empty()) ++lines;
  }
  CHECK(lines == 6);  // header + 5 points
  CHECK(header.find("gamma0_t") != std::string::npos);
  CHECK(header.find("chi") != std::string::npos);
}

TEST_CASE("ga run is reproducible under --seed") {
  const fs::path dir = scratch_dir("ga");
  const fs::path cfg = write_config(dir, std::string(kReferenceConfig) +
                                             "[ga]\n"
                                             "population_size = 12\n"
                                             "elite_window = 3\n"
                                             "max_generations = 3\n"
                                             "gene_min_m = 0.5e-6\n"
                                             "gene_max_m = 1.5e-6\n");
  const fs::path out_a = dir / "a";
  const fs::path out_b = dir / "b";
  CmdResult r = run_cmd("ga --config " + cfg.string() + " --out " +
                        out_a.string() + " --seed 5");
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out_a / "ga_result.json"));
  REQUIRE(fs::exists(out_a / "ga_log.jsonl"));

  r = run_cmd("ga --config " + cfg.string() + " --out " + out_b.string() +
              " --seed 5");
  CHECK(r.exit_code == 0);

  std::ifstream ja(out_a / "ga_result.json");
  std::ifstream jb(out_b / "ga_result.json");
  const json a = json::parse(ja);
  const json b = json::parse(jb);
  CHECK(a.at("best") == b.at("best"));
  CHECK(a.at("seed").get<std::uint64_t>() == 5);
  CHECK(a.at("generations") == b.at("generations"));

  // The log has one line per generation, each valid JSON.
  std::ifstream log(out_a / "ga_log.jsonl");
  std::string line;
  int lines = 0;
  while (std::getline(log, line)) {
    if (line.empty()) continue;
    const json row = json::parse(line);
    CHECK(row.contains("best_chi"));
    CHECK(row.at("elite").is_array());
    ++lines;
  }
  CHECK(lines == a.at("generations").get<int>());
}

TEST_CASE("figure runs are self-contained") {
  const fs::path dir = scratch_dir("figure");
  const fs::path out = dir / "out";
  const CmdResult r = run_cmd("figure fig2 --out " + out.string());
  CHECK(r.exit_code == 0);
  REQUIRE(fs::exists(out / "fig2.csv"));
  REQUIRE(fs::exists(out / "manifest.json"));
  std::ifstream csv(out / "fig2.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header.find("d_m") != std::string::npos);
  CHECK(header.find("chi_T300K") != std::string::npos);
}
