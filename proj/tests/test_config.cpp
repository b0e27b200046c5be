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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <string>

#include "ct/config.hpp"

using namespace ct;

namespace {

const char kMinimal[] =
    "[bath]\n"
    "temperature_k = 361\n"
    "[geometry]\n"
    "n_atoms = 4\n";

std::string with_lines(std::initializer_list<const char*> lines) {
  std::string out;
  for (const char* l : lines) {
    out += l;
    out += '\n';
  }
  return out;
}

}  // namespace

TEST_CASE("parser handles sections, comments and whitespace") {
  const ConfigDoc doc = parse_config_text(with_lines({
      "# leading comment",
      "[bath]",
      "  temperature_k =  361   ; trailing comment",
      "",
      "[geometry]",
      "n_atoms=4",
      "[empty_section]",
  }));
  CHECK(doc.at("bath").at("temperature_k") == "361");
  CHECK(doc.at("geometry").at("n_atoms") == "4");
  CHECK(doc.count("empty_section") == 1);
  CHECK(doc.at("empty_section").empty());
}

TEST_CASE("parser reports the offending line") {
  try {
    parse_config_text("[bath]\ntemperature_k\n");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("line 2") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_config_text("[bath\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_text("x = 1\n"), ConfigError);  // no section
  CHECK_THROWS_AS(parse_config_text("[a]\n= 1\n"), ConfigError);  // empty key
  CHECK_THROWS_AS(parse_config_text("[a]\nx = 1\nx = 2\n"), ConfigError);
  CHECK_THROWS_AS(parse_config_file("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("hash is stable under reordering but not under edits") {
  const ConfigDoc a = parse_config_text(
      "[bath]\ntemperature_k = 361\n[geometry]\nn_atoms = 4\nspacing_m = 1e-7\n");
  const ConfigDoc b = parse_config_text(
      "[geometry]\nspacing_m = 1e-7\nn_atoms = 4\n[bath]\ntemperature_k = 361\n");
  CHECK(config_hash(a) == config_hash(b));
  CHECK(config_hash(a).size() == 16);

  const ConfigDoc c = parse_config_text(
      "[bath]\ntemperature_k = 300\n[geometry]\nn_atoms = 4\nspacing_m = 1e-7\n");
  CHECK(config_hash(a) != config_hash(c));

  // Canonical round trip: parsing the canonical form reproduces the hash.
  CHECK(config_hash(parse_config_text(canonical_config(a))) == config_hash(a));
}

TEST_CASE("fnv1a64 reference values") {
  // Standard test vectors for 64-bit FNV-1a.
  CHECK(fnv1a64("") == 14695981039346656037ull);
  CHECK(fnv1a64("a") == 12638187200555641996ull);
  CHECK(fnv1a64("foobar") == 9625390261332436968ull);
}

TEST_CASE("minimal document gets the documented defaults") {
  const ChainConfig c = chain_config_from(parse_config_text(kMinimal));
  CHECK(c.n_atoms() == 4);
  CHECK(c.bath_T == doctest::Approx(361.0));
  CHECK(c.emitter.omega == doctest::Approx(1e14));
  CHECK(c.emitter.mu_mag == doctest::Approx(1e-30));
  CHECK(c.emitter.mu_hat.isApprox(Eigen::Vector3d(0, 0, 1)));
  // Regular chain at the default spacing.
  CHECK(c.positions[1] == doctest::Approx(0.1e-6));
  // Default drives are relative to gamma0.
  const double g0 = gamma0(c.emitter);
  CHECK(c.gamma_in == doctest::Approx(1e-3 * g0));
  CHECK(c.gamma_out == doctest::Approx(1e2 * g0));
  CHECK(c.pump_site == 0);
  CHECK(c.extract_index() == 3);
}

TEST_CASE("geometry precedence: positions beat gaps beat spacing") {
  const ChainConfig pos = chain_config_from(parse_config_text(with_lines({
      "[bath]", "temperature_k = 361",
      "[geometry]", "n_atoms = 3",
      "positions_m = 0, 1e-7, 5e-7",
      "gaps_m = 2e-7, 2e-7",
      "spacing_m = 9e-7",
  })));
  CHECK(pos.positions == std::vector<double>{0.0, 1e-7, 5e-7});

  const ChainConfig gaps = chain_config_from(parse_config_text(with_lines({
      "[bath]", "temperature_k = 361",
      "[geometry]", "n_atoms = 3",
      "gaps_m = 2e-7, 3e-7",
      "spacing_m = 9e-7",
  })));
  CHECK(gaps.positions[1] == doctest::Approx(2e-7));
  CHECK(gaps.positions[2] == doctest::Approx(5e-7));

  const ChainConfig sp = chain_config_from(parse_config_text(with_lines({
      "[bath]", "temperature_k = 361",
      "[geometry]", "n_atoms = 3", "spacing_m = 9e-7",
  })));
  CHECK(sp.positions[2] == doctest::Approx(1.8e-6));
}

TEST_CASE("missing and malformed fields carry their names") {
  try {
    chain_config_from(parse_config_text("[geometry]\nn_atoms = 4\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[bath] temperature_k") !=
          std::string::npos);
  }
  try {
    chain_config_from(parse_config_text("[bath]\ntemperature_k = 361\n"));
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("[geometry] n_atoms") != std::string::npos);
  }
  CHECK_THROWS_AS(chain_config_from(parse_config_text(
                      "[bath]\ntemperature_k = warm\n[geometry]\nn_atoms = 4\n")),
                  ConfigError);
  CHECK_THROWS_AS(chain_config_from(parse_config_text(
                      "[bath]\ntemperature_k = 361\n[geometry]\nn_atoms = 1\n")),
                  ConfigError);
  // Length mismatches.
  CHECK_THROWS_AS(
      chain_config_from(parse_config_text(with_lines({
          "[bath]", "temperature_k = 361",
          "[geometry]", "n_atoms = 3", "positions_m = 0, 1e-7",
      }))),
      ConfigError);
  CHECK_THROWS_AS(
      chain_config_from(parse_config_text(with_lines({
          "[bath]", "temperature_k = 361",
          "[geometry]", "n_atoms = 3", "gaps_m = 1e-7",
      }))),
      ConfigError);
  // Physically invalid values surface as ConfigError too.
  CHECK_THROWS_AS(
      chain_config_from(parse_config_text(with_lines({
          "[bath]", "temperature_k = -5",
          "[geometry]", "n_atoms = 3",
      }))),
      ConfigError);
}

TEST_CASE("drive keys: relative or absolute, never both") {
  const ChainConfig rel = chain_config_from(parse_config_text(with_lines({
      "[bath]", "temperature_k = 361",
      "[geometry]", "n_atoms = 4",
      "[drive]", "gamma_in_over_gamma0 = 2e-3", "gamma_out_over_gamma0 = 50",
  })));
  const double g0 = gamma0(rel.emitter);
  CHECK(rel.gamma_in == doctest::Approx(2e-3 * g0));
  CHECK(rel.gamma_out == doctest::Approx(50 * g0));

  const ChainConfig abs = chain_config_from(parse_config_text(with_lines({
      "[bath]", "temperature_k = 361",
      "[geometry]", "n_atoms = 4",
      "[drive]", "gamma_in_s_inv = 0.004", "gamma_out_s_inv = 400",
  })));
  CHECK(abs.gamma_in == doctest::Approx(0.004));
  CHECK(abs.gamma_out == doctest::Approx(400.0));

  CHECK_THROWS_AS(chain_config_from(parse_config_text(with_lines({
                      "[bath]", "temperature_k = 361",
                      "[geometry]", "n_atoms = 4",
                      "[drive]", "gamma_in_over_gamma0 = 1e-3",
                      "gamma_in_s_inv = 0.004",
                  }))),
                  ConfigError);

  const ChainConfig sites = chain_config_from(parse_config_text(with_lines({
      "[bath]", "temperature_k = 361",
      "[geometry]", "n_atoms = 4",
      "[drive]", "pump_site = 1", "extract_site = 2",
  })));
  CHECK(sites.pump_site == 1);
  CHECK(sites.extract_index() == 2);
}

TEST_CASE("emitter orientation is normalized, zero vector rejected") {
  const ChainConfig c = chain_config_from(parse_config_text(with_lines({
      "[emitter]", "orientation = 0, 3, 4",
      "[bath]", "temperature_k = 361",
      "[geometry]", "n_atoms = 4",
  })));
  CHECK(c.emitter.mu_hat.isApprox(Eigen::Vector3d(0.0, 0.6, 0.8)));
  CHECK_THROWS_AS(chain_config_from(parse_config_text(with_lines({
                      "[emitter]", "orientation = 0, 0, 0",
                      "[bath]", "temperature_k = 361",
                      "[geometry]", "n_atoms = 4",
                  }))),
                  ConfigError);
}

TEST_CASE("sweep section, one and two axes") {
  const ConfigDoc doc = parse_config_text(with_lines({
      kMinimal,
      "[sweep]", "param = d", "min = 1e-7", "max = 3e-6", "points = 5",
  }));
  const ChainConfig base = chain_config_from(doc);
  const SweepSpec one = sweep_spec_from(doc, base);
  REQUIRE(one.axes.size() == 1);
  CHECK(one.axes[0].param == "d");
  CHECK(one.axes[0].values.size() == 5);
  CHECK(one.axes[0].values.front() == doctest::Approx(1e-7));
  CHECK(one.axes[0].values.back() == doctest::Approx(3e-6));
  CHECK_FALSE(one.want_deltas);

  const ConfigDoc doc2 = parse_config_text(with_lines({
      kMinimal,
      "[sweep]", "param = d", "min = 1e-7", "max = 3e-6", "points = 4",
      "param2 = T", "min2 = 10", "max2 = 1000", "points2 = 3",
      "scale2 = linear", "deltas = true",
  }));
  const SweepSpec two = sweep_spec_from(doc2, chain_config_from(doc2));
  REQUIRE(two.axes.size() == 2);
  CHECK(two.axes[1].param == "T");
  CHECK(two.axes[1].values.size() == 3);
  CHECK(two.axes[1].values[1] == doctest::Approx(505.0));
  CHECK(two.want_deltas);

  CHECK_THROWS_AS(sweep_spec_from(parse_config_text(kMinimal), base),
                  ConfigError);
  CHECK_THROWS_AS(sweep_spec_from(parse_config_text(with_lines({
                                      kMinimal,
                                      "[sweep]", "param = d",
                                      "min = 0", "max = 3e-6",  // log with 0
                                  })),
                                  base),
                  ConfigError);
}

TEST_CASE("dynamics time grid") {
  const std::vector<double> def = time_grid_from(parse_config_text(kMinimal));
  REQUIRE(def.size() == 241);
  CHECK(def.front() == doctest::Approx(1e-4));
  CHECK(def.back() == doctest::Approx(1e4));

  const std::vector<double> custom = time_grid_from(parse_config_text(
      with_lines({kMinimal, "[dynamics]", "t_min = 1e-2", "t_max = 1e2",
                  "points = 3"})));
  REQUIRE(custom.size() == 3);
  CHECK(custom[1] == doctest::Approx(1.0));

  CHECK_THROWS_AS(time_grid_from(parse_config_text(with_lines(
                      {kMinimal, "[dynamics]", "t_min = 5", "t_max = 1"}))),
                  ConfigError);
  CHECK_THROWS_AS(time_grid_from(parse_config_text(with_lines(
                      {kMinimal, "[dynamics]", "points = 1"}))),
                  ConfigError);
}

TEST_CASE("ga section") {
  const GAConfig def = ga_config_from(parse_config_text(kMinimal), 2);
  CHECK(def.population_size == 1000);
  CHECK(def.elite_window == 20);
  REQUIRE(def.bounds.size() == 2);
  CHECK(def.bounds[0].first == doctest::Approx(0.0));
  CHECK(def.bounds[0].second == doctest::Approx(3e-6));

  const GAConfig ga = ga_config_from(
      parse_config_text(with_lines({
          kMinimal,
          "[ga]", "population_size = 64", "elite_window = 8",
          "mutation_rate = 0.3", "seed = 42", "gene_min_m = 1e-7",
          "gene_max_m = 2e-6", "max_generations = 77",
      })),
      3);
  CHECK(ga.population_size == 64);
  CHECK(ga.elite_window == 8);
  CHECK(ga.mutation_rate == doctest::Approx(0.3));
  CHECK(ga.seed == 42);
  CHECK(ga.max_generations == 77);
  REQUIRE(ga.bounds.size() == 3);
  CHECK(ga.bounds[2].second == doctest::Approx(2e-6));

  CHECK_THROWS_AS(ga_config_from(parse_config_text(with_lines({
                                     kMinimal,
                                     "[ga]", "mutation_rate = 2.0",
                                 })),
                                 2),
                  ConfigError);
}

TEST_CASE("grid helpers") {
  const std::vector<double> lin = linear_grid(0.0, 1.0, 5);
  REQUIRE(lin.size() == 5);
  CHECK(lin[2] == doctest::Approx(0.5));
  CHECK(linear_grid(3.0, 3.0, 1)[0] == doctest::Approx(3.0));
}
