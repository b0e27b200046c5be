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

#include <cmath>
#include <random>

#include "ct/fluxes.hpp"

using namespace ct;

namespace {

ChainConfig reference_chain() {
  ChainConfig c = displaced_chain(4, 0.1e-6, 1.03e-6);
  c.bath_T = 361.0;
  const double g0 = gamma0(c.emitter);
  c.gamma_in = 1e-3 * g0;
  c.gamma_out = 1e2 * g0;
  return c;
}

DensityMatrix random_density(int dim, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  Eigen::MatrixXcd a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = Complex(gauss(rng), gauss(rng));
  DensityMatrix rho = a * a.adjoint();
  rho /= rho.trace().real();
  return rho;
}

}  // namespace

TEST_CASE("trace formulas agree with the coherence closed forms") {
  // The hop and collective channels have two derivations: the defining trace
  // Tr(H_x D(rho)) and closed forms in the cross coherences. They must agree
  // on arbitrary states, not just stationary ones.
  const ChainConfig c = reference_chain();
  const CouplingTables t = build_coupling_tables(c);
  for (unsigned seed : {1u, 2u, 3u, 4u}) {
    const FluxReport f = flux_report(random_density(16, seed), c, t);
    CHECK((f.hop - f.hop_from_coherences).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((f.nl - f.nl_from_coherences).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("channel structure on random states") {
  const ChainConfig c = reference_chain();
  const CouplingTables t = build_coupling_tables(c);
  const FluxReport f = flux_report(random_density(16, 5), c, t);
  const int n = 4;
  CHECK(f.hop.rows() == n);
  CHECK(f.loc.size() == n);
  // Antisymmetric hop channel, symmetric collective channel.
  CHECK((f.hop + f.hop.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((f.nl - f.nl.transpose()).cwiseAbs().maxCoeff() < 1e-14);
  for (int j = 0; j < n; ++j) CHECK(f.nl(j, j) == 0.0);
  // Coherence matrix is hermitian with the excited populations on the
  // diagonal; the report stores ground-state populations.
  CHECK((f.coherences - f.coherences.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  for (int j = 0; j < n; ++j)
    CHECK(f.populations(j) ==
          doctest::Approx(1.0 - f.coherences(j, j).real()).epsilon(1e-12));
}

TEST_CASE("stationary efficiency at the frozen reference point") {
  const ChainConfig c = reference_chain();
  const CouplingTables t = build_coupling_tables(c);
  const EfficiencyResult r = efficiency(c, t);
  // Values frozen from an independently validated solve of this exact
  // configuration.
  CHECK(r.chi == doctest::Approx(10.20789).epsilon(1e-4));
  CHECK(r.P == doctest::Approx(8.513285e-04).epsilon(1e-5));
  CHECK(r.E == doctest::Approx(1.991685e-01).epsilon(1e-5));
  CHECK(r.E0 == doctest::Approx(1.904782e-01).epsilon(1e-5));
  CHECK(r.chi == doctest::Approx((r.E - r.E0) / r.P).epsilon(1e-12));
}

TEST_CASE("stationary energy balance closes for every channel") {
  const ChainConfig c = reference_chain();
  const CouplingTables t = build_coupling_tables(c);
  FluxReport with_pump;
  FluxReport no_pump;
  efficiency_with_reports(c, t, with_pump, no_pump);
  CHECK(energy_balance_defect(with_pump) < 1e-8);
  CHECK(energy_balance_defect(no_pump) < 1e-8);
  // Both stationary reports carry positive extraction and the pumped one a
  // positive pump flux.
  CHECK(with_pump.pump_P > 0.0);
  CHECK(with_pump.extract_E > 0.0);
  CHECK(no_pump.pump_P == 0.0);
}

TEST_CASE("delta report subtracts channel by channel") {
  const ChainConfig c = reference_chain();
  const CouplingTables t = build_coupling_tables(c);
  const DeltaReport d = delta_fluxes(c, t);
  CHECK((d.hop - (d.with_pump.hop - d.no_pump.hop)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK((d.nl - (d.with_pump.nl - d.no_pump.nl)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK((d.loc - (d.with_pump.loc - d.no_pump.loc)).cwiseAbs().maxCoeff() <
        1e-14);
  CHECK(d.P == doctest::Approx(d.with_pump.pump_P));
  for (int j = 0; j < 4; ++j) {
    CHECK(d.hop_atom(j) == doctest::Approx(d.hop.row(j).sum()).epsilon(1e-12));
    CHECK(d.nl_atom(j) == doctest::Approx(d.nl.row(j).sum()).epsilon(1e-12));
  }
  // The pump energy enters at the pumped site and the difference of the
  // delta channels balances: dP - dE + sum dQloc + 2 sum_{j<k} dQnl = 0.
  double acc = d.P - (d.with_pump.extract_E - d.no_pump.extract_E);
  acc += d.loc.sum();
  for (int j = 0; j < 4; ++j)
    for (int k = j + 1; k < 4; ++k) acc += 2.0 * d.nl(j, k);
  CHECK(std::abs(acc) < 1e-8);
}

TEST_CASE("undefined efficiency is an error, not a number") {
  ChainConfig c = reference_chain();
  c.gamma_in = 0.0;
  const CouplingTables t = build_coupling_tables(c);
  CHECK_THROWS_AS(efficiency(c, t), UndefinedEfficiencyError);
}

TEST_CASE("time-resolved efficiency flags early undefined points") {
  const ChainConfig c = reference_chain();
  const CouplingTables t = build_coupling_tables(c);
  std::vector<double> grid;
  for (int i = 0; i <= 16; ++i) grid.push_back(std::pow(10.0, -4.0 + 0.5 * i));
  const EfficiencySeries s =
      time_resolved_efficiency(c, t, grid, gibbs_state(c));
  REQUIRE(s.times.size() == grid.size());
  REQUIRE(s.chi.size() == grid.size());
  REQUIRE(s.defined.size() == grid.size());
  // The pump flux is finite from the start here, so every point is defined
  // and the late-time value approaches the stationary efficiency.
  const EfficiencyResult stat = efficiency(c, t);
  CHECK(s.defined.back());
  CHECK(s.chi.back() == doctest::Approx(stat.chi).epsilon(1e-3));
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (s.defined[i]) {
      CHECK(std::isfinite(s.chi[i]));
      CHECK(s.P[i] > kPumpFloor);
    }
  }
}

TEST_CASE("local channel sign follows detailed balance") {
  // A fully inverted atom dumps energy into the bath; a ground-state atom
  // absorbs from it.
  ChainConfig c;
  c.positions = {0.0};
  c.bath_T = 361.0;
  const CouplingTables t = build_coupling_tables(c);
  DensityMatrix excited = DensityMatrix::Zero(2, 2);
  excited(1, 1) = 1.0;
  CHECK(flux_report(excited, c, t).loc(0) < 0.0);
  DensityMatrix ground = DensityMatrix::Zero(2, 2);
  ground(0, 0) = 1.0;
  CHECK(flux_report(ground, c, t).loc(0) > 0.0);
  // Thermal state: zero net local flux.
  const FluxReport th = flux_report(gibbs_state(c), c, t);
  CHECK(std::abs(th.loc(0)) < 1e-14);
}
