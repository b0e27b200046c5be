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

#include <complex>
#include <random>

#include "ct/liouvillian.hpp"
#include "dense_oracle.hpp"

using namespace ct;

namespace {

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

ChainConfig driven_chain(int n) {
  ChainConfig c = displaced_chain(n, 0.1e-6, 1.03e-6);
  c.bath_T = 361.0;
  const double g0 = gamma0(c.emitter);
  c.gamma_in = 1e-3 * g0;
  c.gamma_out = 1e2 * g0;
  return c;
}

double max_abs(const SparseCd& m) {
  double v = 0.0;
  for (int k = 0; k < m.outerSize(); ++k)
    for (SparseCd::InnerIterator it(m, k); it; ++it)
      v = std::max(v, std::abs(it.value()));
  return v;
}

}  // namespace

TEST_CASE("ladder operator convention: atom 0 on the least significant bit") {
  const auto sm = ladder_ops(2);
  Eigen::MatrixXcd s0 = Eigen::MatrixXcd(sm[0]);
  Eigen::MatrixXcd s1 = Eigen::MatrixXcd(sm[1]);
  // sigma^-_0 lowers bit 0: |01> -> |00>, |11> -> |10>.
  CHECK(s0(0, 1) == Complex(1.0, 0.0));
  CHECK(s0(2, 3) == Complex(1.0, 0.0));
  CHECK(s0.cwiseAbs().sum() == doctest::Approx(2.0));
  // sigma^-_1 lowers bit 1: |10> -> |00>, |11> -> |01>.
  CHECK(s1(0, 2) == Complex(1.0, 0.0));
  CHECK(s1(1, 3) == Complex(1.0, 0.0));
  CHECK(s1.cwiseAbs().sum() == doctest::Approx(2.0));

  // Matches the oracle transcription built from explicit Kronecker products.
  for (int j = 0; j < 2; ++j) {
    const Eigen::MatrixXcd ours = Eigen::MatrixXcd(sm[j]);
    CHECK((ours - ct_oracle::lowering(2, j)).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("vec and unvec are column-major inverses") {
  const DensityMatrix rho = random_density(4, 3);
  const Eigen::VectorXcd v = vec(rho);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) CHECK(v(i + 4 * j) == rho(i, j));
  CHECK((unvec(v, 4) - rho).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("hamiltonian is hermitian and conserves excitation number") {
  const ChainConfig c = driven_chain(3);
  const CouplingTables t = build_coupling_tables(c);
  const Eigen::MatrixXcd h = Eigen::MatrixXcd(build_hamiltonian(c, t));
  CHECK((h - h.adjoint()).cwiseAbs().maxCoeff() < 1e-12 * h.cwiseAbs().maxCoeff());

  Eigen::MatrixXcd ntot = Eigen::MatrixXcd::Zero(8, 8);
  for (const auto& num : number_ops(3)) ntot += Eigen::MatrixXcd(num);
  CHECK((h * ntot - ntot * h).cwiseAbs().maxCoeff() <
        1e-12 * h.cwiseAbs().maxCoeff());

  // Diagonal carries omega/gamma0 per excitation; off-diagonal hops carry
  // lambda_jk/gamma0.
  CHECK(std::abs(h(1, 1) - c.emitter.omega / t.gamma0) < 1e-9);
  CHECK(std::abs(h(1, 2) - t.lambda(0, 1) / t.gamma0) < 1e-9);
}

TEST_CASE("sparse generator matches the dense oracle") {
  for (int n : {2, 3}) {
    for (bool pump : {true, false}) {
      const ChainConfig c = driven_chain(n);
      const CouplingTables t = build_coupling_tables(c);
      const Liouvillian l = assemble_liouvillian(c, t, pump);
      CHECK(l.n_atoms == n);
      CHECK(l.dim == (1 << n));
      CHECK(l.includes_pump == pump);
      const Eigen::MatrixXcd dense = ct_oracle::dense_liouvillian(c, t, pump);
      const double scale = dense.cwiseAbs().maxCoeff();
      const double err = (Eigen::MatrixXcd(l.op) - dense).cwiseAbs().maxCoeff();
      CHECK(err <= 1e-12 * scale);
    }
  }
}

TEST_CASE("sparse generator matches the oracle on an undriven cold chain") {
  ChainConfig c = regular_chain(3, 0.4e-6);
  c.bath_T = 10.0;
  const CouplingTables t = build_coupling_tables(c);
  const Liouvillian l = assemble_liouvillian(c, t, true);
  const Eigen::MatrixXcd dense = ct_oracle::dense_liouvillian(c, t, true);
  const double scale = dense.cwiseAbs().maxCoeff();
  CHECK((Eigen::MatrixXcd(l.op) - dense).cwiseAbs().maxCoeff() <= 1e-12 * scale);
}

TEST_CASE("every component and the full generator preserve the trace") {
  const ChainConfig c = driven_chain(3);
  const CouplingTables t = build_coupling_tables(c);
  CHECK(trace_preservation_defect(build_dissipator_local(c, t)) < 1e-10);
  CHECK(trace_preservation_defect(build_dissipator_nonlocal(c, t)) < 1e-10);
  CHECK(trace_preservation_defect(build_dissipator_pump(c)) < 1e-10);
  CHECK(trace_preservation_defect(build_dissipator_extract(c)) < 1e-10);
  const Liouvillian l = assemble_liouvillian(c, t);
  CHECK(trace_preservation_defect(l.op) < 1e-10);
}

TEST_CASE("generator maps hermitian states to hermitian derivatives") {
  const ChainConfig c = driven_chain(2);
  const CouplingTables t = build_coupling_tables(c);
  const Liouvillian l = assemble_liouvillian(c, t);
  for (unsigned seed : {7u, 8u, 9u}) {
    const DensityMatrix rho = random_density(l.dim, seed);
    const DensityMatrix drho = unvec(l.apply(rho), l.dim);
    CHECK((drho - drho.adjoint()).cwiseAbs().maxCoeff() <
          1e-10 * max_abs(l.op));
    CHECK(std::abs(drho.trace()) < 1e-10 * max_abs(l.op));
  }
}

TEST_CASE("pump and extract dissipators act on the configured sites") {
  ChainConfig c = driven_chain(3);
  c.pump_site = 1;
  c.extract_site = 0;
  const CouplingTables t = build_coupling_tables(c);
  const auto sp = ladder_ops(3);
  const Eigen::MatrixXcd pump = Eigen::MatrixXcd(build_dissipator_pump(c));
  const Eigen::MatrixXcd oracle_pump =
      (c.gamma_in / t.gamma0) *
      ct_oracle::cross_dissipator(ct_oracle::lowering(3, 1).adjoint(),
                                  ct_oracle::lowering(3, 1).adjoint());
  CHECK((pump - oracle_pump).cwiseAbs().maxCoeff() < 1e-14);

  const Eigen::MatrixXcd ext = Eigen::MatrixXcd(build_dissipator_extract(c));
  const Eigen::MatrixXcd oracle_ext =
      (c.gamma_out / t.gamma0) *
      ct_oracle::cross_dissipator(ct_oracle::lowering(3, 0),
                                  ct_oracle::lowering(3, 0));
  CHECK((ext - oracle_ext).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("state helpers") {
  DensityMatrix rho = random_density(4, 21);
  rho *= 3.0;
  rho(0, 1) += Complex(0.0, 1e-3);  // break hermiticity slightly
  const DensityMatrix fixed = normalize_state(rho);
  CHECK(std::abs(fixed.trace() - Complex(1.0, 0.0)) < 1e-14);
  CHECK((fixed - fixed.adjoint()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_NOTHROW(check_density_matrix(random_density(4, 22)));
  DensityMatrix bad = random_density(4, 23);
  bad *= 2.0;
  CHECK_THROWS_AS(check_density_matrix(bad), std::invalid_argument);
  DensityMatrix neg = DensityMatrix::Zero(2, 2);
  neg(0, 0) = 1.5;
  neg(1, 1) = -0.5;
  CHECK_THROWS_AS(check_density_matrix(neg), std::invalid_argument);
}
