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

#include "ct/liouvillian.hpp"

#include <bit>
#include <cmath>
#include <vector>

namespace ct {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Column-major vectorization: A rho B maps to (B^T kron A) vec(rho). For
// A(i,j), B(k,l) the superoperator entry is (l*dim+i, k*dim+j).
void add_sandwich(std::vector<Triplet>& trips, const SparseCd& a,
                  const SparseCd& b, Complex scale) {
  const int dim = static_cast<int>(a.rows());
  for (int ca = 0; ca < a.outerSize(); ++ca) {
    for (SparseCd::InnerIterator ita(a, ca); ita; ++ita) {
      for (int cb = 0; cb < b.outerSize(); ++cb) {
        for (SparseCd::InnerIterator itb(b, cb); itb; ++itb) {
          trips.emplace_back(itb.col() * dim + ita.row(),
                             itb.row() * dim + ita.col(),
                             scale * ita.value() * itb.value());
        }
      }
    }
  }
}

// M rho term: (I kron M).
void add_left(std::vector<Triplet>& trips, const SparseCd& m, Complex scale) {
  const int dim = static_cast<int>(m.rows());
  for (int c = 0; c < m.outerSize(); ++c) {
    for (SparseCd::InnerIterator it(m, c); it; ++it) {
      for (int k = 0; k < dim; ++k)
        trips.emplace_back(k * dim + it.row(), k * dim + it.col(),
                           scale * it.value());
    }
  }
}

// rho M term: (M^T kron I).
void add_right(std::vector<Triplet>& trips, const SparseCd& m, Complex scale) {
  const int dim = static_cast<int>(m.rows());
  for (int c = 0; c < m.outerSize(); ++c) {
    for (SparseCd::InnerIterator it(m, c); it; ++it) {
      for (int i = 0; i < dim; ++i)
        trips.emplace_back(it.col() * dim + i, it.row() * dim + i,
                           scale * it.value());
    }
  }
}

// rate * (Ja rho Jb^dag - 1/2 {Jb^dag Ja, rho})
void add_cross_dissipator(std::vector<Triplet>& trips, double rate,
                          const SparseCd& ja, const SparseCd& jb) {
  if (rate == 0.0) return;
  const SparseCd jb_dag = jb.adjoint();
  add_sandwich(trips, ja, jb_dag, Complex(rate, 0.0));
  const SparseCd m = jb_dag * ja;
  add_left(trips, m, Complex(-0.5 * rate, 0.0));
  add_right(trips, m, Complex(-0.5 * rate, 0.0));
}

void add_commutator(std::vector<Triplet>& trips, const SparseCd& h) {
  add_left(trips, h, Complex(0.0, -1.0));
  add_right(trips, h, Complex(0.0, 1.0));
}

SparseCd from_triplets(std::vector<Triplet>& trips, int dim2) {
  SparseCd m(dim2, dim2);
  m.setFromTriplets(trips.begin(), trips.end());
  m.prune([](int, int, const Complex& v) { return v != Complex(0.0, 0.0); });
  return m;
}

}  // namespace

SparseCd build_hamiltonian(const ChainConfig& config,
                           const CouplingTables& tables) {
  const int n = config.n_atoms();
  const int dim = 1 << n;
  const auto lows = ladder_ops(n);
  const double g0 = tables.gamma0;

  std::vector<Triplet> trips;
  const double w = config.emitter.omega / g0;
  for (int b = 0; b < dim; ++b) {
    const int mexc = std::popcount(static_cast<unsigned>(b));
    if (mexc) trips.emplace_back(b, b, Complex(w * mexc, 0.0));
  }
  SparseCd h(dim, dim);
  h.setFromTriplets(trips.begin(), trips.end());

  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const double lam = tables.lambda(j, k) / g0;
      if (lam == 0.0) continue;
      const SparseCd hop = SparseCd(lows[j].adjoint()) * lows[k];
      h += lam * (hop + SparseCd(hop.adjoint()));
    }
  }
  return h;
}

SparseCd build_dissipator_local(const ChainConfig& config,
                                const CouplingTables& tables) {
  const int n = config.n_atoms();
  const int dim2 = (1 << n) * (1 << n);
  const auto lows = ladder_ops(n);
  const double nth = tables.n_th;

  std::vector<Triplet> trips;
  for (int j = 0; j < n; ++j) {
    const SparseCd raise = lows[j].adjoint();
    add_cross_dissipator(trips, 1.0 + nth, lows[j], lows[j]);
    add_cross_dissipator(trips, nth, raise, raise);
  }
  return from_triplets(trips, dim2);
}

SparseCd build_dissipator_nonlocal(const ChainConfig& config,
                                   const CouplingTables& tables) {
  const int n = config.n_atoms();
  const int dim2 = (1 << n) * (1 << n);
  const auto lows = ladder_ops(n);
  const double nth = tables.n_th;

  std::vector<Triplet> trips;
  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const double g = tables.gamma_pair(j, k) / tables.gamma0;
      if (g == 0.0) continue;
      const SparseCd raise_j = lows[j].adjoint();
      const SparseCd raise_k = lows[k].adjoint();
      add_cross_dissipator(trips, g * (1.0 + nth), lows[j], lows[k]);
      add_cross_dissipator(trips, g * nth, raise_j, raise_k);
    }
  }
  return from_triplets(trips, dim2);
}

SparseCd build_dissipator_pump(const ChainConfig& config) {
  const int n = config.n_atoms();
  const int dim2 = (1 << n) * (1 << n);
  const auto lows = ladder_ops(n);
  const double g0 = gamma0(config.emitter);

  std::vector<Triplet> trips;
  const SparseCd raise = lows[config.pump_site].adjoint();
  add_cross_dissipator(trips, config.gamma_in / g0, raise, raise);
  return from_triplets(trips, dim2);
}

SparseCd build_dissipator_extract(const ChainConfig& config) {
  const int n = config.n_atoms();
  const int dim2 = (1 << n) * (1 << n);
  const auto lows = ladder_ops(n);
  const double g0 = gamma0(config.emitter);

  std::vector<Triplet> trips;
  add_cross_dissipator(trips, config.gamma_out / g0, lows[config.extract_index()],
                       lows[config.extract_index()]);
  return from_triplets(trips, dim2);
}

Liouvillian assemble_liouvillian(const ChainConfig& config,
                                 const CouplingTables& tables,
                                 bool include_pump) {
  config.validate();
  Liouvillian l;
  l.n_atoms = config.n_atoms();
  l.dim = 1 << l.n_atoms;
  l.includes_pump = include_pump;
  l.config = config;
  l.tables = tables;

  const SparseCd h = build_hamiltonian(config, tables);
  std::vector<Triplet> trips;
  add_commutator(trips, h);
  l.op = from_triplets(trips, l.dim * l.dim);
  l.op += build_dissipator_local(config, tables);
  l.op += build_dissipator_nonlocal(config, tables);
  if (include_pump && config.gamma_in > 0.0)
    l.op += build_dissipator_pump(config);
  if (config.gamma_out > 0.0) l.op += build_dissipator_extract(config);
  l.op.makeCompressed();
  return l;
}

double trace_preservation_defect(const SparseCd& super_op) {
  const int dim2 = static_cast<int>(super_op.rows());
  const int dim = static_cast<int>(std::lround(std::sqrt(double(dim2))));
  Eigen::VectorXcd tr = Eigen::VectorXcd::Zero(dim2);
  for (int i = 0; i < dim; ++i) tr(i * dim + i) = Complex(1.0, 0.0);
  const Eigen::VectorXcd row = super_op.transpose() * tr;
  double scale = 0.0;
  for (int c = 0; c < super_op.outerSize(); ++c)
    for (SparseCd::InnerIterator it(super_op, c); it; ++it)
      scale = std::max(scale, std::abs(it.value()));
  if (scale == 0.0) return 0.0;
  return row.cwiseAbs().maxCoeff() / scale;
}

}  // namespace ct
