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

#include "ct/steady.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseLU>
#include <bit>
#include <cmath>
#include <limits>
#include <vector>

#include "ct/constants.hpp"

namespace ct {

namespace {

// Forward-error sentinel. On strongly ill-conditioned generators the
// bordered solve can return a vector with a tiny residual (it is backward
// stable) that is nowhere near a quantum state: eigenvalues of order one or
// worse below zero. The residual test cannot see that, an eigenvalue bound
// can.
bool state_physical(const DensityMatrix& rho) {
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(rho, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff() >= -1e-6;
}

double max_entry(const SparseCd& m) {
  double s = 0.0;
  for (int c = 0; c < m.outerSize(); ++c)
    for (SparseCd::InnerIterator it(m, c); it; ++it)
      s = std::max(s, std::abs(it.value()));
  return s;
}

// L with row 0 replaced by the trace-normalization row.
SparseCd bordered_matrix(const SparseCd& l, int dim) {
  std::vector<Eigen::Triplet<Complex>> trips;
  trips.reserve(l.nonZeros() + dim);
  for (int c = 0; c < l.outerSize(); ++c)
    for (SparseCd::InnerIterator it(l, c); it; ++it)
      if (it.row() != 0) trips.emplace_back(it.row(), it.col(), it.value());
  for (int i = 0; i < dim; ++i)
    trips.emplace_back(0, i * dim + i, Complex(1.0, 0.0));
  SparseCd a(l.rows(), l.cols());
  a.setFromTriplets(trips.begin(), trips.end());
  a.makeCompressed();
  return a;
}

double residual_of(const SparseCd& l, const Eigen::VectorXcd& x, double scale) {
  return (l * x).cwiseAbs().maxCoeff() / scale;
}

double g_default_steady_tol = 1e-10;

}  // namespace

void set_default_steady_tol(double tol) {
  if (tol > 0.0) g_default_steady_tol = tol;
}

double default_steady_tol() { return g_default_steady_tol; }

SteadyStateResult steady_state(const Liouvillian& l, double tol) {
  if (tol <= 0.0) tol = default_steady_tol();
  const int dim = l.dim;
  const int dim2 = dim * dim;
  const double scale = std::max(max_entry(l.op), 1.0);

  SteadyStateResult best;
  best.residual = std::numeric_limits<double>::infinity();

  const SparseCd a = bordered_matrix(l.op, dim);
  Eigen::VectorXcd b = Eigen::VectorXcd::Zero(dim2);
  b(0) = Complex(1.0, 0.0);

  Eigen::SparseLU<SparseCd> lu;
  lu.analyzePattern(a);
  lu.factorize(a);
  if (lu.info() == Eigen::Success) {
    Eigen::VectorXcd x = lu.solve(b);
    // iterative refinement against the bordered system
    int iters = 0;
    for (; iters < 3; ++iters) {
      const Eigen::VectorXcd r = b - a * x;
      const Eigen::VectorXcd dx = lu.solve(r);
      if (!dx.allFinite()) break;
      x += dx;
      if (dx.cwiseAbs().maxCoeff() < 1e-16 * x.cwiseAbs().maxCoeff()) break;
    }
    if (x.allFinite()) {
      DensityMatrix rho = normalize_state(unvec(x, dim));
      if (state_physical(rho)) {
        best.rho = rho;
        best.residual = residual_of(l.op, vec(rho), scale);
        best.method = "bordered-lu";
        best.iterations = iters;
      }
    }
  }

  if (best.residual <= tol) return best;

  // Fallback: inverse iteration with a small diagonal shift, started from
  // the bordered solution when available.
  const double sigma = 1e-12 * scale;
  SparseCd shifted = l.op;
  SparseCd eye(dim2, dim2);
  eye.setIdentity();
  shifted -= Complex(sigma, 0.0) * eye;
  Eigen::SparseLU<SparseCd> lu2;
  lu2.analyzePattern(shifted);
  lu2.factorize(shifted);
  if (lu2.info() == Eigen::Success) {
    Eigen::VectorXcd x;
    if (best.rho.size() > 0) {
      x = vec(best.rho);
    } else {
      x = Eigen::VectorXcd::Zero(dim2);
      for (int i = 0; i < dim; ++i) x(i * dim + i) = Complex(1.0 / dim, 0.0);
    }
    for (int it = 0; it < 50; ++it) {
      Eigen::VectorXcd y = lu2.solve(x);
      if (!y.allFinite()) break;
      x = y / y.cwiseAbs().maxCoeff();
      DensityMatrix rho = normalize_state(unvec(x, dim));
      const double res = residual_of(l.op, vec(rho), scale);
      if (res < best.residual && state_physical(rho)) {
        best.rho = rho;
        best.residual = res;
        best.method = "inverse-iteration";
        best.iterations = it + 1;
      }
      if (best.residual <= tol) return best;
    }
  }

  if (!(best.residual <= tol)) {
    throw SolverError(
        "steady_state found no physical state within tolerance: residual " +
        std::to_string(best.residual) + " > " + std::to_string(tol));
  }
  return best;
}

DensityMatrix gibbs_state(const ChainConfig& config) {
  config.validate();
  const int n = config.n_atoms();
  const int dim = 1 << n;
  const double x = kHbar * config.emitter.omega / (kBoltzmann * config.bath_T);
  const double w = std::exp(-x);          // Boltzmann weight per excitation
  const double z1 = 1.0 + w;              // single-atom partition function
  DensityMatrix rho = DensityMatrix::Zero(dim, dim);
  for (int b = 0; b < dim; ++b) {
    const int m = std::popcount(static_cast<unsigned>(b));
    rho(b, b) = std::pow(w, m) / std::pow(z1, n);
  }
  return rho;
}

}  // namespace ct
