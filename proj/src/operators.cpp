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

#include "ct/operators.hpp"

#include <Eigen/Eigenvalues>
#include <stdexcept>

namespace ct {

std::vector<SparseCd> ladder_ops(int n_atoms) {
  if (n_atoms < 1 || n_atoms > 10)
    throw std::invalid_argument("ladder_ops supports 1 <= N <= 10");
  const int dim = 1 << n_atoms;
  std::vector<SparseCd> ops;
  ops.reserve(n_atoms);
  for (int j = 0; j < n_atoms; ++j) {
    SparseCd op(dim, dim);
    std::vector<Eigen::Triplet<Complex>> trips;
    trips.reserve(dim / 2);
    const int bit = 1 << j;
    for (int b = 0; b < dim; ++b) {
      // <b - bit| sigma^-_j |b> = 1 when bit j of b is set
      if (b & bit) trips.emplace_back(b ^ bit, b, Complex(1.0, 0.0));
    }
    op.setFromTriplets(trips.begin(), trips.end());
    ops.push_back(std::move(op));
  }
  return ops;
}

std::vector<SparseCd> number_ops(int n_atoms) {
  auto lows = ladder_ops(n_atoms);
  std::vector<SparseCd> nums;
  nums.reserve(lows.size());
  for (auto& l : lows) nums.push_back(SparseCd(l.adjoint()) * l);
  return nums;
}

Eigen::VectorXcd vec(const DensityMatrix& rho) {
  return Eigen::Map<const Eigen::VectorXcd>(rho.data(), rho.size());
}

DensityMatrix unvec(const Eigen::VectorXcd& v, int dim) {
  if (v.size() != static_cast<Eigen::Index>(dim) * dim)
    throw std::invalid_argument("unvec: size mismatch");
  return Eigen::Map<const DensityMatrix>(v.data(), dim, dim);
}

DensityMatrix normalize_state(const DensityMatrix& rho) {
  DensityMatrix h = 0.5 * (rho + rho.adjoint());
  const double tr = h.trace().real();
  if (tr == 0.0) throw std::invalid_argument("normalize_state: zero trace");
  return h / tr;
}

void check_density_matrix(const DensityMatrix& rho, double tol,
                          double tol_psd) {
  if (rho.rows() != rho.cols())
    throw std::invalid_argument("density matrix must be square");
  const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
  if (herm > tol)
    throw std::invalid_argument("density matrix not Hermitian, deviation " +
                                std::to_string(herm));
  const double tr_err = std::abs(rho.trace() - Complex(1.0, 0.0));
  if (tr_err > tol)
    throw std::invalid_argument("density matrix trace deviates by " +
                                std::to_string(tr_err));
  Eigen::SelfAdjointEigenSolver<DensityMatrix> es(0.5 * (rho + rho.adjoint()),
                                                  Eigen::EigenvaluesOnly);
  const double min_ev = es.eigenvalues().minCoeff();
  if (min_ev < -tol_psd)
    throw std::invalid_argument("density matrix has eigenvalue " +
                                std::to_string(min_ev));
}

}  // namespace ct
