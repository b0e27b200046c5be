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

#ifndef CT_OPERATORS_HPP
#define CT_OPERATORS_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <complex>
#include <vector>

namespace ct {

using Complex = std::complex<double>;
using SparseCd = Eigen::SparseMatrix<Complex>;
using DensityMatrix = Eigen::MatrixXcd;

/// Per-atom lowering operators on the 2^N product space. Atom j acts on bit
/// j of the basis index; bit value 0 is |g>, 1 is |e>. The raising operator
/// is the adjoint.
std::vector<SparseCd> ladder_ops(int n_atoms);

/// sigma^+_j sigma^-_j for each atom (excited-state projectors).
std::vector<SparseCd> number_ops(int n_atoms);

/// Column-major vectorization of a density matrix.
Eigen::VectorXcd vec(const DensityMatrix& rho);

/// Inverse of vec for a dim x dim matrix.
DensityMatrix unvec(const Eigen::VectorXcd& v, int dim);

/// Hermitize, clamp the trace to 1. Used when assembling states from solver
/// output; never applied inside integrators.
DensityMatrix normalize_state(const DensityMatrix& rho);

/// Checks Hermiticity, unit trace and spectrum >= -tol_psd; throws
/// std::invalid_argument with a diagnostic on violation.
void check_density_matrix(const DensityMatrix& rho, double tol = 1e-10,
                          double tol_psd = 1e-8);

}  // namespace ct

#endif  // CT_OPERATORS_HPP
