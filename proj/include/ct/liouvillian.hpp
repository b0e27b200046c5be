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

#ifndef CT_LIOUVILLIAN_HPP
#define CT_LIOUVILLIAN_HPP

#include "ct/couplings.hpp"
#include "ct/operators.hpp"

namespace ct {

// Internal unit policy: rates are expressed in units of gamma0, energies in
// units of hbar*omega where they appear, and time in units of 1/gamma0. The
// superoperators below are therefore dimensionless; multiply physical times
// by gamma0 before using them.

/// Master-equation generator acting on column-vectorized density matrices,
/// plus the configuration it was assembled from.
struct Liouvillian {
  SparseCd op;          // dim^2 x dim^2, rates in gamma0 units
  int n_atoms = 0;
  int dim = 0;
  bool includes_pump = false;
  ChainConfig config;
  CouplingTables tables;

  Eigen::VectorXcd apply(const DensityMatrix& rho) const { return op * vec(rho); }
};

/// System Hamiltonian H_a + H_Lambda in units of hbar*gamma0 (i.e. divided
/// by hbar*gamma0). Hermitian, commutes with the total excitation number.
SparseCd build_hamiltonian(const ChainConfig& config, const CouplingTables& tables);

/// Single-atom bath dissipators: rate n*gamma0 raising and (1+n)*gamma0
/// lowering on every atom. Returned in gamma0 units.
SparseCd build_dissipator_local(const ChainConfig& config, const CouplingTables& tables);

/// Collective pair dissipators with rates gamma_jk, summed over ordered
/// pairs j != k (the hermitian conjugate of each j<k term is the swapped
/// ordered pair). Returned in gamma0 units.
SparseCd build_dissipator_nonlocal(const ChainConfig& config, const CouplingTables& tables);

/// Incoherent pump: raising Lindblad term on the pump site, rate gamma_in.
SparseCd build_dissipator_pump(const ChainConfig& config);

/// Extraction: lowering Lindblad term on the extraction site, rate gamma_out.
SparseCd build_dissipator_extract(const ChainConfig& config);

/// Full generator. include_pump=false omits only the pump dissipator (the
/// baseline used to compute E0).
Liouvillian assemble_liouvillian(const ChainConfig& config,
                                 const CouplingTables& tables,
                                 bool include_pump = true);

/// Largest absolute value of vec(1)^T L, normalized by the largest entry of
/// L; zero for a trace-preserving generator.
double trace_preservation_defect(const SparseCd& super_op);

}  // namespace ct

#endif  // CT_LIOUVILLIAN_HPP
