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

#ifndef CT_COUPLINGS_HPP
#define CT_COUPLINGS_HPP

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <vector>

namespace ct {

/// Error for geometries that put two emitters closer than the separation
/// floor, where the dipole-dipole coupling diverges as 1/r^3.
class SingularGeometryError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Minimum allowed pairwise separation (m).
inline constexpr double kSeparationFloor = 1e-9;

/// Two-level emitter: transition frequency and electric dipole moment.
struct EmitterParams {
  double omega = 1e14;    // transition angular frequency (rad/s)
  double mu_mag = 1e-30;  // dipole magnitude (C m)
  Eigen::Vector3d mu_hat = Eigen::Vector3d(0, 0, 1);  // dipole orientation

  void validate() const;
};

/// Linear chain of identical emitters in a blackbody bath, with an
/// incoherent pump on one site and extraction on another.
struct ChainConfig {
  std::vector<double> positions;  // x coordinates (m), strictly increasing
  EmitterParams emitter;
  double bath_T = 300.0;    // bath temperature (K)
  double gamma_in = 0.0;    // pump rate (1/s)
  double gamma_out = 0.0;   // extraction rate (1/s)
  int pump_site = 0;
  int extract_site = -1;    // -1 means the last atom

  int n_atoms() const { return static_cast<int>(positions.size()); }
  int extract_index() const {
    return extract_site < 0 ? n_atoms() - 1 : extract_site;
  }
  void validate() const;
};

/// Regular chain of n atoms with lattice constant a, starting at x=0.
ChainConfig regular_chain(int n, double a);

/// Regular chain where the last gap (atom N-1 to atom e) is d instead of a.
ChainConfig displaced_chain(int n, double a, double d);

/// Chain built from explicit gaps: the first three atoms sit at 0, a, 2a and
/// each remaining atom j is placed at position(j-1) + gaps[j-3].
ChainConfig gap_chain(double a, const std::vector<double>& gaps);

/// All pairwise coupling coefficients for one chain. Rates in 1/s.
struct CouplingTables {
  double gamma0 = 0.0;  // vacuum spontaneous-emission rate (1/s)
  double n_th = 0.0;    // blackbody occupation at the transition frequency
  Eigen::MatrixXd lambda;      // dipole-dipole shifts, zero diagonal (1/s)
  Eigen::MatrixXd gamma_pair;  // collective decay rates, diagonal gamma0 (1/s)
};

/// Vacuum decay rate |mu|^2 omega^3 / (3 pi eps0 hbar c^3).
double gamma0(const EmitterParams& emitter);

/// Bose occupation 1/(exp(hbar omega / kB T) - 1). Requires T > 0.
double thermal_occupation(double omega, double T);

/// Dipole-dipole coupling between two emitters separated by r_vec (m).
double lambda_jk(const EmitterParams& emitter, const Eigen::Vector3d& r_vec);

/// Collective decay rate of an emitter pair separated by r_vec (m). Finite
/// for every separation; tends to gamma0 at contact.
double gamma_jk(const EmitterParams& emitter, const Eigen::Vector3d& r_vec);

/// Batch evaluation of gamma0, n_th and the pairwise tables.
CouplingTables build_coupling_tables(const ChainConfig& config);

}  // namespace ct

#endif  // CT_COUPLINGS_HPP
