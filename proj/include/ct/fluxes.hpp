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

#ifndef CT_FLUXES_HPP
#define CT_FLUXES_HPP

#include <vector>

#include "ct/couplings.hpp"
#include "ct/operators.hpp"
#include "ct/steady.hpp"

namespace ct {

/// Raised when chi is requested with a vanishing pump flux.
class UndefinedEfficiencyError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Every heat-flux channel of one state. All fluxes are in units of
/// hbar * omega * gamma0; positive values mean energy flowing into the
/// atom(s). Populations are ground-state populations.
struct FluxReport {
  Eigen::MatrixXd hop;  // antisymmetric; hop(j,k) > 0: j absorbs from k
  Eigen::VectorXd loc;  // single-atom exchange with the bath
  Eigen::MatrixXd nl;   // symmetric, zero diagonal; collective pair exchange
  double pump_P = 0.0;
  double extract_E = 0.0;
  Eigen::MatrixXcd coherences;  // c(j,k) = <sigma+_j sigma-_k>
  Eigen::VectorXd populations;  // ground-state populations

  // Closed-form cross-checks evaluated from the coherences; the primary
  // channels above come from the defining trace formulas.
  Eigen::MatrixXd hop_from_coherences;
  Eigen::MatrixXd nl_from_coherences;
};

struct EfficiencyResult {
  double chi = 0.0;
  double E = 0.0;   // extraction flux with pump
  double E0 = 0.0;  // extraction flux without pump
  double P = 0.0;   // pump flux
};

/// Pumping-vs-no-pumping differences of every channel at stationarity.
struct DeltaReport {
  Eigen::MatrixXd hop;         // Delta Q_hop per pair
  Eigen::VectorXd loc;         // Delta Q_loc per atom
  Eigen::MatrixXd nl;          // Delta Q_nl per pair
  Eigen::VectorXd hop_atom;    // per-atom sums over k != j
  Eigen::VectorXd nl_atom;
  double P = 0.0;
  FluxReport with_pump;
  FluxReport no_pump;
};

/// chi(t) alongside its ingredients; points where P(t) is below the floor
/// carry defined=false instead of a 0/0 artifact.
struct EfficiencySeries {
  std::vector<double> times;
  std::vector<double> chi;
  std::vector<double> P;
  std::vector<double> E;
  std::vector<double> E0;
  std::vector<bool> defined;
};

/// Pump-flux floor below which chi(t) is flagged instead of reported.
inline constexpr double kPumpFloor = 1e-12;

/// All flux channels of one state, via the defining trace formulas.
FluxReport flux_report(const DensityMatrix& rho, const ChainConfig& config,
                       const CouplingTables& tables);

/// Stationary efficiency chi = (E - E0) / P from two steady-state solves,
/// one with the pump dissipator and one with it removed.
EfficiencyResult efficiency(const ChainConfig& config,
                            const CouplingTables& tables);

/// As efficiency(), also returning the two stationary flux reports.
EfficiencyResult efficiency_with_reports(const ChainConfig& config,
                                         const CouplingTables& tables,
                                         FluxReport& with_pump,
                                         FluxReport& no_pump);

/// Channel-by-channel differences between the pumping and no-pumping
/// stationary states.
DeltaReport delta_fluxes(const ChainConfig& config, const CouplingTables& tables);

/// Evolves the pump and no-pump generators side by side from the same
/// initial state and reports chi(t).
EfficiencySeries time_resolved_efficiency(const ChainConfig& config,
                                          const CouplingTables& tables,
                                          const std::vector<double>& t_grid,
                                          const DensityMatrix& rho0);

/// |P - E + sum_j Qloc_j + 2 sum_{j<k} Qnl_jk|, the stationary energy
/// balance defect in hbar*omega*gamma0 units.
double energy_balance_defect(const FluxReport& report);

}  // namespace ct

#endif  // CT_FLUXES_HPP
