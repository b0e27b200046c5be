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

#ifndef CT_DYNAMICS_HPP
#define CT_DYNAMICS_HPP

#include <vector>

#include "ct/evolve.hpp"
#include "ct/fluxes.hpp"

namespace ct {

/// Relaxation run: the pump and no-pump generators evolved side by side from
/// the same initial state, with every flux channel and chi resolved in time.
struct DynamicsReport {
  std::vector<double> times;          // gamma0 * t
  std::vector<FluxReport> with_pump;  // one per time point
  std::vector<FluxReport> no_pump;
  EfficiencySeries chi;               // chi(t) = (E - E0) / P on the grid
  long n_steps_pump = 0;
  long n_steps_no_pump = 0;
  double max_trace_drift = 0.0;       // worst of the two branches
};

/// Default observation grid: log-uniform in gamma0*t over [1e-4, 1e4].
std::vector<double> default_time_grid(int n = 241);

/// Evolves both branches from rho0 and reports every channel on t_grid.
DynamicsReport dynamics_report(const ChainConfig& config,
                               const CouplingTables& tables,
                               const std::vector<double>& t_grid,
                               const DensityMatrix& rho0,
                               const EvolveOptions& options = {});

/// Same, starting from the thermal product state of the bare atoms.
DynamicsReport dynamics_report(const ChainConfig& config,
                               const CouplingTables& tables,
                               const std::vector<double>& t_grid,
                               const EvolveOptions& options = {});

}  // namespace ct

#endif  // CT_DYNAMICS_HPP
