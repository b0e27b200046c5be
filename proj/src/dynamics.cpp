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

#include "ct/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "ct/steady.hpp"

namespace ct {

std::vector<double> default_time_grid(int n) {
  std::vector<double> grid(static_cast<std::size_t>(n));
  const double lo = std::log10(1e-4);
  const double hi = std::log10(1e4);
  for (int i = 0; i < n; ++i) {
    const double f = (n == 1) ? 0.0 : static_cast<double>(i) / (n - 1);
    grid[static_cast<std::size_t>(i)] = std::pow(10.0, lo + f * (hi - lo));
  }
  return grid;
}

DynamicsReport dynamics_report(const ChainConfig& config,
                               const CouplingTables& tables,
                               const std::vector<double>& t_grid,
                               const DensityMatrix& rho0,
                               const EvolveOptions& options) {
  const Liouvillian pumped = assemble_liouvillian(config, tables, true);
  const Liouvillian bare = assemble_liouvillian(config, tables, false);

  const Trajectory traj_p = evolve(pumped, rho0, t_grid, options);
  const Trajectory traj_0 = evolve(bare, rho0, t_grid, options);
  // The bare generator has no pump channel; zero the rate so its reports do
  // not account a pump flux that is not there.
  ChainConfig bare_config = config;
  bare_config.gamma_in = 0.0;

  DynamicsReport report;
  report.times = traj_p.times;
  report.n_steps_pump = traj_p.n_steps;
  report.n_steps_no_pump = traj_0.n_steps;
  report.max_trace_drift =
      std::max(traj_p.max_trace_drift, traj_0.max_trace_drift);

  const std::size_t n = traj_p.states.size();
  report.with_pump.reserve(n);
  report.no_pump.reserve(n);
  report.chi.times = report.times;
  report.chi.chi.resize(n, 0.0);
  report.chi.P.resize(n, 0.0);
  report.chi.E.resize(n, 0.0);
  report.chi.E0.resize(n, 0.0);
  report.chi.defined.resize(n, false);

  for (std::size_t i = 0; i < n; ++i) {
    report.with_pump.push_back(flux_report(traj_p.states[i], config, tables));
    report.no_pump.push_back(flux_report(traj_0.states[i], bare_config, tables));
    const FluxReport& fp = report.with_pump.back();
    const FluxReport& f0 = report.no_pump.back();
    report.chi.P[i] = fp.pump_P;
    report.chi.E[i] = fp.extract_E;
    report.chi.E0[i] = f0.extract_E;
    if (fp.pump_P > kPumpFloor) {
      report.chi.chi[i] = (fp.extract_E - f0.extract_E) / fp.pump_P;
      report.chi.defined[i] = true;
    }
  }
  return report;
}

DynamicsReport dynamics_report(const ChainConfig& config,
                               const CouplingTables& tables,
                               const std::vector<double>& t_grid,
                               const EvolveOptions& options) {
  return dynamics_report(config, tables, t_grid, gibbs_state(config), options);
}

}  // namespace ct
