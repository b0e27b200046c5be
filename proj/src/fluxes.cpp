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

#include "ct/fluxes.hpp"

#include <bit>
#include <cmath>

#include "ct/evolve.hpp"
#include "ct/liouvillian.hpp"

namespace ct {

namespace {

// Tr(H_a X) / (hbar omega), i.e. sum of excitation counts over the diagonal.
double excitation_trace(const DensityMatrix& x) {
  double acc = 0.0;
  for (int b = 0; b < x.rows(); ++b)
    acc += std::popcount(static_cast<unsigned>(b)) * x(b, b).real();
  return acc;
}

// rate * (J rho Jd - 1/2 {Jd J, rho}) applied densely.
DensityMatrix apply_jump(const DensityMatrix& rho, const SparseCd& j,
                         double rate) {
  const SparseCd jd = j.adjoint();
  const SparseCd m = jd * j;
  DensityMatrix out = j * rho * jd;
  out.noalias() -= 0.5 * (m * rho + rho * m);
  return rate * out;
}

// rate * (Ja rho Jbd - 1/2 {Jbd Ja, rho}) for a cross pair.
DensityMatrix apply_cross_jump(const DensityMatrix& rho, const SparseCd& ja,
                               const SparseCd& jb, double rate) {
  const SparseCd jbd = jb.adjoint();
  const SparseCd m = jbd * ja;
  DensityMatrix out = ja * rho * jbd;
  out.noalias() -= 0.5 * (m * rho + rho * m);
  return rate * out;
}

}  // namespace

FluxReport flux_report(const DensityMatrix& rho, const ChainConfig& config,
                       const CouplingTables& tables) {
  const int n = config.n_atoms();
  const int dim = 1 << n;
  if (rho.rows() != dim || rho.cols() != dim)
    throw std::invalid_argument("flux_report: state dimension mismatch");

  const auto lows = ladder_ops(n);
  const double g0 = tables.gamma0;
  const double nth = tables.n_th;

  FluxReport r;
  r.hop = Eigen::MatrixXd::Zero(n, n);
  r.nl = Eigen::MatrixXd::Zero(n, n);
  r.loc = Eigen::VectorXd::Zero(n);
  r.coherences = Eigen::MatrixXcd::Zero(n, n);
  r.populations = Eigen::VectorXd::Zero(n);
  r.hop_from_coherences = Eigen::MatrixXd::Zero(n, n);
  r.nl_from_coherences = Eigen::MatrixXd::Zero(n, n);

  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      const SparseCd jk = SparseCd(lows[j].adjoint()) * lows[k];
      r.coherences(j, k) = (DensityMatrix(jk) * rho).trace();
    }
    r.populations(j) = 1.0 - r.coherences(j, j).real();
  }

  for (int j = 0; j < n; ++j) {
    for (int k = 0; k < n; ++k) {
      if (j == k) continue;
      const double lam = tables.lambda(j, k) / g0;
      const double gam = tables.gamma_pair(j, k) / g0;

      // hopping: -(i/hbar) Tr(H_a^(j) [H_Lambda^(jk), rho])
      const SparseCd hop_h = SparseCd(lows[j].adjoint()) * lows[k] +
                             SparseCd(lows[k].adjoint()) * lows[j];
      DensityMatrix comm = hop_h * rho;
      comm.noalias() -= rho * hop_h;
      // H_a^(j) projects the excitation trace onto atom j
      Complex tr_j(0.0, 0.0);
      const int bit = 1 << j;
      for (int b = 0; b < dim; ++b)
        if (b & bit) tr_j += comm(b, b);
      r.hop(j, k) = (Complex(0.0, -1.0) * lam * tr_j).real();
      r.hop_from_coherences(j, k) = 2.0 * lam * std::imag(r.coherences(j, k));

      if (j < k) {
        // non-local: Tr(H_a^(j) D_nl^(jk)[rho]) with both ordered terms
        DensityMatrix d = apply_cross_jump(rho, lows[j], lows[k], gam * (1.0 + nth));
        d += apply_cross_jump(rho, lows[k], lows[j], gam * (1.0 + nth));
        d += apply_cross_jump(rho, SparseCd(lows[j].adjoint()),
                              SparseCd(lows[k].adjoint()), gam * nth);
        d += apply_cross_jump(rho, SparseCd(lows[k].adjoint()),
                              SparseCd(lows[j].adjoint()), gam * nth);
        Complex tr(0.0, 0.0);
        for (int b = 0; b < dim; ++b)
          if (b & bit) tr += d(b, b);
        r.nl(j, k) = r.nl(k, j) = tr.real();
        r.nl_from_coherences(j, k) = r.nl_from_coherences(k, j) =
            -gam * std::real(r.coherences(j, k));
      }
    }
    // local: Tr(H_a D_loc^(j)[rho])
    DensityMatrix d = apply_jump(rho, lows[j], 1.0 + nth);
    d += apply_jump(rho, SparseCd(lows[j].adjoint()), nth);
    r.loc(j) = excitation_trace(d);
  }

  // pump: Tr(H_a D_in[rho]); extraction: -Tr(H_a D_out[rho])
  if (config.gamma_in > 0) {
    const SparseCd raise = lows[config.pump_site].adjoint();
    r.pump_P = excitation_trace(apply_jump(rho, raise, config.gamma_in / g0));
  }
  if (config.gamma_out > 0) {
    r.extract_E = -excitation_trace(
        apply_jump(rho, lows[config.extract_index()], config.gamma_out / g0));
  }
  return r;
}

EfficiencyResult efficiency_with_reports(const ChainConfig& config,
                                         const CouplingTables& tables,
                                         FluxReport& with_pump,
                                         FluxReport& no_pump) {
  if (!(config.gamma_in > 0))
    throw UndefinedEfficiencyError("efficiency requires gamma_in > 0");
  const Liouvillian l = assemble_liouvillian(config, tables, true);
  const Liouvillian l0 = assemble_liouvillian(config, tables, false);
  const DensityMatrix rho = steady_state(l).rho;
  const DensityMatrix rho0 = steady_state(l0).rho;
  with_pump = flux_report(rho, config, tables);
  // The baseline generator has no pump channel, so its accounting must not
  // evaluate one either.
  ChainConfig bare = config;
  bare.gamma_in = 0.0;
  no_pump = flux_report(rho0, bare, tables);

  EfficiencyResult res;
  res.P = with_pump.pump_P;
  res.E = with_pump.extract_E;
  res.E0 = no_pump.extract_E;
  if (!(res.P > kPumpFloor))
    throw UndefinedEfficiencyError("pump flux below floor: P = " +
                                   std::to_string(res.P));
  res.chi = (res.E - res.E0) / res.P;
  return res;
}

EfficiencyResult efficiency(const ChainConfig& config,
                            const CouplingTables& tables) {
  FluxReport a, b;
  return efficiency_with_reports(config, tables, a, b);
}

DeltaReport delta_fluxes(const ChainConfig& config,
                         const CouplingTables& tables) {
  DeltaReport d;
  efficiency_with_reports(config, tables, d.with_pump, d.no_pump);
  d.hop = d.with_pump.hop - d.no_pump.hop;
  d.loc = d.with_pump.loc - d.no_pump.loc;
  d.nl = d.with_pump.nl - d.no_pump.nl;
  d.hop_atom = d.hop.rowwise().sum();
  d.nl_atom = d.nl.rowwise().sum();
  d.P = d.with_pump.pump_P;
  return d;
}

EfficiencySeries time_resolved_efficiency(const ChainConfig& config,
                                          const CouplingTables& tables,
                                          const std::vector<double>& t_grid,
                                          const DensityMatrix& rho0) {
  const Liouvillian l = assemble_liouvillian(config, tables, true);
  const Liouvillian l0 = assemble_liouvillian(config, tables, false);
  const Trajectory traj = evolve(l, rho0, t_grid);
  const Trajectory traj0 = evolve(l0, rho0, t_grid);
  ChainConfig bare = config;
  bare.gamma_in = 0.0;

  EfficiencySeries s;
  s.times = traj.times;
  const size_t m = traj.times.size();
  s.chi.resize(m);
  s.P.resize(m);
  s.E.resize(m);
  s.E0.resize(m);
  s.defined.resize(m);
  for (size_t i = 0; i < m; ++i) {
    const FluxReport fp = flux_report(traj.states[i], config, tables);
    const FluxReport f0 = flux_report(traj0.states[i], bare, tables);
    s.P[i] = fp.pump_P;
    s.E[i] = fp.extract_E;
    s.E0[i] = f0.extract_E;
    s.defined[i] = fp.pump_P > kPumpFloor;
    s.chi[i] = s.defined[i] ? (s.E[i] - s.E0[i]) / s.P[i] : 0.0;
  }
  return s;
}

double energy_balance_defect(const FluxReport& report) {
  const int n = static_cast<int>(report.loc.size());
  double acc = report.pump_P - report.extract_E + report.loc.sum();
  for (int j = 0; j < n; ++j)
    for (int k = j + 1; k < n; ++k) acc += 2.0 * report.nl(j, k);
  return std::abs(acc);
}

}  // namespace ct
