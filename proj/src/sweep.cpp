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

#include "ct/sweep.hpp"

#include <cmath>

#include "ct/parallel.hpp"
#include "ct/version.hpp"

namespace ct {

namespace {

std::vector<double> gaps_of(const std::vector<double>& positions) {
  std::vector<double> g;
  for (size_t j = 1; j < positions.size(); ++j)
    g.push_back(positions[j] - positions[j - 1]);
  return g;
}

}  // namespace

std::vector<double> log_grid(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 2)
    throw std::invalid_argument("log_grid needs 0 < lo < hi and n >= 2");
  std::vector<double> g(n);
  const double step = std::log(hi / lo) / (n - 1);
  for (int i = 0; i < n; ++i) g[i] = lo * std::exp(i * step);
  g.front() = lo;
  g.back() = hi;
  return g;
}

ChainConfig apply_axis(const ChainConfig& base, const std::string& param,
                       int atom_index, double value) {
  ChainConfig c = base;
  const int n = c.n_atoms();
  if (param == "d") {
    c.positions[n - 1] = c.positions[n - 2] + value;
  } else if (param == "d_j") {
    if (atom_index <= 0 || atom_index >= n)
      throw std::invalid_argument("d_j axis needs 0 < atom_index < N");
    auto g = gaps_of(c.positions);
    g[atom_index - 1] = value;
    for (int j = 1; j < n; ++j) c.positions[j] = c.positions[j - 1] + g[j - 1];
  } else if (param == "T") {
    c.bath_T = value;
  } else if (param == "omega") {
    // keep the drive rates fixed relative to gamma0
    const double g0_old = gamma0(c.emitter);
    c.emitter.omega = value;
    const double g0_new = gamma0(c.emitter);
    c.gamma_in *= g0_new / g0_old;
    c.gamma_out *= g0_new / g0_old;
  } else {
    throw std::invalid_argument("unknown sweep axis: " + param);
  }
  return c;
}

SweepResult sweep(const SweepSpec& spec, int threads) {
  if (spec.axes.empty() || spec.axes.size() > 2)
    throw std::invalid_argument("sweep supports 1 or 2 axes");
  for (const auto& ax : spec.axes)
    if (ax.values.empty())
      throw std::invalid_argument("sweep axis has no grid values");

  SweepResult result;
  result.axes = spec.axes;
  result.code_version = kCodeVersion;

  const int n0 = static_cast<int>(spec.axes[0].values.size());
  const int n1 = spec.axes.size() == 2
                     ? static_cast<int>(spec.axes[1].values.size())
                     : 1;
  result.points.resize(static_cast<size_t>(n0) * n1);

  parallel_for(n0 * n1, threads, [&](int idx) {
    const int i0 = idx / n1;
    const int i1 = idx % n1;
    SweepPoint& pt = result.points[idx];
    pt.coords.push_back(spec.axes[0].values[i0]);
    if (spec.axes.size() == 2) pt.coords.push_back(spec.axes[1].values[i1]);
    try {
      ChainConfig c = apply_axis(spec.base, spec.axes[0].param,
                                 spec.axes[0].atom_index,
                                 spec.axes[0].values[i0]);
      if (spec.axes.size() == 2)
        c = apply_axis(c, spec.axes[1].param, spec.axes[1].atom_index,
                       spec.axes[1].values[i1]);
      const CouplingTables tables = build_coupling_tables(c);
      if (spec.want_deltas) {
        DeltaReport d = delta_fluxes(c, tables);
        pt.eff.P = d.with_pump.pump_P;
        pt.eff.E = d.with_pump.extract_E;
        pt.eff.E0 = d.no_pump.extract_E;
        pt.eff.chi = (pt.eff.E - pt.eff.E0) / pt.eff.P;
        pt.deltas = std::move(d);
      } else {
        pt.eff = efficiency(c, tables);
      }
      pt.ok = true;
    } catch (const std::exception& e) {
      pt.ok = false;
      pt.error = e.what();
    }
  });
  return result;
}

namespace {

// chi over a (d, T) grid at one frequency; returns the best point.
FrequencyMaximum grid_max(const ChainConfig& base_at_omega,
                          const std::vector<double>& ds,
                          const std::vector<double>& Ts, int threads) {
  SweepSpec spec;
  spec.base = base_at_omega;
  spec.axes = {{"d", -1, ds}, {"T", -1, Ts}};
  const SweepResult res = sweep(spec, threads);

  FrequencyMaximum best;
  best.omega = base_at_omega.emitter.omega;
  best.chi_max = -std::numeric_limits<double>::infinity();
  for (const auto& pt : res.points) {
    if (!pt.ok) continue;
    if (pt.eff.chi > best.chi_max) {
      best.chi_max = pt.eff.chi;
      best.d_max = pt.coords[0];
      best.T_at_max = pt.coords[1];
      best.E = pt.eff.E;
      best.E0 = pt.eff.E0;
      best.P = pt.eff.P;
    }
  }
  if (!std::isfinite(best.chi_max))
    throw SolverError("frequency_maxima: every grid point failed");
  return best;
}

std::vector<double> refine_values(const std::vector<double>& grid, double at,
                                  double lo_bound, double hi_bound, int n) {
  // spacing/4 refinement inside +- one coarse cell around the argmax
  size_t i = 0;
  for (size_t k = 0; k < grid.size(); ++k)
    if (grid[k] == at) i = k;
  const double lo = std::max(lo_bound, i == 0 ? grid[0] : grid[i - 1]);
  const double hi = std::min(hi_bound, i + 1 >= grid.size() ? grid.back() : grid[i + 1]);
  if (!(hi > lo)) return {at};
  return log_grid(lo, hi, n);
}

}  // namespace

std::vector<FrequencyMaximum> frequency_maxima(
    const ChainConfig& base, const std::vector<double>& omega_grid,
    std::pair<double, double> d_range, std::pair<double, double> T_range,
    int nd, int nT, int threads, bool refine) {
  if (omega_grid.empty())
    throw std::invalid_argument("frequency_maxima: empty omega grid");
  if (!(d_range.first >= kSeparationFloor) || !(d_range.second > d_range.first))
    throw std::invalid_argument("frequency_maxima: invalid d range");
  if (!(T_range.first > 0) || !(T_range.second > T_range.first))
    throw std::invalid_argument("frequency_maxima: invalid T range");

  const std::vector<double> ds = log_grid(d_range.first, d_range.second, nd);
  const std::vector<double> Ts = log_grid(T_range.first, T_range.second, nT);

  std::vector<FrequencyMaximum> out;
  out.reserve(omega_grid.size());
  for (double omega : omega_grid) {
    const ChainConfig c = apply_axis(base, "omega", -1, omega);
    FrequencyMaximum coarse = grid_max(c, ds, Ts, threads);
    if (!refine) {
      out.push_back(coarse);
      continue;
    }
    const std::vector<double> ds2 =
        refine_values(ds, coarse.d_max, d_range.first, d_range.second, 9);
    const std::vector<double> Ts2 =
        refine_values(Ts, coarse.T_at_max, T_range.first, T_range.second, 9);
    FrequencyMaximum fine = coarse;
    if (ds2.size() > 1 || Ts2.size() > 1) {
      fine = grid_max(c, ds2, Ts2, threads);
      if (fine.chi_max < coarse.chi_max) fine = coarse;
    }
    out.push_back(fine);
  }
  return out;
}

const std::vector<ReferenceOptimum>& reference_optima() {
  static const std::vector<ReferenceOptimum> table = {
      {5, {0.763e-6, 0.618e-6}, 13.518},
      {6, {0.556e-6, 1.076e-6, 0.578e-6}, 13.982},
      {6, {0.782e-6, 0.564e-6, 0.518e-6}, 13.631},
      {7, {0.768e-6, 0.581e-6, 0.380e-6, 0.419e-6}, 13.908},
  };
  return table;
}

}  // namespace ct
