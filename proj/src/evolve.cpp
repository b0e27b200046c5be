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

#include "ct/evolve.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <memory>
#include <sstream>

namespace ct {

namespace {

constexpr double kGamma = 2.0 - 1.41421356237309504880;  // 2 - sqrt(2)

// TR-BDF2 stage weights; with gamma = 2 - sqrt(2) both stages share the
// system matrix I - (gamma h / 2) L.
constexpr double kC1 = 1.0 / (kGamma * (2.0 - kGamma));
constexpr double kC0 = (1.0 - kGamma) * (1.0 - kGamma) / (kGamma * (2.0 - kGamma));

struct StepMatrix {
  double h = -1.0;
  Eigen::SparseLU<SparseCd> lu;
  bool ok = false;

  void factorize(const SparseCd& l_op, const SparseCd& eye, double step) {
    SparseCd m = eye - Complex(kGamma * step / 2.0, 0.0) * l_op;
    lu.compute(m);
    ok = (lu.info() == Eigen::Success);
    h = step;
  }
};

Eigen::VectorXcd trbdf2_step(const SparseCd& l_op, StepMatrix& m,
                             const Eigen::VectorXcd& y0, double h) {
  const Eigen::VectorXcd rhs1 = y0 + Complex(kGamma * h / 2.0, 0.0) * (l_op * y0);
  const Eigen::VectorXcd y1 = m.lu.solve(rhs1);
  const Eigen::VectorXcd rhs2 = Complex(kC1, 0.0) * y1 - Complex(kC0, 0.0) * y0;
  return m.lu.solve(rhs2);
}

double wrms_error(const Eigen::VectorXcd& err, const Eigen::VectorXcd& y,
                  double atol, double rtol) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < err.size(); ++i) {
    const double w = atol + rtol * std::abs(y(i));
    const double e = std::abs(err(i)) / w;
    acc += e * e;
  }
  return std::sqrt(acc / static_cast<double>(err.size()));
}

}  // namespace

Trajectory evolve(const Liouvillian& l, const DensityMatrix& rho0,
                  const std::vector<double>& t_grid,
                  const EvolveOptions& options) {
  if (t_grid.empty()) throw std::invalid_argument("evolve: empty time grid");
  for (size_t i = 0; i < t_grid.size(); ++i) {
    if (t_grid[i] < 0) throw std::invalid_argument("evolve: negative time");
    if (i > 0 && !(t_grid[i] > t_grid[i - 1]))
      throw std::invalid_argument("evolve: time grid must be increasing");
  }
  check_density_matrix(rho0);

  const int dim2 = l.dim * l.dim;
  SparseCd eye(dim2, dim2);
  eye.setIdentity();

  Trajectory traj;
  traj.times.reserve(t_grid.size());
  traj.states.reserve(t_grid.size());

  Eigen::VectorXcd y = vec(rho0);
  double t = 0.0;
  size_t idx = 0;
  if (t_grid[0] == 0.0) {
    traj.times.push_back(0.0);
    traj.states.push_back(rho0);
    ++idx;
  }
  if (idx == t_grid.size()) return traj;

  const double t_end = t_grid.back();
  const double h_floor = std::max(1e-14 * t_end, 1e-300);
  double h = options.h_initial > 0 ? options.h_initial
                                   : std::min(t_grid[idx] / 8.0, 1e-3);

  StepMatrix m_full, m_half;

  while (idx < t_grid.size()) {
    const double t_target = t_grid[idx];
    if (t_target - t <= 1e-14 * t_target) {
      traj.times.push_back(t_target);
      traj.states.push_back(unvec(y, l.dim));
      ++idx;
      continue;
    }
    double h_try = std::min(h, t_target - t);
    if (h_try < h_floor)
      throw StiffnessError("evolve: step size underflow at t=" +
                           std::to_string(t) + ", h=" + std::to_string(h_try));

    if (m_full.h != h_try) {
      m_full.factorize(l.op, eye, h_try);
      m_half.factorize(l.op, eye, h_try / 2.0);
      traj.n_factorizations += 2;
      if (!m_full.ok || !m_half.ok) {
        h = h_try / 2.0;
        continue;
      }
    }

    // step doubling: one full step vs two half steps
    const Eigen::VectorXcd y_big = trbdf2_step(l.op, m_full, y, h_try);
    Eigen::VectorXcd y_half = trbdf2_step(l.op, m_half, y, h_try / 2.0);
    y_half = trbdf2_step(l.op, m_half, y_half, h_try / 2.0);
    if (!y_big.allFinite() || !y_half.allFinite()) {
      h = h_try / 2.0;
      ++traj.n_rejected;
      continue;
    }

    const Eigen::VectorXcd err = (y_half - y_big) / 3.0;
    const double e = wrms_error(err, y_half, options.atol, options.rtol);
    const double factor =
        std::clamp(0.9 * std::pow(std::max(e, 1e-10), -1.0 / 3.0), 0.25, 4.0);

    if (e <= 1.0) {
      y = y_half;
      t += h_try;
      ++traj.n_steps;
      double tr_drift = 0.0;
      for (int i = 0; i < l.dim; ++i) tr_drift += y(i * l.dim + i).real();
      traj.max_trace_drift = std::max(traj.max_trace_drift, std::abs(tr_drift - 1.0));
      // update the controller step only from unclipped attempts, and
      // suppress sub-20% churn to keep the factorizations reusable
      if (h_try >= h * (1.0 - 1e-12)) {
        const double h_new = h_try * factor;
        if (std::abs(h_new / h - 1.0) > 0.2) h = h_new;
      }
      if (t_target - t <= 1e-14 * t_target) {
        traj.times.push_back(t_target);
        traj.states.push_back(unvec(y, l.dim));
        ++idx;
      }
    } else {
      h = h_try * factor;
      ++traj.n_rejected;
    }
  }
  return traj;
}

}  // namespace ct
