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

#include "ct/couplings.hpp"

#include <cmath>

#include "ct/constants.hpp"

namespace ct {

namespace {

// Oscillatory envelope functions of the retarded dipole-dipole interaction.
double f_fun(double x) {
  return (std::cos(x) + x * std::sin(x)) / (x * x * x);
}

double g_fun(double x) {
  return ((x * x - 1.0) * std::cos(x) - x * std::sin(x)) / (x * x * x);
}

// Angular factors of the pair decay rate. Both tend to 1 as x -> 0; the
// series forms below keep that limit accurate at small separations.
double alpha_parallel(double x) {
  if (x < 1e-4) return 1.0 - x * x / 10.0;
  return 3.0 * (std::sin(x) - x * std::cos(x)) / (x * x * x);
}

double alpha_perp(double x) {
  if (x < 1e-4) return 1.0 - x * x / 5.0;
  return 1.5 * (x * std::cos(x) + (x * x - 1.0) * std::sin(x)) / (x * x * x);
}

}  // namespace

void EmitterParams::validate() const {
  if (!(omega > 0)) throw std::invalid_argument("emitter omega must be > 0");
  if (!(mu_mag > 0)) throw std::invalid_argument("emitter dipole magnitude must be > 0");
  if (std::abs(mu_hat.norm() - 1.0) > 1e-12)
    throw std::invalid_argument("dipole orientation must be a unit vector");
}

void ChainConfig::validate() const {
  emitter.validate();
  const int n = n_atoms();
  if (n < 1) throw std::invalid_argument("chain needs at least one atom");
  for (int j = 1; j < n; ++j) {
    if (!(positions[j] > positions[j - 1]))
      throw std::invalid_argument("atom positions must be strictly increasing");
    if (positions[j] - positions[j - 1] < kSeparationFloor)
      throw SingularGeometryError("pairwise separation below " +
                                  std::to_string(kSeparationFloor) + " m");
  }
  if (!(bath_T > 0)) throw std::invalid_argument("bath temperature must be > 0");
  if (gamma_in < 0 || gamma_out < 0)
    throw std::invalid_argument("drive rates must be >= 0");
  if (pump_site < 0 || pump_site >= n)
    throw std::invalid_argument("pump site out of range");
  if (extract_index() < 0 || extract_index() >= n)
    throw std::invalid_argument("extraction site out of range");
}

ChainConfig regular_chain(int n, double a) {
  ChainConfig c;
  c.positions.resize(n);
  for (int j = 0; j < n; ++j) c.positions[j] = j * a;
  return c;
}

ChainConfig displaced_chain(int n, double a, double d) {
  ChainConfig c = regular_chain(n, a);
  c.positions[n - 1] = c.positions[n - 2] + d;
  return c;
}

ChainConfig gap_chain(double a, const std::vector<double>& gaps) {
  ChainConfig c;
  c.positions = {0.0, a, 2.0 * a};
  for (double g : gaps) c.positions.push_back(c.positions.back() + g);
  return c;
}

double gamma0(const EmitterParams& emitter) {
  emitter.validate();
  const double w = emitter.omega;
  const double mu2 = emitter.mu_mag * emitter.mu_mag;
  const double c3 = kSpeedOfLight * kSpeedOfLight * kSpeedOfLight;
  return mu2 * w * w * w / (3.0 * kPi * kVacuumPermittivity * kHbar * c3);
}

double thermal_occupation(double omega, double T) {
  if (!(T > 0)) throw std::invalid_argument("temperature must be > 0");
  if (!(omega > 0)) throw std::invalid_argument("frequency must be > 0");
  return 1.0 / std::expm1(kHbar * omega / (kBoltzmann * T));
}

double lambda_jk(const EmitterParams& emitter, const Eigen::Vector3d& r_vec) {
  const double r = r_vec.norm();
  if (r < kSeparationFloor)
    throw SingularGeometryError("separation below floor in lambda_jk");
  const double x = emitter.omega * r / kSpeedOfLight;
  const double cos_mr = emitter.mu_hat.dot(r_vec) / r;
  const double par = cos_mr * cos_mr;
  const double g0 = gamma0(emitter);
  return -0.75 * g0 * (2.0 * par * f_fun(x) + (1.0 - par) * g_fun(x));
}

double gamma_jk(const EmitterParams& emitter, const Eigen::Vector3d& r_vec) {
  const double g0 = gamma0(emitter);
  const double r = r_vec.norm();
  if (r == 0.0) return g0;
  const double x = emitter.omega * r / kSpeedOfLight;
  const double cos_mr = emitter.mu_hat.dot(r_vec) / r;
  const double par = cos_mr * cos_mr;
  return g0 * (par * alpha_parallel(x) + (1.0 - par) * alpha_perp(x));
}

CouplingTables build_coupling_tables(const ChainConfig& config) {
  config.validate();
  const int n = config.n_atoms();
  CouplingTables t;
  t.gamma0 = gamma0(config.emitter);
  t.n_th = thermal_occupation(config.emitter.omega, config.bath_T);
  t.lambda = Eigen::MatrixXd::Zero(n, n);
  t.gamma_pair = Eigen::MatrixXd::Constant(n, n, t.gamma0);
  for (int j = 0; j < n; ++j) {
    for (int k = j + 1; k < n; ++k) {
      const Eigen::Vector3d r(config.positions[k] - config.positions[j], 0, 0);
      const double lam = lambda_jk(config.emitter, r);
      const double gam = gamma_jk(config.emitter, r);
      t.lambda(j, k) = t.lambda(k, j) = lam;
      t.gamma_pair(j, k) = t.gamma_pair(k, j) = gam;
    }
  }
  return t;
}

}  // namespace ct
