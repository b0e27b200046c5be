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

#ifndef CT_EVOLVE_HPP
#define CT_EVOLVE_HPP

#include <vector>

#include "ct/liouvillian.hpp"

namespace ct {

/// Raised when the adaptive integrator underflows its step size.
class StiffnessError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct EvolveOptions {
  double rtol = 1e-8;
  double atol = 1e-12;
  double h_initial = 0.0;  // 0 selects automatically
};

struct Trajectory {
  std::vector<double> times;          // gamma0 * t, strictly increasing
  std::vector<DensityMatrix> states;  // one per time point
  long n_steps = 0;
  long n_rejected = 0;
  long n_factorizations = 0;
  double max_trace_drift = 0.0;
};

/// Integrates d vec(rho)/dt = L vec(rho) from t=0 (state rho0) and emits the
/// state at every point of t_grid (times in 1/gamma0 units, increasing,
/// >= 0). TR-BDF2 with step-doubling error control; L-stable, so the pump,
/// bath and extraction time scales can be crossed in one run.
Trajectory evolve(const Liouvillian& l, const DensityMatrix& rho0,
                  const std::vector<double>& t_grid,
                  const EvolveOptions& options = {});

}  // namespace ct

#endif  // CT_EVOLVE_HPP
