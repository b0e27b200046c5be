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

#ifndef CT_STEADY_HPP
#define CT_STEADY_HPP

#include <string>

#include "ct/liouvillian.hpp"

namespace ct {

/// Raised when the steady-state solve cannot reach the requested residual.
class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SteadyStateResult {
  DensityMatrix rho;
  double residual = 0.0;  // ||L vec(rho)||_inf / max|L entry|
  std::string method;     // "bordered-lu" or "inverse-iteration"
  int iterations = 0;     // refinement or iteration count
};

/// Process-wide residual tolerance used when steady_state is called with
/// tol <= 0; set from the CLI --tolerance flag. Defaults to 1e-10.
void set_default_steady_tol(double tol);
double default_steady_tol();

/// Unique stationary state of the generator: the null vector of L normalized
/// to unit trace. Solved by replacing one redundant row of L with the trace
/// row and running a sparse LU with iterative refinement; falls back to a
/// shifted inverse iteration if the bordered solve fails to converge.
/// Candidate solutions must also be physical states (spectrum >= -1e-6):
/// on near-singular generators a backward-stable solve can meet the
/// residual tolerance with an unusable vector, which is rejected here with
/// a SolverError instead of being returned. tol <= 0 selects the
/// process-wide default.
SteadyStateResult steady_state(const Liouvillian& l, double tol = 0.0);

/// Thermal product state exp(-H_a / kB T)/Z.
DensityMatrix gibbs_state(const ChainConfig& config);

}  // namespace ct

#endif  // CT_STEADY_HPP
