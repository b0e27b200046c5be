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

#ifndef CT_SWEEP_HPP
#define CT_SWEEP_HPP

#include <optional>
#include <string>
#include <vector>

#include "ct/fluxes.hpp"

namespace ct {

/// One sweep axis. param is one of "d" (gap between the last two atoms),
/// "d_j" (gap in front of atom atom_index), "T", "omega".
struct SweepAxis {
  std::string param;
  int atom_index = -1;  // only for "d_j"
  std::vector<double> values;
};

/// Grid sweep over up to two axes starting from a base configuration.
struct SweepSpec {
  ChainConfig base;
  std::vector<SweepAxis> axes;
  bool want_deltas = false;  // also record the per-channel Delta report
};

struct SweepPoint {
  std::vector<double> coords;
  EfficiencyResult eff;
  std::optional<DeltaReport> deltas;
  bool ok = false;
  std::string error;  // per-point failure marker; the sweep continues
};

struct SweepResult {
  std::vector<SweepAxis> axes;
  std::vector<SweepPoint> points;  // row-major over the axis grids
  std::string code_version;
  std::string config_hash;  // provenance, stamped when persisted
  std::string timestamp;
};

/// Applies one axis value to a configuration (geometry rebuilt as needed).
ChainConfig apply_axis(const ChainConfig& base, const std::string& param,
                       int atom_index, double value);

/// Evaluates the efficiency (and optionally Delta channels) at every grid
/// point. Deterministic given the spec; per-point failures are recorded in
/// the corresponding SweepPoint. threads caps the worker pool.
SweepResult sweep(const SweepSpec& spec, int threads = 1);

/// Per-frequency maximum of chi over a (d, T) window.
struct FrequencyMaximum {
  double omega = 0.0;
  double chi_max = 0.0;
  double d_max = 0.0;
  double T_at_max = 0.0;
  double E = 0.0;
  double E0 = 0.0;
  double P = 0.0;
};

/// Default maximization window.
inline constexpr double kDMinDefault = 0.1e-6;
inline constexpr double kDMaxDefault = 3e-6;
inline constexpr double kTMinDefault = 10.0;
inline constexpr double kTMaxDefault = 1000.0;

/// Grid-search maximum of chi over d and T for every frequency, with a
/// factor-4 local refinement pass around the coarse argmax. The pump and
/// extraction rates of the base configuration are interpreted relative to
/// gamma0 and rescaled when omega changes. Grids are log-uniform;
/// nd x nT points per frequency. refine=false stops after the coarse pass,
/// the resolution the bundled reference maxima are quoted at.
std::vector<FrequencyMaximum> frequency_maxima(
    const ChainConfig& base, const std::vector<double>& omega_grid,
    std::pair<double, double> d_range = {kDMinDefault, kDMaxDefault},
    std::pair<double, double> T_range = {kTMinDefault, kTMaxDefault},
    int nd = 24, int nT = 16, int threads = 1, bool refine = true);

/// Bundled reference optima for displaced chains (gap parameterization, the
/// first three atoms stay at spacing a = 0.1 um). Used by the table1-check
/// command and the acceptance suite.
struct ReferenceOptimum {
  int n_atoms;
  std::vector<double> gaps;  // m, one per atom beyond the first three
  double chi;
};
const std::vector<ReferenceOptimum>& reference_optima();

/// log-uniform grid helper.
std::vector<double> log_grid(double lo, double hi, int n);

}  // namespace ct

#endif  // CT_SWEEP_HPP
