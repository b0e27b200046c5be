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

#ifndef CT_CONSTANTS_HPP
#define CT_CONSTANTS_HPP

namespace ct {

// CODATA 2018 values, SI units.
inline constexpr double kHbar = 1.054571817e-34;    // J s
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K
inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kVacuumPermittivity = 8.8541878128e-12;  // F/m
inline constexpr double kPi = 3.14159265358979323846;

}  // namespace ct

#endif  // CT_CONSTANTS_HPP
