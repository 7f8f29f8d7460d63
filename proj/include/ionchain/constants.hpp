// Copyright 2026 The ionchain Authors
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

#pragma once

#include <numbers>

namespace ionchain::constants {

// CODATA 2018. Exact where the SI fixes the value.
inline constexpr double pi = std::numbers::pi;
inline constexpr double elementary_charge = 1.602176634e-19;  // C
inline constexpr double vacuum_permittivity = 8.8541878128e-12;  // F/m
inline constexpr double planck = 6.62607015e-34;  // J s
inline constexpr double hbar = planck / (2.0 * pi);  // J s
inline constexpr double boltzmann = 1.380649e-23;  // J/K
inline constexpr double atomic_mass_unit = 1.66053906660e-27;  // kg

// q1 q2 / (4 pi eps0 r) prefactor
inline constexpr double coulomb_constant = 1.0 / (4.0 * pi * vacuum_permittivity);

}  // namespace ionchain::constants
