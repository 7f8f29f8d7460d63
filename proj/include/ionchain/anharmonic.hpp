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

#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ionchain/modes.hpp"
#include "ionchain/tensor.hpp"

namespace ionchain {

/// Which anharmonic sources enter the tensors.
struct Contributions {
    bool coulomb = true;
    bool trap_cubic = true;  // trap part of the third derivatives
    bool trap_quartic = true;  // trap part of the fourth derivatives
};

/// Mass-weighted derivative tensors in the coordinate basis,
///   A3 = (1/3!) d3U / sqrt(m m m),  A4 = (1/4!) d4U / sqrt(m m m m).
struct DerivativeTensors {
    Tensor3 A3;
    Tensor4 A4;
    Contributions provenance;
};

/// Cubic and quartic couplings in the normal-mode basis, in joules,
///   G3_abc = s'_a s'_b s'_c sum_ijk e_ia e_jb e_kc A3_ijk
/// and the rank-4 analogue. The potential is
///   U3 + U4 = sum G3 x_a x_b x_c + sum G4 x_a x_b x_c x_d,  x = a + a^dagger,
/// summed over all ordered index tuples.
struct ModeTensors {
    Tensor3 G3;
    Tensor4 G4;
};

/// Throws InvalidArgument when cfg is not at equilibrium.
DerivativeTensors derivative_tensors(ChainConfiguration const& cfg,
                                     Contributions const& include = {});

ModeTensors mode_tensors(DerivativeTensors const& A, ModeSpectrum const& spectrum);

/// Couplings restricted to a subset of modes, in the given order.
ModeTensors restrict_modes(ModeTensors const& G, std::vector<std::size_t> const& modes);

/// One small perturbation-theory denominator.
struct Resonance {
    std::string kind;  // "2a-Z", "2Z-a", "b-a-Z", "b+a-Z"
    std::size_t Z = 0;
    std::size_t alpha = 0;
    std::size_t beta = 0;  // equals alpha for two-mode kinds
    double relative = 0.0;  // |denominator| / max(omega)^2
};

/// Flags |4w_a^2 - w_Z^2|, |4w_Z^2 - w_a^2| and |(w_b -+ w_a)^2 - w_Z^2|
/// below rel_tol * max(w)^2, over every probed mode Z.
std::vector<Resonance> detect_resonances(Eigen::VectorXd const& omega, double rel_tol = 1e-3);

inline constexpr double resonance_error_tol = 1e-3;
inline constexpr double resonance_warning_tol = 1e-2;

/// Frequency shift in Hz of the n_Z -> n_Z + 1 transition from first-order
/// quartic and second-order cubic perturbation theory.
///
/// omega holds the angular mode frequencies; occupations has one entry per
/// mode. Throws ResonanceError when a denominator involving Z falls below
/// 1e-3 max(w)^2.
double frequency_shift(ModeTensors const& G, Eigen::VectorXd const& omega,
                       std::vector<unsigned> const& occupations, std::size_t Z);

/// Per-quantum shift matrix, Delta f_Z = sum_a chi_Za n_a + Delta f_Z(0).
struct ChiMatrix {
    Eigen::MatrixXd chi;  // Hz
    Eigen::VectorXd mode_frequencies;  // Hz, descending
    Contributions provenance;
    std::vector<Resonance> warnings;  // denominators between 1e-3 and 1e-2
};

/// chi_Za is the change of Delta f_Z when n_a goes from 0 to 1, all other
/// occupations zero; the diagonal increments n_Z itself.
ChiMatrix chi_matrix(ModeTensors const& G, ModeSpectrum const& spectrum,
                     Contributions const& provenance = {});

struct ExactTransition {
    double frequency = 0.0;  // Hz
    double shift = 0.0;  // Hz, frequency - omega_Z / 2 pi
};

/// Diagonalizes sum hbar w (n + 1/2) + U3 + U4 for at most three modes in a
/// truncated Fock space with `levels` states per mode (at most 16). Matrix
/// elements of x^p are those of the untruncated oscillator.
///
/// Eigenstates are matched to unperturbed labels by largest overlap. Throws
/// NumericalError when a matched state puts more than 1e-6 of its weight on
/// the highest retained level, or when the best overlap is below 0.5.
ExactTransition exact_diagonalization(ModeTensors const& G, Eigen::VectorXd const& omega,
                                      std::vector<unsigned> const& occupations, std::size_t Z,
                                      unsigned levels);

}  // namespace ionchain
