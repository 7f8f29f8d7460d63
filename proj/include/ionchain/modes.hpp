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

#include <Eigen/Core>

#include "ionchain/statics.hpp"

namespace ionchain {

/// Normal modes of a solved chain.
///
/// Modes are sorted by descending frequency; column k of `eigenvectors` is
/// mode k. Rows follow the coordinate layout of EnergyModel. All indices in
/// this API are zero-based.
struct ModeSpectrum {
    Eigen::VectorXd frequencies;  // Hz
    Eigen::VectorXd omega;  // rad/s
    Eigen::MatrixXd eigenvectors;  // mass-weighted, orthonormal columns
    Eigen::VectorXd sigma_prime;  // sqrt(hbar / 2 omega), kg^1/2 m
    Eigen::MatrixXd sigma_ion;  // coordinate x mode, m
    ChainConfiguration config;

    std::size_t size() const noexcept { return static_cast<std::size_t>(frequencies.size()); }

    /// Row of coordinate `axis` (0..D-1) of ion i.
    std::size_t coordinate(std::size_t ion, int axis = 0) const;

    /// Mass of the ion owning a coordinate row.
    double coordinate_mass(std::size_t row) const;
};

/// Mass-weighted Hessian (1/sqrt(m_i m_j)) d2U/dx_i dx_j, in s^-2.
/// Throws InvalidArgument when cfg is not at equilibrium.
Eigen::MatrixXd hessian(ChainConfiguration const& cfg);

/// Diagonalizes the mass-weighted Hessian. Within each eigenvector the first
/// component larger than 1e-12 in magnitude is made positive.
/// Throws NumericalError naming the mode when an eigenvalue is not positive.
ModeSpectrum mode_spectrum(ChainConfiguration const& cfg);

/// sigma = e' sqrt(hbar / 2 omega) / sqrt(m) for one coordinate row and mode.
double ground_state_size(ModeSpectrum const& spectrum, std::size_t row, std::size_t mode);

/// eta = delta_k |sigma|.
double lamb_dicke(ModeSpectrum const& spectrum, double delta_k, std::size_t row,
                  std::size_t mode);

/// |e'_a / e'_b| within one mode. Throws when |e'_b| < 1e-9.
double amplitude_ratio(ModeSpectrum const& spectrum, std::size_t mode, std::size_t row_a,
                       std::size_t row_b);

/// <n| exp(i eta (a + a^dagger)) |n> = exp(-eta^2 / 2) L_n(eta^2).
double carrier_matrix_element(double eta, unsigned n);

}  // namespace ionchain
