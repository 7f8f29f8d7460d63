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

#include <array>
#include <map>
#include <optional>
#include <string>

#include <Eigen/Core>

#include "ionchain/tensor.hpp"

namespace ionchain {

/// One ion type. Mass is stored in kg, charge in multiples of e.
struct IonSpecies {
    std::string label;
    double mass = 0.0;
    int charge = 1;

    /// Charge in coulombs.
    double charge_si() const noexcept;
};

/// Builds a species from a mass in unified atomic mass units.
IonSpecies make_species(std::string label, double mass_u, int charge_e);

/// Polynomial potential along the chain axis,
///
///   V(z) = sum_n kappa_n (z - z0)^n - E z,
///
/// plus a species-dependent linear pseudopotential term g (m_ref / m) z.
/// Orders start at 2; kappa_2 must be positive.
struct AxialPotential {
    std::map<int, double> kappa;  // order -> V m^-n
    double uniform_field = 0.0;  // V/m
    double pseudo_gradient = 0.0;  // eV/m felt by the reference species
    double pseudo_reference_mass = 0.0;  // kg
    double expansion_origin = 0.0;  // m

    double kappa2() const;
    double coefficient(int order) const;

    /// lambda_n = (kappa_n / kappa_2)^(1/(2-n)); nullopt when kappa_n is 0.
    /// Odd orders keep the sign of kappa_n.
    std::optional<double> lambda(int order) const;

    /// Throws InvalidArgument when kappa_2 <= 0, an order is below 2, or a
    /// pseudopotential gradient is set without a reference mass.
    void validate() const;
};

/// Harmonic potential with curvature kappa2 (V/m^2).
AxialPotential make_harmonic(double kappa2);

/// kappa_n = kappa2 * lambda_n^(2-n) for each supplied order n >= 3.
AxialPotential axial_from_lambdas(double kappa2, std::map<int, double> const& lambdas);

/// Potential energy in joules of one ion at axial position z.
double evaluate_axial(AxialPotential const& pot, IonSpecies const& species, double z);

/// k-th z-derivative of evaluate_axial (k >= 0), in J m^-k.
double axial_derivative(AxialPotential const& pot, IonSpecies const& species, double z,
                        int order);

/// Curvature kappa2 = m (2 pi f)^2 / (2 q) giving axial frequency f (Hz).
double kappa2_for_frequency(IonSpecies const& species, double frequency_hz);

/// Single-ion axial frequency in Hz for curvature kappa2.
double single_ion_frequency(IonSpecies const& species, double kappa2);

/// Three-dimensional trap: the axial polynomial along z, harmonic radial
/// confinement in x and y, and optional symmetric cubic/quartic tensors.
///
/// The tensor terms are sum_{abc} C_abc r_a r_b r_c and
/// sum_{abcd} Q_abcd r_a r_b r_c r_d with r = (x, y, z - z0), summed over all
/// ordered index tuples.
struct TrapModel3D {
    AxialPotential axial;
    std::array<double, 2> radial_curvatures{};  // V/m^2 for the reference species
    double radial_reference_mass = 0.0;  // kg
    bool radial_mass_scaling = false;  // curvature for species i scales as m_ref/m_i
    Tensor3 trap_cubic{3};  // V/m^3
    Tensor4 trap_quartic{3};  // V/m^4

    /// Radial curvature seen by a given species along axis 0 (x) or 1 (y).
    double radial_curvature(int axis, IonSpecies const& species) const;

    bool has_tensors() const noexcept;

    void validate() const;
};

/// Radial curvature kappa = m_ref (2 pi f)^2 / (2 q_ref) per axis.
TrapModel3D trap3d_from_frequencies(IonSpecies const& reference,
                                    std::array<double, 2> radial_frequencies_hz,
                                    AxialPotential axial,
                                    std::optional<Tensor3> trap_cubic = std::nullopt,
                                    std::optional<Tensor4> trap_quartic = std::nullopt);

/// Potential energy in joules of one ion at position r = (x, y, z).
double evaluate_trap(TrapModel3D const& trap, IonSpecies const& species,
                     Eigen::Vector3d const& r);

}  // namespace ionchain
