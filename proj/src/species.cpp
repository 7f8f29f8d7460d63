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

#include "ionchain/species.hpp"

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "ionchain/constants.hpp"
#include "ionchain/errors.hpp"

namespace ionchain {

namespace c = constants;

double IonSpecies::charge_si() const noexcept
{
    return charge * c::elementary_charge;
}

IonSpecies make_species(std::string label, double mass_u, int charge_e)
{
    if (!(mass_u > 0.0) || !std::isfinite(mass_u))
        throw InvalidArgument("species '" + label + "': mass must be positive");
    if (charge_e == 0)
        throw InvalidArgument("species '" + label + "': charge must be nonzero");
    return IonSpecies{std::move(label), mass_u * c::atomic_mass_unit, charge_e};
}

//---------------------------------------------------------------------------//
// AxialPotential
//---------------------------------------------------------------------------//

double AxialPotential::kappa2() const
{
    return coefficient(2);
}

double AxialPotential::coefficient(int order) const
{
    auto it = kappa.find(order);
    return it == kappa.end() ? 0.0 : it->second;
}

std::optional<double> AxialPotential::lambda(int order) const
{
    double const kn = coefficient(order);
    if (kn == 0.0 || order < 3)
        return std::nullopt;
    double const ratio = kn / kappa2();
    // ratio = lambda^(2-n)
    double const mag = std::pow(std::abs(ratio), 1.0 / (2.0 - order));
    return (order % 2 == 1 && ratio < 0.0) ? -mag : mag;
}

void AxialPotential::validate() const
{
    if (!(kappa2() > 0.0))
        throw InvalidArgument("axial potential: kappa_2 must be positive");
    for (auto const& [order, value] : kappa) {
        if (order < 2)
            throw InvalidArgument("axial potential: orders start at 2, got "
                                  + std::to_string(order));
        if (!std::isfinite(value))
            throw InvalidArgument("axial potential: non-finite kappa_"
                                  + std::to_string(order));
    }
    if (pseudo_gradient != 0.0 && !(pseudo_reference_mass > 0.0))
        throw InvalidArgument("axial potential: pseudopotential gradient needs a reference mass");
}

AxialPotential make_harmonic(double kappa2)
{
    AxialPotential pot;
    pot.kappa[2] = kappa2;
    pot.validate();
    return pot;
}

AxialPotential axial_from_lambdas(double kappa2, std::map<int, double> const& lambdas)
{
    AxialPotential pot = make_harmonic(kappa2);
    for (auto const& [order, lam] : lambdas) {
        if (order < 3)
            throw InvalidArgument("lambda order must be >= 3");
        if (lam == 0.0 || !std::isfinite(lam))
            throw InvalidArgument("lambda_" + std::to_string(order) + " must be finite and nonzero");
        pot.kappa[order] = kappa2 * std::pow(lam, 2 - order);
    }
    return pot;
}

namespace {

double pseudo_scale(AxialPotential const& pot, IonSpecies const& species)
{
    if (pot.pseudo_gradient == 0.0)
        return 0.0;
    return pot.pseudo_gradient * pot.pseudo_reference_mass / species.mass;
}

// n! / (n-k)!
double falling_factorial(int n, int k)
{
    double r = 1.0;
    for (int i = 0; i < k; ++i)
        r *= n - i;
    return r;
}

}  // namespace

double evaluate_axial(AxialPotential const& pot, IonSpecies const& species, double z)
{
    return axial_derivative(pot, species, z, 0);
}

double axial_derivative(AxialPotential const& pot, IonSpecies const& species, double z,
                        int order)
{
    if (order < 0)
        throw InvalidArgument("derivative order must be non-negative");
    double const q = species.charge_si();
    double const dz = z - pot.expansion_origin;

    // Horner over the differentiated polynomial sum_n kappa_n n!/(n-k)! dz^(n-k)
    int top = 0;
    for (auto const& [n, _] : pot.kappa)
        top = std::max(top, n);
    double poly = 0.0;
    for (int n = top; n >= order; --n) {
        poly = poly * dz + pot.coefficient(n) * falling_factorial(n, order);
    }

    double linear = 0.0;
    double const slope = -pot.uniform_field + pseudo_scale(pot, species);
    if (order == 0)
        linear = slope * z;
    else if (order == 1)
        linear = slope;
    return q * (poly + linear);
}

double kappa2_for_frequency(IonSpecies const& species, double frequency_hz)
{
    if (!(frequency_hz > 0.0))
        throw InvalidArgument("frequency must be positive");
    double const w = 2.0 * c::pi * frequency_hz;
    return species.mass * w * w / (2.0 * species.charge_si());
}

double single_ion_frequency(IonSpecies const& species, double kappa2)
{
    return std::sqrt(2.0 * species.charge_si() * kappa2 / species.mass) / (2.0 * c::pi);
}

//---------------------------------------------------------------------------//
// TrapModel3D
//---------------------------------------------------------------------------//

double TrapModel3D::radial_curvature(int axis, IonSpecies const& species) const
{
    double const k = radial_curvatures.at(static_cast<std::size_t>(axis));
    return radial_mass_scaling ? k * radial_reference_mass / species.mass : k;
}

bool TrapModel3D::has_tensors() const noexcept
{
    return trap_cubic.max_abs() > 0.0 || trap_quartic.max_abs() > 0.0;
}

void TrapModel3D::validate() const
{
    axial.validate();
    for (double k : radial_curvatures)
        if (!(k > 0.0))
            throw InvalidArgument("trap: radial curvatures must be positive");
    if (radial_mass_scaling && !(radial_reference_mass > 0.0))
        throw InvalidArgument("trap: radial mass scaling needs a reference mass");
    if (trap_cubic.extent() != 3 || trap_quartic.extent() != 3)
        throw InvalidArgument("trap: tensors must have extent 3");
    if (symmetry_defect(trap_cubic) > 1e-12 || symmetry_defect(trap_quartic) > 1e-12)
        throw InvalidArgument("trap: cubic/quartic tensors must be symmetric");
}

TrapModel3D trap3d_from_frequencies(IonSpecies const& reference,
                                    std::array<double, 2> radial_frequencies_hz,
                                    AxialPotential axial, std::optional<Tensor3> trap_cubic,
                                    std::optional<Tensor4> trap_quartic)
{
    TrapModel3D trap;
    trap.axial = std::move(axial);
    for (std::size_t a = 0; a < 2; ++a) {
        if (!(radial_frequencies_hz[a] > 0.0))
            throw InvalidArgument("radial frequencies must be positive");
        trap.radial_curvatures[a] = kappa2_for_frequency(reference, radial_frequencies_hz[a]);
    }
    trap.radial_reference_mass = reference.mass;
    if (trap_cubic)
        trap.trap_cubic = std::move(*trap_cubic);
    if (trap_quartic)
        trap.trap_quartic = std::move(*trap_quartic);
    trap.validate();
    return trap;
}

double evaluate_trap(TrapModel3D const& trap, IonSpecies const& species,
                     Eigen::Vector3d const& r)
{
    double const q = species.charge_si();
    double energy = evaluate_axial(trap.axial, species, r.z());
    energy += q * (trap.radial_curvature(0, species) * r.x() * r.x()
                   + trap.radial_curvature(1, species) * r.y() * r.y());

    std::array<double, 3> const d{r.x(), r.y(), r.z() - trap.axial.expansion_origin};
    double tensor_terms = 0.0;
    for (std::size_t a = 0; a < 3; ++a)
        for (std::size_t b = 0; b < 3; ++b)
            for (std::size_t cc = 0; cc < 3; ++cc) {
                double const abc = d[a] * d[b] * d[cc];
                tensor_terms += trap.trap_cubic(a, b, cc) * abc;
                for (std::size_t e = 0; e < 3; ++e)
                    tensor_terms += trap.trap_quartic(a, b, cc, e) * abc * d[e];
            }
    return energy + q * tensor_terms;
}

}  // namespace ionchain
