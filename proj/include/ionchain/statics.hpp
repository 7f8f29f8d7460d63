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

#include <optional>
#include <variant>
#include <vector>

#include <Eigen/Core>

#include "ionchain/species.hpp"
#include "ionchain/tensor.hpp"

namespace ionchain {

/// Either a 1D axial model (ions confined to the axis) or a full 3D trap.
using Potential = std::variant<AxialPotential, TrapModel3D>;

/// Coordinates per ion: 1 for an axial model, 3 for a 3D trap.
int coordinates_per_ion(Potential const& pot) noexcept;

/// The axial part of either potential flavour.
AxialPotential const& axial_part(Potential const& pot) noexcept;

/// Trap plus Coulomb energy of an ordered chain and its analytic derivatives
/// with respect to the flattened coordinate vector.
///
/// Coordinates are laid out ion-major: index = i * D + a, where a runs over
/// (z) for D = 1 and (x, y, z) for D = 3.
class EnergyModel {
  public:
    EnergyModel(std::vector<IonSpecies> species, Potential potential);

    int dimension() const noexcept { return dim_; }
    std::size_t ions() const noexcept { return species_.size(); }
    std::size_t size() const noexcept { return species_.size() * static_cast<std::size_t>(dim_); }

    std::vector<IonSpecies> const& species() const noexcept { return species_; }
    Potential const& potential() const noexcept { return potential_; }

    /// Throws InvalidArgument when two ions are closer than 1e-12 m.
    double energy(Eigen::VectorXd const& x) const;
    Eigen::VectorXd gradient(Eigen::VectorXd const& x) const;
    Eigen::MatrixXd hessian(Eigen::VectorXd const& x) const;

    /// Raw third and fourth partial derivatives (no factorials, no masses).
    /// The flags select the Coulomb and trap contributions.
    Tensor3 third(Eigen::VectorXd const& x, bool coulomb = true, bool trap = true) const;
    Tensor4 fourth(Eigen::VectorXd const& x, bool coulomb = true, bool trap = true) const;

    /// Position of ion i as a 3-vector.
    Eigen::Vector3d position(Eigen::VectorXd const& x, std::size_t i) const;

    /// Flattened coordinates from 3-vectors; radial parts dropped for D = 1.
    Eigen::VectorXd flatten(std::vector<Eigen::Vector3d> const& r) const;

  private:
    std::vector<IonSpecies> species_;
    Potential potential_;
    int dim_;

    void check_separations(Eigen::VectorXd const& x) const;
};

/// A solved equilibrium. Ions are listed in order of increasing axial position.
struct ChainConfiguration {
    std::vector<IonSpecies> species;
    std::vector<Eigen::Vector3d> positions;  // m
    Potential potential;
    double residual_gradient = 0.0;  // J/m, max component at the solution

    int dimension() const noexcept { return coordinates_per_ion(potential); }
    EnergyModel model() const { return EnergyModel(species, potential); }
    Eigen::VectorXd coordinates() const { return model().flatten(positions); }
};

struct SolverOptions {
    int max_iterations = 200;
    double tolerance = 1e-10;  // relative to 2 q kappa_2 l
};

/// Newton minimization with backtracking line search.
///
/// The default initial guess is the equal-mass harmonic chain at scale l,
/// centred where the mean linear force vanishes. A 3D trap is solved on axis
/// first and refined in 3D only when its tensors couple the axes.
///
/// Throws IonCrossingError when no ordering-preserving step reduces the
/// energy, NumericalError on non-convergence or an indefinite Hessian at the
/// solution.
ChainConfiguration solve_equilibrium(std::vector<IonSpecies> const& species,
                                     Potential const& potential,
                                     std::optional<std::vector<double>> const& axial_guess = {},
                                     SolverOptions const& options = {});

/// Dimensionless positions of N equal ions in a harmonic well, in units of l.
/// Minimizes sum u_i^2 + 2 sum_{i<j} 1/|u_i - u_j|.
std::vector<double> harmonic_chain_positions(std::size_t n);

/// l = (q / (8 pi eps0 kappa2))^(1/3).
double characteristic_length(IonSpecies const& species, double kappa2);

/// Distance between the outermost ions. Requires at least two ions.
double chain_length(ChainConfiguration const& cfg);

/// Force scale 2 q kappa_2 l used by the convergence test.
double force_scale(ChainConfiguration const& cfg);

}  // namespace ionchain
