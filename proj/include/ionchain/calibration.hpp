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
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "ionchain/modes.hpp"

namespace ionchain {

enum class ModeLabel { in_phase, out_of_phase };

ModeLabel parse_mode_label(std::string const& text);
std::string to_string(ModeLabel label);

/// Affine one-parameter family around a base potential:
///   kappa_n(p) = kappa_n + p * dkappa[n],  E(p) = E + p * dfield.
struct PotentialFamily {
    AxialPotential base;
    std::map<int, double> dkappa;  // V m^-n per unit p
    double dfield = 0.0;  // V/m per unit p

    AxialPotential at(double p) const;
};

/// Difference of one axial mode frequency between the orders (A, B) and (B, A).
struct OrderShiftReport {
    ModeLabel label = ModeLabel::in_phase;
    double f_AB = 0.0;  // Hz
    double f_BA = 0.0;  // Hz
    double delta = 0.0;  // Hz, f_AB - f_BA
};

/// Picks the two-ion axial mode whose eigenvector components have the same
/// (in-phase) or opposite (out-of-phase) signs.
double labelled_frequency(ModeSpectrum const& spectrum, ModeLabel label);

OrderShiftReport order_shift(AxialPotential const& pot, IonSpecies const& A,
                             IonSpecies const& B, ModeLabel label);

inline constexpr double null_tolerance_hz = 1.0;

struct NullResult {
    double p = 0.0;
    double delta = 0.0;  // Hz, order shift of the nulled mode at p
    double other_delta = 0.0;  // Hz, order shift of the other mode at p
    int iterations = 0;
};

/// Root of the order shift in p inside the bracket, |delta| < 1 Hz, using a
/// bracketing TOMS 748 search of at most 60 iterations.
/// Throws BracketError when the ends do not change sign or both already sit
/// within tolerance; NumericalError when the tolerance is not reached.
NullResult null_parameter(PotentialFamily const& family, IonSpecies const& A,
                          IonSpecies const& B, ModeLabel label,
                          std::pair<double, double> bracket);

struct GradientInference {
    double gradient = 0.0;  // eV/m
    double null_p = 0.0;  // in-phase null at the inferred gradient
    double residual = 0.0;  // Hz, model minus measurement
};

/// Finds the pseudopotential gradient g for which the out-of-phase order
/// shift at the in-phase null equals `measured`.
///
/// For each trial g the family base gets pseudo_gradient = g (reference mass
/// taken from the base, or species A when unset), the in-phase shift is
/// nulled in p, and the out-of-phase shift is read off.
GradientInference infer_pseudo_gradient(PotentialFamily const& family, IonSpecies const& A,
                                        IonSpecies const& B, double measured,
                                        std::pair<double, double> gradient_bracket,
                                        std::pair<double, double> null_bracket);

/// Forward model used by infer_pseudo_gradient: out-of-phase shift at the
/// in-phase null for a given gradient.
NullResult gradient_forward(PotentialFamily const& family, IonSpecies const& A,
                            IonSpecies const& B, double gradient,
                            std::pair<double, double> null_bracket);

/// (f(E) - f(0)) / f(0) for one mode (descending index) after re-solving the
/// equilibrium with an extra uniform field E.
double field_sensitivity(AxialPotential const& pot, std::vector<IonSpecies> const& chain,
                         double field, std::size_t mode = 0);

struct ComScan {
    std::vector<std::pair<std::size_t, double>> points;  // (N, f_COM in Hz)
    double slope = 0.0;  // Hz per ion
    double intercept = 0.0;  // Hz
    double r_squared = 0.0;  // NaN when the frequencies do not vary
};

/// In-phase axial mode of equal ions for N in [n_min, n_max], with a linear fit.
ComScan com_frequency_scan(AxialPotential const& pot, IonSpecies const& species,
                           std::size_t n_min, std::size_t n_max);

}  // namespace ionchain
