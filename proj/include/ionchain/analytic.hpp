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

#include <string>
#include <vector>

#include <Eigen/Core>

#include "ionchain/species.hpp"

namespace ionchain::analytic {

/// Perturbative closed forms for two ions in a weakly anharmonic well,
/// V = kappa2 z^2 (1 + z/lambda3) or kappa2 z^2 (1 + (z/lambda4)^2).
///
/// Ion 1 sits at lower z. Eigenvectors are mass-weighted, normalized, and
/// follow the same sign rule as mode_spectrum (first component positive).
struct TwoIonAnalytics {
    double z_minus = 0.0;  // m, ion 1
    double z_plus = 0.0;  // m, ion 2
    double omega_high = 0.0;  // rad/s
    double omega_low = 0.0;  // rad/s
    Eigen::Vector2d eigvec_high = Eigen::Vector2d::Zero();
    Eigen::Vector2d eigvec_low = Eigen::Vector2d::Zero();
    std::string order_tag;  // label of the ion at lower z
    std::vector<std::string> warnings;  // validity regime notes
};

/// Equal masses, cubic term. Valid for |l/lambda3| < 0.2.
TwoIonAnalytics cubic_equal(double kappa2, double lambda3, IonSpecies const& species);

/// Equal masses, quartic term. Valid for (l/lambda4)^2 < 0.05.
TwoIonAnalytics quartic_equal(double kappa2, double lambda4, IonSpecies const& species);

/// Unequal masses, cubic term; mu = m1/m2 with species1 at lower z.
TwoIonAnalytics cubic_unequal(double kappa2, double lambda3, IonSpecies const& species1,
                              IonSpecies const& species2);

/// Unequal masses, quartic term; frequencies do not depend on ion order.
TwoIonAnalytics quartic_unequal(double kappa2, double lambda4, IonSpecies const& species1,
                                IonSpecies const& species2);

}  // namespace ionchain::analytic
