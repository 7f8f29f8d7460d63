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

#include "ionchain/analytic.hpp"

#include <cmath>
#include <limits>

#include "ionchain/errors.hpp"
#include "ionchain/statics.hpp"

namespace ionchain::analytic {

namespace {

constexpr double cubic_regime = 0.2;  // |l/lambda3|
constexpr double quartic_regime = 0.05;  // (l/lambda4)^2

// Infinite lambda means no perturbation.
double ratio(double l, double lambda)
{
    if (lambda == 0.0)
        throw InvalidArgument("lambda must be nonzero");
    return std::isinf(lambda) ? 0.0 : l / lambda;
}

Eigen::Vector2d normalized(Eigen::Vector2d v)
{
    v.normalize();
    if (v[0] < 0.0 || (v[0] == 0.0 && v[1] < 0.0))
        v = -v;
    return v;
}

void check_kappa(double kappa2)
{
    if (!(kappa2 > 0.0))
        throw InvalidArgument("kappa_2 must be positive");
}

void cubic_positions(TwoIonAnalytics& out, double l, double b)
{
    // second-order equilibrium, same (l/lambda3)^2 sign on both ions
    double const s = l / std::cbrt(4.0);
    double const a1 = 3.0 / std::cbrt(32.0);
    double const a2 = 3.0 / std::cbrt(128.0);
    out.z_plus = s * (1.0 - a1 * b + a2 * b * b);
    out.z_minus = -s * (1.0 + a1 * b + a2 * b * b);
}

void quartic_positions(TwoIonAnalytics& out, double l, double b2)
{
    double const s = l / std::cbrt(4.0);
    double const f = 1.0 - b2 / (3.0 * std::cbrt(2.0)) + std::cbrt(16.0) / 9.0 * b2 * b2;
    out.z_plus = s * f;
    out.z_minus = -s * f;
}

// r_pm = [pm(mu - 1) + sqrt(mu^2 - mu + 1)] / sqrt(mu)
double r_pm(double mu, int pm)
{
    return (pm * (mu - 1.0) + std::sqrt(mu * mu - mu + 1.0)) / std::sqrt(mu);
}

// sqrt(2 q kappa2 / m1) (1 + mu pm sqrt(mu^2 - mu + 1))^(1/2)
double harmonic_unequal(double w1, double mu, int pm)
{
    return w1 * std::sqrt(1.0 + mu + pm * std::sqrt(mu * mu - mu + 1.0));
}

}  // namespace

TwoIonAnalytics cubic_equal(double kappa2, double lambda3, IonSpecies const& species)
{
    check_kappa(kappa2);
    double const l = characteristic_length(species, kappa2);
    double const b = ratio(l, lambda3);

    TwoIonAnalytics out;
    out.order_tag = species.label;
    if (std::abs(b) >= cubic_regime)
        out.warnings.emplace_back("|l/lambda3| outside the perturbative regime");
    cubic_positions(out, l, b);

    double const wc0 = std::sqrt(2.0 * species.charge_si() * kappa2 / species.mass);
    out.omega_low = wc0 * (1.0 - 9.0 / std::cbrt(128.0) * b * b);
    out.omega_high = std::sqrt(3.0) * wc0 * (1.0 - 3.0 / std::cbrt(128.0) * b * b);

    double const a = 3.0 / std::cbrt(32.0) * b;
    // same sign convention as the unequal-mass form at mu = 1
    out.eigvec_low = normalized({1.0 + a, 1.0 - a});
    out.eigvec_high = normalized({1.0 - a, -1.0 - a});
    return out;
}

TwoIonAnalytics quartic_equal(double kappa2, double lambda4, IonSpecies const& species)
{
    check_kappa(kappa2);
    double const l = characteristic_length(species, kappa2);
    double const b = ratio(l, lambda4);
    double const b2 = b * b;

    TwoIonAnalytics out;
    out.order_tag = species.label;
    if (b2 >= quartic_regime)
        out.warnings.emplace_back("(l/lambda4)^2 outside the perturbative regime");
    quartic_positions(out, l, b2);

    double const wc0 = std::sqrt(2.0 * species.charge_si() * kappa2 / species.mass);
    out.omega_low = wc0 * (1.0 + 3.0 / std::cbrt(16.0) * b2);
    out.omega_high = std::sqrt(3.0) * wc0 * (1.0 + 5.0 / (3.0 * std::cbrt(16.0)) * b2);
    out.eigvec_low = normalized({1.0, 1.0});
    out.eigvec_high = normalized({-1.0, 1.0});
    return out;
}

TwoIonAnalytics cubic_unequal(double kappa2, double lambda3, IonSpecies const& species1,
                              IonSpecies const& species2)
{
    check_kappa(kappa2);
    double const l = characteristic_length(species1, kappa2);
    double const b = ratio(l, lambda3);
    double const mu = species1.mass / species2.mass;
    double const root = std::sqrt(mu * mu - mu + 1.0);

    TwoIonAnalytics out;
    out.order_tag = species1.label;
    if (std::abs(b) >= cubic_regime)
        out.warnings.emplace_back("|l/lambda3| outside the perturbative regime");
    cubic_positions(out, l, b);

    double const w1 = std::sqrt(2.0 * species1.charge_si() * kappa2 / species1.mass);
    double const first = 3.0 / std::cbrt(256.0) * (1.0 - mu) / root * b;
    out.omega_high = harmonic_unequal(w1, mu, +1) * (1.0 - first);
    out.omega_low = harmonic_unequal(w1, mu, -1) * (1.0 + first);

    double const a = 3.0 / std::cbrt(32.0) * (1.0 + mu) / root * b;
    // (ion 1, ion 2) components; r_pm is the magnitude of the ion 2 / ion 1 ratio
    auto vec = [&](int pm) {
        double const r = r_pm(mu, pm);
        double const r2 = 1.0 + r * r;
        return Eigen::Vector2d(1.0 - pm * a * r * r / r2, r * (-pm - a / r2));
    };
    out.eigvec_high = normalized(vec(+1));
    out.eigvec_low = normalized(vec(-1));
    return out;
}

TwoIonAnalytics quartic_unequal(double kappa2, double lambda4, IonSpecies const& species1,
                                IonSpecies const& species2)
{
    check_kappa(kappa2);
    double const l = characteristic_length(species1, kappa2);
    double const b = ratio(l, lambda4);
    double const b2 = b * b;
    double const mu = species1.mass / species2.mass;
    double const root = std::sqrt(mu * mu - mu + 1.0);

    TwoIonAnalytics out;
    out.order_tag = species1.label;
    if (b2 >= quartic_regime)
        out.warnings.emplace_back("(l/lambda4)^2 outside the perturbative regime");
    quartic_positions(out, l, b2);

    double const w1 = std::sqrt(2.0 * species1.charge_si() * kappa2 / species1.mass);
    auto shift = [&](int pm) {
        return 1.0 + (-pm * (1.0 + mu) + 7.0 * root) / (3.0 * std::cbrt(16.0) * root) * b2;
    };
    out.omega_high = harmonic_unequal(w1, mu, +1) * shift(+1);
    out.omega_low = harmonic_unequal(w1, mu, -1) * shift(-1);

    double const a = (1.0 - mu) / (std::cbrt(2.0) * root) * b2;
    // (ion 1, ion 2) components; r_pm is the magnitude of the ion 2 / ion 1 ratio
    auto vec = [&](int pm) {
        double const r = r_pm(mu, pm);
        double const r2 = 1.0 + r * r;
        return Eigen::Vector2d(1.0 + pm * a * r * r / r2, r * (-pm - a / r2));
    };
    out.eigvec_high = normalized(vec(+1));
    out.eigvec_low = normalized(vec(-1));
    return out;
}

}  // namespace ionchain::analytic
