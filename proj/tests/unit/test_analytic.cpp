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

#include <doctest.h>

#include <cmath>
#include <limits>

#include "ionchain/analytic.hpp"
#include "ionchain/constants.hpp"
#include "ionchain/errors.hpp"
#include "ionchain/modes.hpp"

using namespace ionchain;
using doctest::Approx;

namespace {

IonSpecies be() { return make_species("Be", 9.0121831, 1); }
IonSpecies mg() { return make_species("Mg", 23.985042, 1); }

constexpr double k2 = 1.3e7;

struct Residual {
    double frequency = 0.0;  // max relative
    double position = 0.0;  // max absolute / l
};

Residual compare(analytic::TwoIonAnalytics const& a, std::vector<IonSpecies> const& chain,
                 AxialPotential const& pot)
{
    auto s = mode_spectrum(solve_equilibrium(chain, pot));
    double const l = characteristic_length(chain[0], k2);
    Residual r;
    r.frequency = std::max(std::abs(s.omega[0] / a.omega_high - 1.0),
                           std::abs(s.omega[1] / a.omega_low - 1.0));
    r.position = std::max(std::abs(s.config.positions[0].z() - a.z_minus),
                          std::abs(s.config.positions[1].z() - a.z_plus))
                 / l;
    return r;
}

}  // namespace

TEST_SUITE("analytic")
{
    TEST_CASE("infinite lambda reduces to the harmonic pair")
    {
        double const inf = std::numeric_limits<double>::infinity();
        auto b = be();
        double const w1 = 2.0 * constants::pi * single_ion_frequency(b, k2);
        auto eq = analytic::cubic_equal(k2, inf, b);
        CHECK(eq.omega_high == Approx(std::sqrt(3.0) * w1).epsilon(1e-14));
        CHECK(eq.omega_low == Approx(w1).epsilon(1e-14));
        CHECK(eq.z_plus - eq.z_minus == Approx(std::cbrt(2.0) * characteristic_length(b, k2)));
        auto q = analytic::quartic_equal(k2, inf, b);
        CHECK(q.omega_high == Approx(eq.omega_high));
        CHECK(q.warnings.empty());
        CHECK_THROWS_AS(analytic::cubic_equal(k2, 0.0, b), InvalidArgument);
        CHECK_THROWS_AS(analytic::cubic_equal(-1.0, 1e-3, b), InvalidArgument);
    }

    TEST_CASE("unequal harmonic pair eigenvectors match the numeric modes")
    {
        double const inf = std::numeric_limits<double>::infinity();
        auto u = analytic::cubic_unequal(k2, inf, be(), mg());
        auto s = mode_spectrum(solve_equilibrium({be(), mg()}, make_harmonic(k2)));
        CHECK(s.omega[0] == Approx(u.omega_high).epsilon(1e-10));
        CHECK(s.omega[1] == Approx(u.omega_low).epsilon(1e-10));
        for (int i = 0; i < 2; ++i) {
            CHECK(s.eigenvectors(i, 0) == Approx(u.eigvec_high[i]).epsilon(1e-9));
            CHECK(s.eigenvectors(i, 1) == Approx(u.eigvec_low[i]).epsilon(1e-9));
        }
    }

    TEST_CASE("closed forms converge to the numeric solution as lambda grows")
    {
        auto A = be();
        auto B = mg();
        for (double lam : {-400e-6, 400e-6}) {
            auto near = compare(analytic::cubic_equal(k2, lam, A), {A, A}, axial_from_lambdas(k2, {{3, lam}}));
            auto far = compare(analytic::cubic_equal(k2, 4 * lam, A), {A, A},
                               axial_from_lambdas(k2, {{3, 4 * lam}}));
            CHECK(far.frequency < near.frequency / 4.0);
            CHECK(far.position < near.position / 4.0);
            CHECK(near.frequency < 1e-5);

            auto un = compare(analytic::cubic_unequal(k2, lam, A, B), {A, B},
                              axial_from_lambdas(k2, {{3, lam}}));
            auto uf = compare(analytic::cubic_unequal(k2, 4 * lam, A, B), {A, B},
                              axial_from_lambdas(k2, {{3, 4 * lam}}));
            CHECK(uf.frequency < un.frequency / 4.0);
            CHECK(un.frequency < 1e-3);
        }
        for (double lam : {60e-6, 120e-6}) {
            auto qe = compare(analytic::quartic_equal(k2, lam, A), {A, A},
                              axial_from_lambdas(k2, {{4, lam}}));
            auto qu = compare(analytic::quartic_unequal(k2, lam, A, B), {A, B},
                              axial_from_lambdas(k2, {{4, lam}}));
            CHECK(qe.frequency < 1e-4);
            CHECK(qu.frequency < 1e-4);
            CHECK(qe.position < 1e-4);
        }
    }

    TEST_CASE("closed-form eigenvectors converge at second order")
    {
        auto A = be();
        auto B = mg();
        double const l = characteristic_length(A, k2);
        auto error = [&](analytic::TwoIonAnalytics const& a, std::vector<IonSpecies> const& pair,
                         int order, double lambda) {
            auto s = mode_spectrum(solve_equilibrium(pair, axial_from_lambdas(k2, {{order, lambda}})));
            return std::max((s.eigenvectors.col(0) - a.eigvec_high).cwiseAbs().maxCoeff(),
                            (s.eigenvectors.col(1) - a.eigvec_low).cwiseAbs().maxCoeff());
        };
        for (double ratio : {0.04, -0.04}) {
            double const lam = l / ratio;
            double const e1 = error(analytic::cubic_unequal(k2, lam, A, B), {A, B}, 3, lam);
            double const e2 = error(analytic::cubic_unequal(k2, 2 * lam, A, B), {A, B}, 3, 2 * lam);
            CHECK(e1 < 2e-3);
            CHECK(e2 < e1 / 3.0);
            double const q1 = error(analytic::cubic_equal(k2, lam, A), {A, A}, 3, lam);
            double const q2 = error(analytic::cubic_equal(k2, 2 * lam, A), {A, A}, 3, 2 * lam);
            CHECK(q2 < q1 / 3.0);
        }
        // at l/lambda3 = 0.1 the COM vector is (1 + a, 1 - a) / norm with a = 0.3 / 2^(5/3):
        // a positive cubic term stiffens the right-hand well, so the right ion moves less
        auto com = analytic::cubic_equal(k2, l / 0.1, A).eigvec_low;
        CHECK(com[0] / com[1] == Approx((1.0 + 0.0944941) / (1.0 - 0.0944941)).epsilon(1e-6));

        double const lam4 = l / 0.1;
        CHECK(error(analytic::quartic_unequal(k2, lam4, A, B), {A, B}, 4, lam4)
              < error(analytic::quartic_unequal(k2, lam4 / 2, A, B), {A, B}, 4, lam4 / 2) / 3.0);
        CHECK(error(analytic::quartic_equal(k2, lam4, A), {A, A}, 4, lam4) < 1e-6);
    }

    TEST_CASE("regime warnings")
    {
        auto b = be();
        double const l = characteristic_length(b, k2);
        CHECK(analytic::cubic_equal(k2, 100 * l, b).warnings.empty());
        CHECK_FALSE(analytic::cubic_equal(k2, 3 * l, b).warnings.empty());
        CHECK_FALSE(analytic::quartic_equal(k2, 3 * l, b).warnings.empty());
        auto u = analytic::cubic_unequal(k2, 100 * l, b, mg());
        CHECK(u.order_tag == "Be");
    }
}
