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

#include "ionchain/calibration.hpp"
#include "ionchain/errors.hpp"

using namespace ionchain;
using doctest::Approx;

namespace {

IonSpecies be() { return make_species("Be", 9.0121831, 1); }
IonSpecies mg() { return make_species("Mg", 23.985042, 1); }

constexpr double k2 = 1.3e7;

// kappa_3(p) = kappa_3 (1 - p): the cubic term vanishes at p = 1.
PotentialFamily cubic_family()
{
    PotentialFamily f;
    f.base = axial_from_lambdas(k2, {{3, -230e-6}});
    f.dkappa[3] = -f.base.coefficient(3);
    return f;
}

}  // namespace

TEST_SUITE("calibration")
{
    TEST_CASE("mode labels")
    {
        CHECK(parse_mode_label("in-phase") == ModeLabel::in_phase);
        CHECK(parse_mode_label("out_of_phase") == ModeLabel::out_of_phase);
        CHECK_THROWS_AS(parse_mode_label("sideways"), InvalidArgument);
        CHECK(to_string(ModeLabel::out_of_phase) == "out-of-phase");

        auto s = mode_spectrum(solve_equilibrium({be(), mg()}, make_harmonic(k2)));
        CHECK(labelled_frequency(s, ModeLabel::in_phase) == s.frequencies[1]);
        CHECK(labelled_frequency(s, ModeLabel::out_of_phase) == s.frequencies[0]);
        auto three = mode_spectrum(solve_equilibrium({be(), mg(), be()}, make_harmonic(k2)));
        CHECK_THROWS_AS(labelled_frequency(three, ModeLabel::in_phase), InvalidArgument);
    }

    TEST_CASE("order shift is odd under the cubic sign and zero without odd terms")
    {
        auto A = be();
        auto B = mg();
        auto plus = order_shift(axial_from_lambdas(k2, {{3, 230e-6}}), A, B, ModeLabel::in_phase);
        auto minus = order_shift(axial_from_lambdas(k2, {{3, -230e-6}}), A, B, ModeLabel::in_phase);
        CHECK(plus.delta == Approx(-minus.delta).epsilon(1e-6));
        CHECK(std::abs(plus.delta) > 1e3);
        CHECK(std::abs(order_shift(make_harmonic(k2), A, B, ModeLabel::in_phase).delta) < 1.0);
        CHECK(std::abs(order_shift(axial_from_lambdas(k2, {{4, 100e-6}}), A, B,
                                   ModeLabel::out_of_phase).delta) < 1.0);
        // swapping the species negates the shift
        auto swapped = order_shift(axial_from_lambdas(k2, {{3, 230e-6}}), B, A, ModeLabel::in_phase);
        CHECK(swapped.delta == Approx(-plus.delta));
    }

    TEST_CASE("null search finds the constructed root")
    {
        auto r = null_parameter(cubic_family(), be(), mg(), ModeLabel::in_phase, {0.0, 2.5});
        CHECK(r.p == Approx(1.0).epsilon(1e-4));
        CHECK(std::abs(r.delta) < null_tolerance_hz);
        CHECK(std::abs(r.other_delta) < 1.0);
        CHECK(r.iterations <= 60);
    }

    TEST_CASE("bracket failures")
    {
        auto f = cubic_family();
        CHECK_THROWS_AS(null_parameter(f, be(), mg(), ModeLabel::in_phase, {1.5, 2.5}), BracketError);
        CHECK_THROWS_AS(null_parameter(f, be(), mg(), ModeLabel::in_phase, {2.0, 1.0}),
                        InvalidArgument);
        // a field-only family cannot move a harmonic order shift off zero
        PotentialFamily flat;
        flat.base = make_harmonic(k2);
        flat.dfield = 1.0;
        CHECK_THROWS_AS(null_parameter(flat, be(), mg(), ModeLabel::in_phase, {-1.0, 1.0}),
                        BracketError);
    }

    TEST_CASE("pseudopotential gradient inference inverts the forward model")
    {
        PotentialFamily f = cubic_family();
        auto A = be();
        auto B = mg();
        auto fwd_pos = gradient_forward(f, A, B, 0.2, {-1.0, 3.0});
        auto fwd_neg = gradient_forward(f, A, B, -0.2, {-1.0, 3.0});
        CHECK(std::abs(fwd_pos.delta) < null_tolerance_hz);
        CHECK(fwd_pos.other_delta == Approx(-fwd_neg.other_delta).epsilon(0.05));
        auto inv = infer_pseudo_gradient(f, A, B, fwd_pos.other_delta, {-0.5, 0.5}, {-1.0, 3.0});
        CHECK(inv.gradient == Approx(0.2).epsilon(1e-3));
        CHECK(std::abs(inv.residual) < null_tolerance_hz);
    }

    TEST_CASE("field sensitivity is odd in the cubic term and vanishes in a harmonic well")
    {
        std::vector<IonSpecies> chain{be()};
        double const s = field_sensitivity(axial_from_lambdas(k2, {{3, -230e-6}}), chain, 2.0);
        double const r = field_sensitivity(axial_from_lambdas(k2, {{3, 230e-6}}), chain, 2.0);
        CHECK(s == Approx(-r).epsilon(1e-3));
        CHECK(std::abs(field_sensitivity(make_harmonic(k2), chain, 2.0)) < 1e-12);
        // small-field linear response: the curvature at the displaced minimum
        // is kappa2 + 3 kappa3 dz with dz = E / (2 kappa2), so df/f = 3 kappa3 E / (4 kappa2^2)
        auto pot = axial_from_lambdas(k2, {{3, -230e-6}});
        double const lin = 3.0 * pot.coefficient(3) * 0.01 / (4.0 * k2 * k2);
        CHECK(field_sensitivity(pot, chain, 0.01) == Approx(lin).epsilon(1e-4));
        CHECK_THROWS_AS(field_sensitivity(pot, chain, 1.0, 3), InvalidArgument);
    }

    TEST_CASE("COM scan: flat in a harmonic well, linear fit reported")
    {
        auto h = com_frequency_scan(make_harmonic(k2), be(), 1, 6);
        CHECK(h.points.size() == 6);
        CHECK(std::abs(h.slope) < 1e-3);
        auto a = com_frequency_scan(axial_from_lambdas(k2, {{3, -230e-6}, {4, 250e-6}}), be(), 1, 5);
        CHECK(a.slope < 0.0);
        CHECK(a.r_squared > 0.9);
        CHECK_THROWS_AS(com_frequency_scan(make_harmonic(k2), be(), 3, 2), InvalidArgument);
        CHECK_THROWS_AS(com_frequency_scan(make_harmonic(k2), be(), 0, 2), InvalidArgument);
    }
}
