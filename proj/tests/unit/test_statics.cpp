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

#include "ionchain/constants.hpp"
#include "ionchain/errors.hpp"
#include "ionchain/statics.hpp"
#include "oracles.hpp"

using namespace ionchain;
using doctest::Approx;

namespace {

IonSpecies be() { return make_species("Be", 9.0121831, 1); }
IonSpecies mg() { return make_species("Mg", 23.985042, 1); }

// Relative agreement of two arrays against the scale of the reference.
double relative_error(Eigen::VectorXd const& a, Eigen::VectorXd const& ref)
{
    return (a - ref).cwiseAbs().maxCoeff() / ref.cwiseAbs().maxCoeff();
}

TrapModel3D coupled_trap()
{
    auto mgh = make_species("MgH", 25.994, 1);
    Tensor3 C(3);
    Tensor4 Q(3);
    double const a = 4e10, b = 3e15;
    for (auto idx : {std::array<int, 3>{0, 2, 2}, {2, 0, 2}, {2, 2, 0}})
        C(idx[0], idx[1], idx[2]) = a;
    C(2, 2, 2) = 2.0 * a;
    Q(2, 2, 2, 2) = b;
    for (auto idx : {std::array<int, 4>{0, 0, 2, 2}, {0, 2, 0, 2}, {0, 2, 2, 0},
                     {2, 0, 0, 2}, {2, 0, 2, 0}, {2, 2, 0, 0}})
        Q(idx[0], idx[1], idx[2], idx[3]) = -0.5 * b;
    return trap3d_from_frequencies(mgh, {7e6, 5e6},
                                   make_harmonic(kappa2_for_frequency(mgh, 1.8e6)), C, Q);
}

}  // namespace

TEST_SUITE("statics")
{
    TEST_CASE("scale helpers")
    {
        auto b = be();
        double const l = characteristic_length(b, 1.3e7);
        double const expect = std::cbrt(b.charge_si() / (8.0 * constants::pi
                                                         * constants::vacuum_permittivity * 1.3e7));
        CHECK(l == Approx(expect).epsilon(1e-14));
        auto u = harmonic_chain_positions(3);
        REQUIRE(u.size() == 3);
        CHECK(u[1] == Approx(0.0).epsilon(1e-12));
        CHECK(u[2] == Approx(std::cbrt(5.0 / 4.0)).epsilon(1e-10));
        CHECK(u[0] == Approx(-u[2]).epsilon(1e-12));
        CHECK(harmonic_chain_positions(1) == std::vector<double>{0.0});
    }

    TEST_CASE("two equal ions sit at the golden-section minimum")
    {
        auto b = be();
        double const k2 = kappa2_for_frequency(b, 1e6);
        auto cfg = solve_equilibrium({b, b}, make_harmonic(k2));
        double const q = b.charge_si();
        auto energy = [&](double d) {
            return 2.0 * q * k2 * 0.25 * d * d + constants::coulomb_constant * q * q / d;
        };
        double const d = oracle::golden_section(energy, 1e-6, 30e-6, 1e-15);
        CHECK(chain_length(cfg) == Approx(d).epsilon(1e-8));
        CHECK(chain_length(cfg)
              == Approx(std::cbrt(2.0) * characteristic_length(b, k2)).epsilon(1e-10));
    }

    TEST_CASE("unequal pair in a cubic well matches a nested brute-force minimum")
    {
        auto A = be();
        auto B = mg();
        AxialPotential pot = axial_from_lambdas(1.3e7, {{3, -230e-6}});
        pot.uniform_field = 5.0;
        auto cfg = solve_equilibrium({A, B}, pot);

        std::vector<double> q{A.charge_si(), B.charge_si()};
        std::vector<double> kappa{0.0, 0.0, 1.3e7, pot.coefficient(3)};
        auto best_sep = [&](double centre) {
            auto e = [&](double s) {
                return oracle::axial_energy(q, kappa, 5.0, {centre - s / 2, centre + s / 2});
            };
            return oracle::golden_section(e, 1e-6, 20e-6, 1e-15);
        };
        auto outer = [&](double centre) {
            double const s = best_sep(centre);
            return oracle::axial_energy(q, kappa, 5.0, {centre - s / 2, centre + s / 2});
        };
        double const centre = oracle::golden_section(outer, -5e-6, 5e-6, 1e-15);
        double const sep = best_sep(centre);
        CHECK(cfg.positions[0].z() == Approx(centre - sep / 2).epsilon(1e-6).scale(1e-6));
        CHECK(cfg.positions[1].z() == Approx(centre + sep / 2).epsilon(1e-6).scale(1e-6));
        CHECK(std::abs(cfg.positions[0].z() - (centre - sep / 2)) < 1e-11);
        CHECK(std::abs(cfg.positions[1].z() - (centre + sep / 2)) < 1e-11);
    }

    TEST_CASE("axial energy model matches the written-out energy")
    {
        auto A = be();
        auto B = mg();
        AxialPotential pot = axial_from_lambdas(1.3e7, {{3, -230e-6}, {4, 250e-6}});
        pot.uniform_field = -2.0;
        EnergyModel m({A, B, A}, pot);
        Eigen::VectorXd x(3);
        x << -4e-6, 0.5e-6, 5e-6;
        std::vector<double> q{A.charge_si(), B.charge_si(), A.charge_si()};
        std::vector<double> kappa{0.0, 0.0, 1.3e7, pot.coefficient(3), pot.coefficient(4)};
        CHECK(m.energy(x) == Approx(oracle::axial_energy(q, kappa, -2.0, {x[0], x[1], x[2]}))
                                 .epsilon(1e-13));
    }

    TEST_CASE("analytic derivatives agree with Richardson differences")
    {
        auto A = be();
        auto B = mg();
        auto check_model = [](EnergyModel const& m, Eigen::VectorXd const& x, double h) {
            auto E = [&](Eigen::VectorXd const& y) { return m.energy(y); };
            CHECK(relative_error(m.gradient(x), oracle::gradient(E, x, h)) < 1e-5);

            Eigen::MatrixXd H = m.hessian(x);
            auto n = x.size();
            Eigen::MatrixXd Hfd(n, n);
            for (Eigen::Index i = 0; i < n; ++i)
                Hfd.col(i) = oracle::gradient(
                    [&](Eigen::VectorXd const& y) { return m.gradient(y)[i]; }, x, h);
            CHECK((H - Hfd).cwiseAbs().maxCoeff() / H.cwiseAbs().maxCoeff() < 1e-5);

            Tensor3 T = m.third(x);
            double worst3 = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j) {
                    auto g = oracle::gradient(
                        [&](Eigen::VectorXd const& y) { return m.hessian(y)(i, j); }, x, h);
                    for (Eigen::Index k = 0; k < n; ++k)
                        worst3 = std::max(worst3, std::abs(T(i, j, k) - g[k]));
                }
            CHECK(worst3 / T.max_abs() < 1e-5);

            Tensor4 F = m.fourth(x);
            double worst4 = 0.0;
            for (Eigen::Index i = 0; i < n; ++i)
                for (Eigen::Index j = 0; j < n; ++j)
                    for (Eigen::Index k = 0; k < n; ++k) {
                        auto g = oracle::gradient(
                            [&](Eigen::VectorXd const& y) { return m.third(y)(i, j, k); }, x, h);
                        for (Eigen::Index l = 0; l < n; ++l)
                            worst4 = std::max(worst4, std::abs(F(i, j, k, l) - g[l]));
                    }
            CHECK(worst4 / F.max_abs() < 1e-5);
            CHECK(symmetry_defect(T) < 1e-12);
            CHECK(symmetry_defect(F) < 1e-12);
        };

        SUBCASE("axial")
        {
            AxialPotential pot = axial_from_lambdas(1.3e7, {{3, -230e-6}, {4, 250e-6}, {5, 60e-6}});
            EnergyModel m({A, B, B, A}, pot);
            Eigen::VectorXd x(4);
            x << -6e-6, -1.5e-6, 2.2e-6, 5.1e-6;
            check_model(m, x, 2e-9);
        }
        SUBCASE("3D with tensors, off axis")
        {
            EnergyModel m({A, B, A}, coupled_trap());
            Eigen::VectorXd x(9);
            x << 0.3e-6, -0.2e-6, -3e-6, -0.1e-6, 0.25e-6, 0.4e-6, 0.2e-6, 0.1e-6, 3.5e-6;
            check_model(m, x, 2e-9);
        }
    }

    TEST_CASE("coincident ions are rejected")
    {
        EnergyModel m({be(), be()}, make_harmonic(1e7));
        Eigen::VectorXd x(2);
        x << 1e-6, 1e-6;
        CHECK_THROWS_AS(m.energy(x), InvalidArgument);
        CHECK_THROWS_AS(m.hessian(x), InvalidArgument);
    }

    TEST_CASE("equilibrium residual and ordering")
    {
        auto A = be();
        auto B = mg();
        AxialPotential pot = axial_from_lambdas(1.3e7, {{3, -230e-6}, {4, 250e-6}});
        auto cfg = solve_equilibrium({A, B, B, A, B}, pot);
        for (std::size_t i = 1; i < cfg.positions.size(); ++i)
            CHECK(cfg.positions[i].z() > cfg.positions[i - 1].z());
        auto g = cfg.model().gradient(cfg.coordinates());
        CHECK(g.cwiseAbs().maxCoeff() < 1e-9 * force_scale(cfg));
        CHECK(cfg.residual_gradient == Approx(g.cwiseAbs().maxCoeff()).scale(force_scale(cfg)));
        CHECK_THROWS_AS(chain_length(solve_equilibrium({A}, pot)), InvalidArgument);
    }

    TEST_CASE("a supplied guess must be ordered and complete")
    {
        auto pot = make_harmonic(1.3e7);
        CHECK_THROWS_AS(solve_equilibrium({be(), be()}, pot, std::vector<double>{1e-6}),
                        InvalidArgument);
        CHECK_THROWS_AS(solve_equilibrium({be(), be()}, pot, std::vector<double>{2e-6, -2e-6}),
                        InvalidArgument);
        auto cfg = solve_equilibrium({be(), be()}, pot, std::vector<double>{-1e-6, 4e-6});
        CHECK(cfg.positions[0].z() == Approx(-cfg.positions[1].z()).scale(1e-6));
    }

    TEST_CASE("a well too shallow to hold the chain is reported")
    {
        // the cubic term turns over within one ion spacing
        AxialPotential pot = axial_from_lambdas(1.3e7, {{3, 4e-6}});
        CHECK_THROWS_AS(solve_equilibrium({be(), be(), be()}, pot), NumericalError);
    }

    TEST_CASE("3D solve relaxes radially when tensors couple the axes")
    {
        auto A = be();
        auto trap = coupled_trap();
        auto cfg = solve_equilibrium({A, A}, trap);
        REQUIRE(cfg.dimension() == 3);
        auto const g = cfg.model().gradient(cfg.coordinates());
        CHECK(g.cwiseAbs().maxCoeff() < 1e-9 * force_scale(cfg));
        // the x z^2 coupling pushes both ions off axis
        CHECK(std::abs(cfg.positions[0].x()) > 1e-12);
        CHECK(cfg.positions[0].y() == Approx(0.0).scale(1e-12));

        auto axial_only = solve_equilibrium({A, A}, trap.axial);
        EnergyModel m3({A, A}, trap);
        CHECK(m3.energy(cfg.coordinates()) < m3.energy(m3.flatten(axial_only.positions)));
    }
}
