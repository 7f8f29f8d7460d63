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
#include "ionchain/modes.hpp"
#include "oracles.hpp"

using namespace ionchain;
using doctest::Approx;

namespace {

IonSpecies be() { return make_species("Be", 9.0121831, 1); }
IonSpecies mg() { return make_species("Mg", 23.985042, 1); }

}  // namespace

TEST_SUITE("modes")
{
    TEST_CASE("single ion: one mode at the trap frequency with textbook extent")
    {
        auto b = be();
        auto s = mode_spectrum(solve_equilibrium({b}, make_harmonic(kappa2_for_frequency(b, 1e6))));
        REQUIRE(s.size() == 1);
        CHECK(s.frequencies[0] == Approx(1e6).epsilon(1e-12));
        double const w = 2.0 * constants::pi * 1e6;
        CHECK(ground_state_size(s, 0, 0)
              == Approx(std::sqrt(constants::hbar / (2.0 * b.mass * w))).epsilon(1e-12));
        CHECK(s.eigenvectors(0, 0) == 1.0);
    }

    TEST_CASE("equal ions in a harmonic well: known frequency ratios")
    {
        auto b = be();
        auto pot = make_harmonic(kappa2_for_frequency(b, 1e6));
        auto s2 = mode_spectrum(solve_equilibrium({b, b}, pot));
        CHECK(s2.frequencies[0] == Approx(std::sqrt(3.0) * 1e6).epsilon(1e-10));
        CHECK(s2.frequencies[1] == Approx(1e6).epsilon(1e-10));
        auto s3 = mode_spectrum(solve_equilibrium({b, b, b}, pot));
        CHECK(s3.frequencies[0] == Approx(std::sqrt(29.0 / 5.0) * 1e6).epsilon(1e-10));
        CHECK(s3.frequencies[1] == Approx(std::sqrt(3.0) * 1e6).epsilon(1e-10));
        CHECK(s3.frequencies[2] == Approx(1e6).epsilon(1e-10));
        // COM vector is uniform
        CHECK(s3.eigenvectors(0, 2) == Approx(1.0 / std::sqrt(3.0)).epsilon(1e-10));
    }

    TEST_CASE("3D harmonic chain: radial COM at the radial frequency and orthonormal modes")
    {
        auto mgh = make_species("MgH", 25.994, 1);
        auto trap = trap3d_from_frequencies(mgh, {7e6, 5e6}, make_harmonic(kappa2_for_frequency(mgh, 1.8e6)));
        auto s = mode_spectrum(solve_equilibrium({mgh, mgh}, trap));
        REQUIRE(s.size() == 6);
        CHECK(s.frequencies[0] == Approx(7e6).epsilon(1e-10));
        CHECK(s.frequencies[2] == Approx(5e6).epsilon(1e-10));
        CHECK(s.frequencies[4] == Approx(std::sqrt(3.0) * 1.8e6).epsilon(1e-10));
        CHECK(s.frequencies[5] == Approx(1.8e6).epsilon(1e-10));
        // rocking: w_r^2 - w_z^2
        CHECK(s.frequencies[1] == Approx(std::sqrt(49e12 - 1.8e6 * 1.8e6)).epsilon(1e-10));
        auto I = s.eigenvectors.transpose() * s.eigenvectors;
        CHECK((I - Eigen::MatrixXd::Identity(6, 6)).cwiseAbs().maxCoeff() < 1e-10);
        CHECK(s.coordinate(1, 2) == 5);
        CHECK(s.coordinate_mass(4) == Approx(mgh.mass));
    }

    TEST_CASE("mass-weighted Hessian matches finite differences and the eigenpairs")
    {
        auto A = be();
        auto B = mg();
        auto cfg = solve_equilibrium({A, B, A}, axial_from_lambdas(1.3e7, {{3, -230e-6}}));
        Eigen::MatrixXd K = hessian(cfg);
        auto m = cfg.model();
        Eigen::VectorXd x = cfg.coordinates();
        for (Eigen::Index i = 0; i < 3; ++i) {
            auto col = oracle::gradient([&](Eigen::VectorXd const& y) { return m.gradient(y)[i]; },
                                        x, 2e-9);
            for (Eigen::Index j = 0; j < 3; ++j)
                CHECK(K(i, j) == Approx(col[j] / std::sqrt(cfg.species[static_cast<std::size_t>(i)].mass
                                                          * cfg.species[static_cast<std::size_t>(j)].mass))
                                     .epsilon(1e-5));
        }
        auto s = mode_spectrum(cfg);
        for (Eigen::Index k = 0; k < 3; ++k) {
            Eigen::VectorXd e = s.eigenvectors.col(k);
            CHECK((K * e - s.omega[k] * s.omega[k] * e).norm() < 1e-9 * s.omega[0] * s.omega[0]);
        }
    }

    TEST_CASE("not at equilibrium is an error")
    {
        auto b = be();
        auto cfg = solve_equilibrium({b, b}, make_harmonic(1.3e7));
        cfg.positions[0].z() += 1e-7;
        CHECK_THROWS_AS(hessian(cfg), InvalidArgument);
    }

    TEST_CASE("sign rule and amplitude ratio")
    {
        auto A = be();
        auto B = mg();
        auto s = mode_spectrum(solve_equilibrium({A, B, B, A}, make_harmonic(1.3e7)));
        for (Eigen::Index k = 0; k < 4; ++k)
            CHECK(s.eigenvectors(0, k) > 0.0);
        // mode 2 (zero-based 1) ratio of outer Be to inner Mg
        CHECK(amplitude_ratio(s, 1, 0, 1)
              == Approx(std::abs(s.eigenvectors(0, 1) / s.eigenvectors(1, 1))));
        auto sym = mode_spectrum(solve_equilibrium({A, A, A}, make_harmonic(1.3e7)));
        // middle ion is a node of the stretch mode
        CHECK_THROWS_AS(amplitude_ratio(sym, 1, 0, 1), InvalidArgument);
        CHECK(lamb_dicke(s, 2e7, 0, 0) == Approx(2e7 * std::abs(ground_state_size(s, 0, 0))));
    }

    TEST_CASE("carrier matrix element matches a truncated Fock-space exponential")
    {
        for (double eta : {0.05, 0.2, 0.7})
            for (int n : {0, 1, 5, 12})
                CHECK(carrier_matrix_element(eta, static_cast<unsigned>(n))
                      == Approx(oracle::displacement_diagonal(eta, n, 90)).epsilon(1e-10));
        CHECK(carrier_matrix_element(0.0, 3) == 1.0);
    }
}
