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
#include <complex>

#include "ionchain/constants.hpp"
#include "ionchain/dynamics.hpp"
#include "ionchain/errors.hpp"

using namespace ionchain;
using doctest::Approx;

namespace {

constexpr double two_pi = 2.0 * constants::pi;

Eigen::MatrixXd small_chi()
{
    Eigen::MatrixXd chi(3, 3);
    chi << -2.9, -2.7, 0.04, -2.7, -0.9, 0.2, 0.04, 0.2, -0.1;
    return chi;
}

Eigen::VectorXd small_freqs()
{
    Eigen::VectorXd f(3);
    f << 7e6, 5e6, 1.8e6;
    return f;
}

// Direct thermal average of the phase factor, truncated far into the tail.
double coherence_by_summation(Eigen::MatrixXd const& chi, Eigen::VectorXd const& nbar,
                              std::size_t Z, unsigned nz, double t)
{
    double value = 1.0;
    for (Eigen::Index a = 0; a < chi.cols(); ++a) {
        if (a == static_cast<Eigen::Index>(Z))
            continue;
        double const x = nbar[a] / (nbar[a] + 1.0);
        std::complex<double> s = 0.0;
        double p = 1.0 - x;
        for (int n = 0; n < 20000; ++n, p *= x)
            s += p * std::polar(1.0, -two_pi * chi(Z, a) * nz * t * n);
        value *= std::abs(s);
    }
    return value;
}

}  // namespace

TEST_SUITE("dynamics")
{
    TEST_CASE("Bose-Einstein occupation")
    {
        CHECK(thermal_occupation(1e6, 0.0) == 0.0);
        double const f = 5e6, T = 1e-3;
        double const x = constants::planck * f / (constants::boltzmann * T);
        CHECK(thermal_occupation(f, T) == Approx(1.0 / (std::exp(x) - 1.0)).epsilon(1e-12));
        // classical limit kT/hf - 1/2
        double const hot = 10.0;
        CHECK(thermal_occupation(1e6, hot)
              == Approx(constants::boltzmann * hot / (constants::planck * 1e6) - 0.5).epsilon(1e-9));
        CHECK_THROWS_AS(thermal_occupation(-1.0, 1.0), InvalidArgument);
        CHECK_THROWS_AS(ThermalEnvironment::doppler(-1.0), InvalidArgument);
        CHECK_THROWS_AS(ThermalEnvironment::explicit_nbar({1.0, -0.1}), InvalidArgument);
        CHECK_THROWS_AS(ThermalEnvironment::explicit_nbar({1.0}).occupations(small_freqs()),
                        InvalidArgument);
    }

    TEST_CASE("coherence agrees with the explicit thermal sum")
    {
        auto env = ThermalEnvironment::doppler(0.7e-3);
        Eigen::VectorXd nbar = env.occupations(small_freqs());
        for (double t : {0.0, 0.01, 0.04, 0.2, 0.37})
            for (unsigned nz : {1u, 3u})
                CHECK(fock_coherence(small_chi(), small_freqs(), 0, nz, env, t)
                      == Approx(coherence_by_summation(small_chi(), nbar, 0, nz, t)).epsilon(1e-9));
        CHECK(fock_coherence(small_chi(), small_freqs(), 0, 1, ThermalEnvironment::doppler(0.0), 0.3)
              == 1.0);
        CHECK_THROWS_AS(fock_coherence(small_chi(), small_freqs(), 0, 0, env, 0.1), InvalidArgument);
        CHECK_THROWS_AS(fock_coherence(small_chi(), small_freqs(), 3, 1, env, 0.1), InvalidArgument);
    }

    TEST_CASE("gate loop closes with the full phase")
    {
        GateParams g{two_pi * 10e3, two_pi * 10e3, std::nullopt};
        auto p = gate_trajectory(g, g.gate_time());
        CHECK(std::abs(p.alpha) < 1e-12);
        CHECK(p.Phi == Approx(-constants::pi / 2.0).epsilon(1e-12));
        CHECK(gate_fidelity(p.alpha, p.Phi) == Approx(1.0).epsilon(1e-12));
        // half way round, |alpha| = Omega / delta
        auto h = gate_trajectory(g, g.gate_time() / 2.0);
        CHECK(std::abs(h.alpha) == Approx(1.0).epsilon(1e-12));
        CHECK(gate_fidelity(0.0, 0.0) == Approx(0.5));
        CHECK_THROWS_AS(gate_trajectory(GateParams{1.0, 0.0, std::nullopt}, 1.0), InvalidArgument);
    }

    TEST_CASE("thermal infidelity equals the explicit double sum")
    {
        auto env = ThermalEnvironment::explicit_nbar({3.0, 5.0, 12.0});
        double const delta = two_pi * 2e3;
        auto const chi = small_chi();
        std::size_t const Z = 1;
        double s = 0.0;
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b) {
                double const na = env.nbar[static_cast<std::size_t>(a)];
                double const nb = env.nbar[static_cast<std::size_t>(b)];
                s += a == b ? chi(Z, a) * chi(Z, a) * na * (2.0 * na + 1.0)
                            : chi(Z, a) * chi(Z, b) * na * nb;
            }
        double const pi4 = std::pow(constants::pi, 4);
        CHECK(thermal_gate_infidelity(chi, small_freqs(), Z, delta, env)
              == Approx(3.0 * pi4 / (delta * delta) * s).epsilon(1e-12));
        // quadratic in 1/delta
        CHECK(thermal_gate_infidelity(chi, small_freqs(), Z, 2.0 * delta, env)
              == Approx(thermal_gate_infidelity(chi, small_freqs(), Z, delta, env) / 4.0));
    }

    TEST_CASE("one-ion sideband flop from a Fock state is a pure Rabi oscillation")
    {
        SidebandParams p;
        p.eta1 = 0.1;
        p.eta2 = 0.0;
        p.Omega0 = two_pi * 100e3;
        p.fock = 2u;
        std::vector<double> t{0.0, 3e-6, 1e-5, 4.4e-5};
        auto curve = sideband_flop(p, t);
        double const g = 0.5 * p.Omega0 * p.eta1 * std::sqrt(3.0);
        for (std::size_t i = 0; i < t.size(); ++i) {
            CHECK(curve.A[i] == Approx(0.5 * std::pow(std::sin(g * t[i]), 2)).epsilon(1e-10));
            CHECK(curve.norm[i] == Approx(1.0).epsilon(1e-12));
        }
    }

    TEST_CASE("thermal sideband flop: norm, decay and cutoff handling")
    {
        SidebandParams p;
        p.eta1 = 0.12;
        p.eta2 = 0.08;
        p.Omega0 = two_pi * 50e3;
        p.nbar = 1.5;
        std::vector<double> t;
        for (int i = 0; i <= 40; ++i)
            t.push_back(2.5e-6 * i);
        auto curve = sideband_flop(p, t);
        CHECK(curve.A[0] == Approx(0.0).scale(1.0));
        for (double n : curve.norm)
            CHECK(n == Approx(1.0).epsilon(1e-9));
        CHECK(curve.cutoff >= 25u);

        // with decay the long-time value approaches the time average
        p.decay_time = 1e-6;
        auto late = sideband_flop(p, {1e-3, 1.2e-3});
        CHECK(late.A[0] == Approx(late.A[1]).epsilon(1e-9));

        p.cutoff = 3u;
        CHECK_THROWS_AS(sideband_flop(p, t), NumericalError);
        p.cutoff = std::nullopt;
        p.decay_time = -1.0;
        CHECK_THROWS_AS(sideband_flop(p, t), InvalidArgument);
    }
}
