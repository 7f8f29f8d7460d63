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

#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include <Eigen/Core>

namespace ionchain {

/// Bose-Einstein occupation 1 / (exp(h f / k T) - 1). Zero at T = 0.
double thermal_occupation(double frequency_hz, double temperature);

/// Mode populations from a Doppler temperature or an explicit list.
struct ThermalEnvironment {
    std::optional<double> temperature;  // K
    std::vector<double> nbar;  // one per mode when temperature is unset

    static ThermalEnvironment doppler(double temperature_k);
    static ThermalEnvironment explicit_nbar(std::vector<double> nbar);

    /// Mean occupations for the given mode frequencies (Hz).
    Eigen::VectorXd occupations(Eigen::VectorXd const& frequencies_hz) const;
};

/// |<0| rho |n_Z>| relative to its initial value for (|0> + |n_Z>)/sqrt 2 in
/// mode Z while the other modes are thermal,
///   C(t) = prod_{a != Z} |1 - x_a| / |1 - x_a exp(-i 2 pi chi_Za n_Z t)|,
/// with x_a = nbar_a / (nbar_a + 1).
/// chi is in Hz per quantum; frequencies in Hz.
double fock_coherence(Eigen::MatrixXd const& chi, Eigen::VectorXd const& frequencies_hz,
                      std::size_t Z, unsigned n_upper, ThermalEnvironment const& env, double t);

struct GateParams {
    double Omega = 0.0;  // rad/s
    double delta = 0.0;  // rad/s
    std::optional<double> duration;  // s, defaults to 2 pi / delta

    double gate_time() const;
};

struct GatePoint {
    std::complex<double> alpha;
    double Phi = 0.0;  // rad
};

/// alpha(t) = -(Omega/delta) exp(-i delta t / 2) sin(delta t / 2),
/// Phi(t) = (Omega^2 / 4 delta^2) (sin(delta t) - delta t).
GatePoint gate_trajectory(GateParams const& p, double t);

/// F = 3/8 + exp(-2|alpha|^2)/8 + exp(-|alpha|^2/2) sin|Phi| / 2.
/// Phi enters through its magnitude; the closed loop gives Phi = -pi/2.
double gate_fidelity(std::complex<double> alpha, double Phi);

/// 1 - F = (3 pi^4 / delta^2) [ sum_{a != b} chi_Za chi_Zb nbar_a nbar_b
///                              + sum_a chi_Za^2 nbar_a (2 nbar_a + 1) ],
/// summed over every mode including Z. chi in Hz, delta in rad/s.
double thermal_gate_infidelity(Eigen::MatrixXd const& chi, Eigen::VectorXd const& frequencies_hz,
                               std::size_t Z, double delta, ThermalEnvironment const& env);

/// Two spins on the blue sideband of one shared mode.
///
/// |down, n> couples to |up, n + 1> with Rabi rate Omega0 eta_j sqrt(n + 1)
/// for ion j. Both spins start down; the mode starts in a Fock state or a
/// thermal state. Oscillating terms decay as exp(-t / decay_time) toward the
/// time-averaged value.
struct SidebandParams {
    double eta1 = 0.0;
    double eta2 = 0.0;
    double Omega0 = 0.0;  // rad/s
    double decay_time = std::numeric_limits<double>::infinity();  // s
    std::optional<unsigned> fock;  // initial Fock state
    double nbar = 0.0;  // used when fock is unset
    std::optional<unsigned> cutoff;  // highest initial n kept; auto when unset
};

struct SidebandCurve {
    std::vector<double> t;  // s
    std::vector<double> A;  // P(up up) + [P(up down) + P(down up)] / 2
    std::vector<double> norm;  // total probability
    unsigned cutoff = 0;  // highest initial n kept
};

/// Throws NumericalError when a user cutoff leaves more than 1e-6 of the
/// thermal weight outside.
SidebandCurve sideband_flop(SidebandParams const& p, std::vector<double> const& times);

}  // namespace ionchain
