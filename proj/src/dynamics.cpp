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

#include "ionchain/dynamics.hpp"

#include <cmath>
#include <string>

#include <Eigen/Eigenvalues>

#include "ionchain/constants.hpp"
#include "ionchain/errors.hpp"

namespace ionchain {

namespace c = constants;

double thermal_occupation(double frequency_hz, double temperature)
{
    if (!(frequency_hz > 0.0))
        throw InvalidArgument("frequency must be positive");
    if (temperature < 0.0)
        throw InvalidArgument("temperature must be non-negative");
    if (temperature == 0.0)
        return 0.0;
    return 1.0 / std::expm1(c::planck * frequency_hz / (c::boltzmann * temperature));
}

ThermalEnvironment ThermalEnvironment::doppler(double temperature_k)
{
    if (!(temperature_k >= 0.0))
        throw InvalidArgument("temperature must be non-negative");
    ThermalEnvironment env;
    env.temperature = temperature_k;
    return env;
}

ThermalEnvironment ThermalEnvironment::explicit_nbar(std::vector<double> nbar)
{
    for (double n : nbar)
        if (!(n >= 0.0))
            throw InvalidArgument("mean occupations must be non-negative");
    ThermalEnvironment env;
    env.nbar = std::move(nbar);
    return env;
}

Eigen::VectorXd ThermalEnvironment::occupations(Eigen::VectorXd const& frequencies_hz) const
{
    Eigen::VectorXd n(frequencies_hz.size());
    if (temperature) {
        for (Eigen::Index k = 0; k < n.size(); ++k)
            n[k] = thermal_occupation(frequencies_hz[k], *temperature);
        return n;
    }
    if (static_cast<Eigen::Index>(nbar.size()) != frequencies_hz.size())
        throw InvalidArgument("need one mean occupation per mode");
    for (Eigen::Index k = 0; k < n.size(); ++k)
        n[k] = nbar[static_cast<std::size_t>(k)];
    return n;
}

namespace {

void check_chi(Eigen::MatrixXd const& chi, Eigen::VectorXd const& f, std::size_t Z)
{
    if (chi.rows() != chi.cols() || chi.rows() != f.size())
        throw InvalidArgument("chi matrix and frequency list sizes differ");
    if (Z >= static_cast<std::size_t>(f.size()))
        throw InvalidArgument("mode index out of range");
}

}  // namespace

double fock_coherence(Eigen::MatrixXd const& chi, Eigen::VectorXd const& frequencies_hz,
                      std::size_t Z, unsigned n_upper, ThermalEnvironment const& env, double t)
{
    check_chi(chi, frequencies_hz, Z);
    if (n_upper < 1)
        throw InvalidArgument("superposition needs n_Z >= 1");
    Eigen::VectorXd const nbar = env.occupations(frequencies_hz);
    auto const z = static_cast<Eigen::Index>(Z);

    double value = 1.0;
    for (Eigen::Index a = 0; a < chi.cols(); ++a) {
        if (a == z)
            continue;
        double const x = nbar[a] / (nbar[a] + 1.0);
        double const phase = 2.0 * c::pi * chi(z, a) * n_upper * t;
        value *= (1.0 - x) / std::abs(1.0 - x * std::polar(1.0, -phase));
    }
    return value;
}

double GateParams::gate_time() const
{
    if (duration)
        return *duration;
    if (delta == 0.0)
        throw InvalidArgument("gate detuning must be nonzero");
    return 2.0 * c::pi / std::abs(delta);
}

GatePoint gate_trajectory(GateParams const& p, double t)
{
    if (p.delta == 0.0)
        throw InvalidArgument("gate detuning must be nonzero");
    double const d = p.delta;
    GatePoint out;
    out.alpha = -(p.Omega / d) * std::polar(1.0, -0.5 * d * t) * std::sin(0.5 * d * t);
    out.Phi = p.Omega * p.Omega / (4.0 * d * d) * (std::sin(d * t) - d * t);
    return out;
}

double gate_fidelity(std::complex<double> alpha, double Phi)
{
    double const a2 = std::norm(alpha);
    return 0.375 + 0.125 * std::exp(-2.0 * a2) + 0.5 * std::exp(-0.5 * a2) * std::sin(std::abs(Phi));
}

double thermal_gate_infidelity(Eigen::MatrixXd const& chi, Eigen::VectorXd const& frequencies_hz,
                               std::size_t Z, double delta, ThermalEnvironment const& env)
{
    check_chi(chi, frequencies_hz, Z);
    if (delta == 0.0)
        throw InvalidArgument("gate detuning must be nonzero");
    Eigen::VectorXd const nbar = env.occupations(frequencies_hz);
    Eigen::VectorXd const row = chi.row(static_cast<Eigen::Index>(Z)).transpose();

    Eigen::VectorXd const weighted = row.cwiseProduct(nbar);
    double const total = weighted.sum();
    // sum over a != b is the full square minus its diagonal
    double const cross = total * total - weighted.squaredNorm();
    double diag = 0.0;
    for (Eigen::Index a = 0; a < row.size(); ++a)
        diag += row[a] * row[a] * nbar[a] * (2.0 * nbar[a] + 1.0);
    double const pi2 = c::pi * c::pi;
    return 3.0 * pi2 * pi2 / (delta * delta) * (cross + diag);
}

//---------------------------------------------------------------------------//
// Sideband flopping
//---------------------------------------------------------------------------//

namespace {

constexpr double tail_tolerance = 1e-6;

// Thermal weights p_n for n = 0..cutoff, and the weight beyond.
std::vector<double> thermal_weights(double nbar, unsigned cutoff, double& tail)
{
    double const x = nbar / (nbar + 1.0);
    std::vector<double> p(cutoff + 1);
    double pn = 1.0 - x;
    double sum = 0.0;
    for (unsigned n = 0; n <= cutoff; ++n) {
        p[n] = pn;
        sum += pn;
        pn *= x;
    }
    tail = std::max(0.0, 1.0 - sum);
    return p;
}

}  // namespace

SidebandCurve sideband_flop(SidebandParams const& p, std::vector<double> const& times)
{
    if (p.eta1 < 0.0 || p.eta2 < 0.0)
        throw InvalidArgument("Lamb-Dicke parameters must be non-negative");
    if (!(p.decay_time > 0.0))
        throw InvalidArgument("decay time must be positive");
    if (!p.fock && !(p.nbar >= 0.0))
        throw InvalidArgument("mean occupation must be non-negative");

    // initial mode populations
    std::vector<double> weights;
    unsigned cutoff = 0;
    if (p.fock) {
        cutoff = *p.fock;
        weights.assign(cutoff + 1, 0.0);
        weights[cutoff] = 1.0;
    } else {
        double tail = 0.0;
        if (p.cutoff) {
            cutoff = *p.cutoff;
            weights = thermal_weights(p.nbar, cutoff, tail);
            if (tail > tail_tolerance)
                throw NumericalError("sideband cutoff " + std::to_string(cutoff)
                                     + " leaves thermal weight " + std::to_string(tail));
        } else {
            cutoff = static_cast<unsigned>(std::ceil(10.0 * p.nbar + 10.0));
            weights = thermal_weights(p.nbar, cutoff, tail);
            while (tail > tail_tolerance) {
                cutoff *= 2;
                weights = thermal_weights(p.nbar, cutoff, tail);
            }
        }
    }

    // Basis |s1 s2 n> with s = 0 (down) or 1 (up); two sideband steps at most.
    unsigned const levels = cutoff + 3;
    auto index = [levels](unsigned s1, unsigned s2, unsigned n) {
        return static_cast<Eigen::Index>((2 * s1 + s2) * levels + n);
    };
    Eigen::Index const dim = 4 * static_cast<Eigen::Index>(levels);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(dim, dim);
    for (unsigned n = 0; n + 1 < levels; ++n) {
        double const root = std::sqrt(static_cast<double>(n + 1));
        double const g1 = 0.5 * p.Omega0 * p.eta1 * root;
        double const g2 = 0.5 * p.Omega0 * p.eta2 * root;
        for (unsigned other = 0; other < 2; ++other) {
            Eigen::Index const a = index(0, other, n);
            Eigen::Index const b = index(1, other, n + 1);
            H(a, b) = H(b, a) = g1;
            Eigen::Index const c2 = index(other, 0, n);
            Eigen::Index const d2 = index(other, 1, n + 1);
            H(c2, d2) = H(d2, c2) = g2;
        }
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalError("sideband eigensolver failed");
    Eigen::MatrixXd const& V = es.eigenvectors();
    Eigen::VectorXd const& E = es.eigenvalues();

    // observable: excitation fraction of the two spins
    Eigen::VectorXd obs(dim);
    for (unsigned s1 = 0; s1 < 2; ++s1)
        for (unsigned s2 = 0; s2 < 2; ++s2)
            for (unsigned n = 0; n < levels; ++n)
                obs[index(s1, s2, n)] = 0.5 * (s1 + s2);

    double const escale = std::max(E.cwiseAbs().maxCoeff(), 1.0);
    SidebandCurve out;
    out.t = times;
    out.A.assign(times.size(), 0.0);
    out.norm.assign(times.size(), 0.0);
    out.cutoff = cutoff;

    for (unsigned n0 = 0; n0 <= cutoff; ++n0) {
        double const w = weights[n0];
        if (w == 0.0)
            continue;
        Eigen::VectorXd const coef = V.row(index(0, 0, n0)).transpose();
        std::vector<Eigen::Index> active;
        for (Eigen::Index k = 0; k < dim; ++k)
            if (std::abs(coef[k]) > 1e-14)
                active.push_back(k);

        auto const na = static_cast<Eigen::Index>(active.size());
        Eigen::MatrixXd Vact(dim, na);
        for (Eigen::Index k = 0; k < na; ++k)
            Vact.col(k) = V.col(active[static_cast<std::size_t>(k)]);
        Eigen::MatrixXd const O = Vact.transpose() * obs.asDiagonal() * Vact;
        Eigen::MatrixXd const S = Vact.transpose() * Vact;

        for (std::size_t ti = 0; ti < times.size(); ++ti) {
            double const t = times[ti];
            double const damp = std::isinf(p.decay_time) ? 1.0 : std::exp(-t / p.decay_time);
            double a = 0.0;
            double norm = 0.0;
            for (Eigen::Index k = 0; k < na; ++k)
                for (Eigen::Index l = 0; l < na; ++l) {
                    Eigen::Index const ek = active[static_cast<std::size_t>(k)];
                    Eigen::Index const el = active[static_cast<std::size_t>(l)];
                    double const ckl = coef[ek] * coef[el];
                    double const dE = E[ek] - E[el];
                    bool const stationary = std::abs(dE) <= 1e-12 * escale;
                    double const phase = stationary ? 1.0 : std::cos(dE * t);
                    a += ckl * O(k, l) * (stationary ? 1.0 : phase * damp);
                    norm += ckl * S(k, l) * phase;
                }
            out.A[ti] += w * a;
            out.norm[ti] += w * norm;
        }
    }
    return out;
}

}  // namespace ionchain
