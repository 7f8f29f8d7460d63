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

#include "ionchain/modes.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <boost/math/special_functions/laguerre.hpp>

#include "ionchain/constants.hpp"
#include "ionchain/errors.hpp"

namespace ionchain {

namespace c = constants;

namespace {

// Equilibrium check, looser than the solver so solved configurations pass.
constexpr double equilibrium_slack = 1e-8;

Eigen::VectorXd inverse_sqrt_masses(ChainConfiguration const& cfg)
{
    int const d = cfg.dimension();
    Eigen::VectorXd w(static_cast<Eigen::Index>(cfg.species.size()) * d);
    for (std::size_t i = 0; i < cfg.species.size(); ++i)
        for (int a = 0; a < d; ++a)
            w[static_cast<Eigen::Index>(i) * d + a] = 1.0 / std::sqrt(cfg.species[i].mass);
    return w;
}

}  // namespace

std::size_t ModeSpectrum::coordinate(std::size_t ion, int axis) const
{
    int const d = config.dimension();
    if (ion >= config.species.size() || axis < 0 || axis >= d)
        throw InvalidArgument("coordinate index out of range");
    return ion * static_cast<std::size_t>(d) + static_cast<std::size_t>(axis);
}

double ModeSpectrum::coordinate_mass(std::size_t row) const
{
    auto const d = static_cast<std::size_t>(config.dimension());
    if (row >= config.species.size() * d)
        throw InvalidArgument("coordinate index out of range");
    return config.species[row / d].mass;
}

Eigen::MatrixXd hessian(ChainConfiguration const& cfg)
{
    EnergyModel const model = cfg.model();
    Eigen::VectorXd const x = cfg.coordinates();
    double const residual = model.gradient(x).cwiseAbs().maxCoeff();
    if (residual > equilibrium_slack * force_scale(cfg))
        throw InvalidArgument("configuration is not at equilibrium (residual gradient "
                              + std::to_string(residual) + " J/m)");
    Eigen::VectorXd const w = inverse_sqrt_masses(cfg);
    Eigen::MatrixXd h = w.asDiagonal() * model.hessian(x) * w.asDiagonal();
    return 0.5 * (h + h.transpose());
}

ModeSpectrum mode_spectrum(ChainConfiguration const& cfg)
{
    Eigen::MatrixXd const h = hessian(cfg);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalError("eigensolver failed");

    Eigen::Index const n = h.rows();
    ModeSpectrum spec;
    spec.config = cfg;
    spec.frequencies.resize(n);
    spec.omega.resize(n);
    spec.eigenvectors.resize(n, n);
    spec.sigma_prime.resize(n);
    spec.sigma_ion.resize(n, n);

    // Eigen sorts ascending; flip to descending.
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::Index const src = n - 1 - k;
        double const lambda = es.eigenvalues()[src];
        if (!(lambda > 0.0))
            throw NumericalError("mode " + std::to_string(k) + " has non-positive eigenvalue "
                                 + std::to_string(lambda) + " s^-2: potential does not confine");
        Eigen::VectorXd v = es.eigenvectors().col(src);
        for (Eigen::Index r = 0; r < n; ++r) {
            if (std::abs(v[r]) > 1e-12) {
                if (v[r] < 0.0)
                    v = -v;
                break;
            }
        }
        double const w = std::sqrt(lambda);
        spec.omega[k] = w;
        spec.frequencies[k] = w / (2.0 * c::pi);
        spec.eigenvectors.col(k) = v;
        spec.sigma_prime[k] = std::sqrt(c::hbar / (2.0 * w));
    }

    Eigen::VectorXd const invsqrt = inverse_sqrt_masses(cfg);
    spec.sigma_ion = invsqrt.asDiagonal() * spec.eigenvectors * spec.sigma_prime.asDiagonal();
    return spec;
}

double ground_state_size(ModeSpectrum const& spectrum, std::size_t row, std::size_t mode)
{
    if (row >= spectrum.size() || mode >= spectrum.size())
        throw InvalidArgument("ion or mode index out of range");
    return spectrum.sigma_ion(static_cast<Eigen::Index>(row), static_cast<Eigen::Index>(mode));
}

double lamb_dicke(ModeSpectrum const& spectrum, double delta_k, std::size_t row,
                  std::size_t mode)
{
    if (!(delta_k > 0.0))
        throw InvalidArgument("wavevector difference must be positive");
    return delta_k * std::abs(ground_state_size(spectrum, row, mode));
}

double amplitude_ratio(ModeSpectrum const& spectrum, std::size_t mode, std::size_t row_a,
                       std::size_t row_b)
{
    if (mode >= spectrum.size() || row_a >= spectrum.size() || row_b >= spectrum.size())
        throw InvalidArgument("ion or mode index out of range");
    auto const k = static_cast<Eigen::Index>(mode);
    double const eb = spectrum.eigenvectors(static_cast<Eigen::Index>(row_b), k);
    if (std::abs(eb) < 1e-9)
        throw InvalidArgument("amplitude ratio: reference component is zero");
    return std::abs(spectrum.eigenvectors(static_cast<Eigen::Index>(row_a), k) / eb);
}

double carrier_matrix_element(double eta, unsigned n)
{
    if (!(eta >= 0.0))
        throw InvalidArgument("Lamb-Dicke parameter must be non-negative");
    double const e2 = eta * eta;
    return std::exp(-0.5 * e2) * boost::math::laguerre(n, e2);
}

}  // namespace ionchain
