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

// Independent reference computations used only by the tests.

#pragma once

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "ionchain/constants.hpp"

namespace oracle {

namespace c = ionchain::constants;

/// Richardson-extrapolated central difference of f at x with step h.
inline double richardson(std::function<double(double)> const& f, double x, double h)
{
    auto d = [&](double s) { return (f(x + s) - f(x - s)) / (2.0 * s); };
    return (4.0 * d(h / 2.0) - d(h)) / 3.0;
}

/// Gradient of a multivariate function by Richardson differences.
inline Eigen::VectorXd gradient(std::function<double(Eigen::VectorXd const&)> const& f,
                                Eigen::VectorXd const& x, double h)
{
    Eigen::VectorXd g(x.size());
    for (Eigen::Index i = 0; i < x.size(); ++i)
        g[i] = richardson(
            [&](double t) {
                Eigen::VectorXd y = x;
                y[i] = t;
                return f(y);
            },
            x[i], h);
    return g;
}

/// Golden-section minimum of a unimodal function on [a, b].
inline double golden_section(std::function<double(double)> const& f, double a, double b,
                             double tol)
{
    double const r = (std::sqrt(5.0) - 1.0) / 2.0;
    double x1 = b - r * (b - a), x2 = a + r * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 < f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - r * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + r * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

/// Axial chain energy written out directly: sum_i q_i sum_n kappa_n z_i^n - q_i E z_i
/// plus pairwise Coulomb repulsion. Charges in coulombs.
inline double axial_energy(std::vector<double> const& q, std::vector<double> const& kappa,
                           double field, std::vector<double> const& z)
{
    double e = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        double p = 0.0;
        for (std::size_t n = kappa.size(); n-- > 0;)
            p = p * z[i] + kappa[n];
        e += q[i] * (p - field * z[i]);
        for (std::size_t j = i + 1; j < z.size(); ++j)
            e += c::coulomb_constant * q[i] * q[j] / std::abs(z[i] - z[j]);
    }
    return e;
}

/// Position operator x = a + a^dagger on n levels.
inline Eigen::MatrixXd position_operator(int n)
{
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; ++k)
        x(k, k + 1) = x(k + 1, k) = std::sqrt(static_cast<double>(k + 1));
    return x;
}

/// <m| exp(i eta x) |m> from a truncated Fock-space matrix exponential.
inline double displacement_diagonal(double eta, int m, int levels)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(position_operator(levels));
    Eigen::VectorXcd phase = (std::complex<double>(0.0, eta) * es.eigenvalues().cast<std::complex<double>>())
                                 .array()
                                 .exp();
    std::complex<double> s = 0.0;
    for (int k = 0; k < levels; ++k)
        s += phase[k] * es.eigenvectors()(m, k) * es.eigenvectors()(m, k);
    return s.real();
}

}  // namespace oracle
