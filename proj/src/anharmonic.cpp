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

#include "ionchain/anharmonic.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "ionchain/constants.hpp"
#include "ionchain/errors.hpp"

namespace ionchain {

namespace c = constants;

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Transforms every index of a row-major tensor by E^T. Each pass contracts
// the leading index and rotates it to the back, so Rank passes restore the
// original index order.
template<std::size_t Rank>
Tensor<Rank> transform(Tensor<Rank> const& t, Eigen::MatrixXd const& E)
{
    auto const n = static_cast<Eigen::Index>(t.extent());
    Eigen::Index const rest = static_cast<Eigen::Index>(t.size()) / std::max<Eigen::Index>(n, 1);
    RowMajor x = Eigen::Map<RowMajor const>(t.data().data(), n, rest);
    for (std::size_t pass = 0; pass < Rank; ++pass) {
        RowMajor const y = E.transpose() * x;  // n x rest, leading index now a mode
        // (a, rest) -> (rest, a): a row-major transpose of the n x rest block
        RowMajor rotated = y.transpose();
        x = Eigen::Map<RowMajor>(rotated.data(), n, rest);
    }
    Tensor<Rank> out(t.extent());
    std::copy(x.data(), x.data() + x.size(), out.data().begin());
    return out;
}

void require_equilibrium(ChainConfiguration const& cfg, Eigen::VectorXd const& x)
{
    double const residual = cfg.model().gradient(x).cwiseAbs().maxCoeff();
    if (residual > 1e-8 * force_scale(cfg))
        throw InvalidArgument("configuration is not at equilibrium");
}

std::string resonance_message(Resonance const& r)
{
    std::ostringstream os;
    os << "resonant denominator " << r.kind << " (Z=" << r.Z << ", alpha=" << r.alpha
       << ", beta=" << r.beta << "): relative size " << r.relative;
    return os.str();
}

void collect_for(Eigen::VectorXd const& w, std::size_t Z, double tol, double scale,
                 std::vector<Resonance>& out)
{
    auto const n = static_cast<std::size_t>(w.size());
    double const wz = w[static_cast<Eigen::Index>(Z)];
    for (std::size_t a = 0; a < n; ++a) {
        if (a == Z)
            continue;
        double const wa = w[static_cast<Eigen::Index>(a)];
        double const d1 = std::abs(4.0 * wa * wa - wz * wz) / scale;
        if (d1 < tol)
            out.push_back({"2a-Z", Z, a, a, d1});
        double const d2 = std::abs(4.0 * wz * wz - wa * wa) / scale;
        if (d2 < tol)
            out.push_back({"2Z-a", Z, a, a, d2});
        for (std::size_t b = a + 1; b < n; ++b) {
            if (b == Z)
                continue;
            double const wb = w[static_cast<Eigen::Index>(b)];
            double const dm = std::abs((wb - wa) * (wb - wa) - wz * wz) / scale;
            if (dm < tol)
                out.push_back({"b-a-Z", Z, a, b, dm});
            double const dp = std::abs((wb + wa) * (wb + wa) - wz * wz) / scale;
            if (dp < tol)
                out.push_back({"b+a-Z", Z, a, b, dp});
        }
    }
}

double max_square(Eigen::VectorXd const& w)
{
    double const m = w.cwiseAbs().maxCoeff();
    return m * m;
}

}  // namespace

//---------------------------------------------------------------------------//
// Tensors
//---------------------------------------------------------------------------//

DerivativeTensors derivative_tensors(ChainConfiguration const& cfg, Contributions const& include)
{
    EnergyModel const model = cfg.model();
    Eigen::VectorXd const x = cfg.coordinates();
    require_equilibrium(cfg, x);

    DerivativeTensors out;
    out.provenance = include;
    out.A3 = model.third(x, include.coulomb, include.trap_cubic);
    out.A4 = model.fourth(x, include.coulomb, include.trap_quartic);

    std::size_t const n = model.size();
    auto const d = static_cast<std::size_t>(model.dimension());
    std::vector<double> w(n);
    for (std::size_t k = 0; k < n; ++k)
        w[k] = 1.0 / std::sqrt(cfg.species[k / d].mass);

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                double const wijk = w[i] * w[j] * w[k];
                out.A3(i, j, k) *= wijk / 6.0;
                for (std::size_t l = 0; l < n; ++l)
                    out.A4(i, j, k, l) *= wijk * w[l] / 24.0;
            }
    return out;
}

ModeTensors mode_tensors(DerivativeTensors const& A, ModeSpectrum const& spectrum)
{
    std::size_t const n = spectrum.size();
    if (A.A3.extent() != n || A.A4.extent() != n)
        throw InvalidArgument("tensor and spectrum dimensions differ");

    ModeTensors G{transform(A.A3, spectrum.eigenvectors), transform(A.A4, spectrum.eigenvectors)};
    Eigen::VectorXd const& s = spectrum.sigma_prime;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
            for (std::size_t cc = 0; cc < n; ++cc) {
                double const sabc = s[static_cast<Eigen::Index>(a)] * s[static_cast<Eigen::Index>(b)]
                                    * s[static_cast<Eigen::Index>(cc)];
                G.G3(a, b, cc) *= sabc;
                for (std::size_t e = 0; e < n; ++e)
                    G.G4(a, b, cc, e) *= sabc * s[static_cast<Eigen::Index>(e)];
            }
    return G;
}

ModeTensors restrict_modes(ModeTensors const& G, std::vector<std::size_t> const& modes)
{
    std::size_t const m = modes.size();
    for (std::size_t k : modes)
        if (k >= G.G3.extent())
            throw InvalidArgument("mode index out of range");
    ModeTensors out{Tensor3(m), Tensor4(m)};
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t cc = 0; cc < m; ++cc) {
                out.G3(a, b, cc) = G.G3(modes[a], modes[b], modes[cc]);
                for (std::size_t e = 0; e < m; ++e)
                    out.G4(a, b, cc, e) = G.G4(modes[a], modes[b], modes[cc], modes[e]);
            }
    return out;
}

//---------------------------------------------------------------------------//
// Perturbation theory
//---------------------------------------------------------------------------//

std::vector<Resonance> detect_resonances(Eigen::VectorXd const& omega, double rel_tol)
{
    std::vector<Resonance> out;
    if (omega.size() == 0)
        return out;
    double const scale = max_square(omega);
    for (std::size_t Z = 0; Z < static_cast<std::size_t>(omega.size()); ++Z)
        collect_for(omega, Z, rel_tol, scale, out);
    return out;
}

double frequency_shift(ModeTensors const& G, Eigen::VectorXd const& omega,
                       std::vector<unsigned> const& occupations, std::size_t Z)
{
    auto const n = static_cast<std::size_t>(omega.size());
    if (G.G3.extent() != n || G.G4.extent() != n || occupations.size() != n)
        throw InvalidArgument("frequency shift: dimension mismatch");
    if (Z >= n)
        throw InvalidArgument("frequency shift: mode index out of range");

    // Denominators are checked whether or not the matching couplings vanish.
    std::vector<Resonance> hard;
    collect_for(omega, Z, resonance_error_tol, max_square(omega), hard);
    if (!hard.empty())
        throw ResonanceError(resonance_message(hard.front()));

    auto w = [&](std::size_t k) { return omega[static_cast<Eigen::Index>(k)]; };
    auto occ = [&](std::size_t k) { return static_cast<double>(occupations[k]); };
    auto g3 = [&](std::size_t a, std::size_t b, std::size_t cc) { return G.G3(a, b, cc); };

    double const wz = w(Z);
    double const nz = occ(Z);
    double const gzzz = g3(Z, Z, Z);

    // first-order quartic
    double quartic = (nz + 1.0) * G.G4(Z, Z, Z, Z);
    for (std::size_t a = 0; a < n; ++a)
        if (a != Z)
            quartic += G.G4(a, a, Z, Z) * (1.0 + 2.0 * occ(a));
    double energy = 12.0 * quartic;

    // second-order cubic, grouped as in the closed form
    double g_a = 0.0;
    double g_z = 10.0 * gzzz * gzzz / wz;
    double g_ab = 0.0;
    double g_last = 0.0;
    for (std::size_t a = 0; a < n; ++a) {
        if (a == Z)
            continue;
        double const wa = w(a);
        double const gaaz = g3(a, a, Z);
        double const gzza = g3(Z, Z, a);
        double const gaaa = g3(a, a, a);
        g_a += (2.0 * occ(a) + 1.0)
               * (2.0 * wa * gaaz * gaaz / (4.0 * wa * wa - wz * wz)
                  + 2.0 * wz * gzza * gzza / (4.0 * wz * wz - wa * wa) + gzzz * gaaz / wz
                  + gzza * gaaa / wa);
        g_z += -6.0 * gzza * gzza * wa / (4.0 * wz * wz - wa * wa) + 12.0 * gzza * gzza / wa;

        double inner = 0.0;
        for (std::size_t b = 0; b < n; ++b) {
            if (b == Z || b == a)
                continue;
            double const wb = w(b);
            double const gabz = g3(a, b, Z);
            double const dm = wb - wa;
            double const dp = wb + wa;
            g_ab += gabz * gabz
                    * ((occ(a) - occ(b)) * dm / (dm * dm - wz * wz)
                       + (occ(a) + occ(b) + 1.0) * dp / (dp * dp - wz * wz));
            inner += g3(a, b, b) * (2.0 * occ(b) + 1.0);
        }
        g_last += gzza / wa * inner;
    }

    // The ordered double sum visits each unordered pair twice, hence 36.
    energy -= (36.0 * g_a + 6.0 * (nz + 1.0) * g_z + 36.0 * g_ab + 36.0 * g_last) / c::hbar;
    return energy / c::planck;
}

ChiMatrix chi_matrix(ModeTensors const& G, ModeSpectrum const& spectrum,
                     Contributions const& provenance)
{
    std::size_t const n = spectrum.size();
    ChiMatrix out;
    out.chi = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    out.mode_frequencies = spectrum.frequencies;
    out.provenance = provenance;

    for (auto const& r : detect_resonances(spectrum.omega, resonance_warning_tol))
        if (r.relative >= resonance_error_tol)
            out.warnings.push_back(r);

    std::vector<unsigned> occ(n, 0u);
    for (std::size_t Z = 0; Z < n; ++Z) {
        double const base = frequency_shift(G, spectrum.omega, occ, Z);
        for (std::size_t a = 0; a < n; ++a) {
            occ[a] = 1u;
            out.chi(static_cast<Eigen::Index>(Z), static_cast<Eigen::Index>(a))
                = frequency_shift(G, spectrum.omega, occ, Z) - base;
            occ[a] = 0u;
        }
    }
    return out;
}

//---------------------------------------------------------------------------//
// Exact diagonalization
//---------------------------------------------------------------------------//

ExactTransition exact_diagonalization(ModeTensors const& G, Eigen::VectorXd const& omega,
                                      std::vector<unsigned> const& occupations, std::size_t Z,
                                      unsigned levels)
{
    auto const m = static_cast<std::size_t>(omega.size());
    if (m == 0 || m > 3)
        throw InvalidArgument("exact diagonalization supports one to three modes");
    if (levels < 2 || levels > 16)
        throw InvalidArgument("levels per mode must lie in [2, 16]");
    if (G.G3.extent() != m || G.G4.extent() != m || occupations.size() != m || Z >= m)
        throw InvalidArgument("exact diagonalization: dimension mismatch");
    for (std::size_t k = 0; k < m; ++k)
        if (occupations[k] + (k == Z ? 1u : 0u) >= levels)
            throw InvalidArgument("occupation exceeds the retained levels");

    // x^p for the untruncated oscillator, restricted to `levels` states
    auto const L = static_cast<Eigen::Index>(levels);
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(L + 4, L + 4);
    for (Eigen::Index k = 0; k + 1 < L + 4; ++k)
        x(k, k + 1) = x(k + 1, k) = std::sqrt(static_cast<double>(k + 1));
    std::array<Eigen::MatrixXd, 5> xp;
    Eigen::MatrixXd power = Eigen::MatrixXd::Identity(L + 4, L + 4);
    for (auto& p : xp) {
        p = power.topLeftCorner(L, L);
        power = power * x;
    }

    // Couplings grouped by how many times each mode appears, in units of hbar.
    std::map<std::array<int, 3>, double> terms;
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t cc = 0; cc < m; ++cc) {
                std::array<int, 3> p3{};
                ++p3[a];
                ++p3[b];
                ++p3[cc];
                terms[p3] += G.G3(a, b, cc) / c::hbar;
                for (std::size_t e = 0; e < m; ++e) {
                    std::array<int, 3> p4 = p3;
                    ++p4[e];
                    terms[p4] += G.G4(a, b, cc, e) / c::hbar;
                }
            }

    std::size_t dim = 1;
    for (std::size_t k = 0; k < m; ++k)
        dim *= levels;
    auto label = [&](std::size_t s) {
        std::array<unsigned, 3> n{};
        for (std::size_t k = m; k-- > 0;) {
            n[k] = static_cast<unsigned>(s % levels);
            s /= levels;
        }
        return n;
    };
    auto index = [&](std::array<unsigned, 3> const& n) {
        std::size_t s = 0;
        for (std::size_t k = 0; k < m; ++k)
            s = s * levels + n[k];
        return s;
    };

    auto const D = static_cast<Eigen::Index>(dim);
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(D, D);
    for (std::size_t s = 0; s < dim; ++s) {
        auto const ns = label(s);
        double diag = 0.0;
        for (std::size_t k = 0; k < m; ++k)
            diag += omega[static_cast<Eigen::Index>(k)] * (ns[k] + 0.5);
        H(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(s)) += diag;
        for (std::size_t t = 0; t < dim; ++t) {
            auto const nt = label(t);
            for (auto const& [p, coef] : terms) {
                if (coef == 0.0)
                    continue;
                double v = coef;
                for (std::size_t k = 0; k < m && v != 0.0; ++k)
                    v *= xp[static_cast<std::size_t>(p[k])](ns[k], nt[k]);
                H(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) += v;
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    if (es.info() != Eigen::Success)
        throw NumericalError("exact diagonalization: eigensolver failed");
    Eigen::MatrixXd const& V = es.eigenvectors();

    auto matched_energy = [&](std::array<unsigned, 3> const& n) {
        auto const s = static_cast<Eigen::Index>(index(n));
        Eigen::Index best = 0;
        double overlap = V.row(s).cwiseAbs2().maxCoeff(&best);
        if (overlap < 0.5)
            throw NumericalError("exact diagonalization: ambiguous state matching (overlap "
                                 + std::to_string(overlap) + ")");
        double edge = 0.0;
        for (std::size_t t = 0; t < dim; ++t) {
            auto const nt = label(t);
            bool boundary = false;
            for (std::size_t k = 0; k < m; ++k)
                boundary = boundary || nt[k] + 1 == levels;
            if (boundary)
                edge += V(static_cast<Eigen::Index>(t), best) * V(static_cast<Eigen::Index>(t), best);
        }
        if (edge > 1e-6)
            throw NumericalError("exact diagonalization: Fock cutoff too small (boundary weight "
                                 + std::to_string(edge) + ")");
        return es.eigenvalues()[best];
    };

    std::array<unsigned, 3> lower{};
    for (std::size_t k = 0; k < m; ++k)
        lower[k] = occupations[k];
    auto upper = lower;
    ++upper[Z];

    ExactTransition out;
    out.frequency = (matched_energy(upper) - matched_energy(lower)) / (2.0 * c::pi);
    out.shift = out.frequency - omega[static_cast<Eigen::Index>(Z)] / (2.0 * c::pi);
    return out;
}

}  // namespace ionchain
