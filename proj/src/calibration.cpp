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

#include "ionchain/calibration.hpp"

#include <cmath>
#include <cstdint>
#include <limits>

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include "ionchain/errors.hpp"

namespace ionchain {

ModeLabel parse_mode_label(std::string const& text)
{
    if (text == "in-phase" || text == "in_phase")
        return ModeLabel::in_phase;
    if (text == "out-of-phase" || text == "out_of_phase")
        return ModeLabel::out_of_phase;
    throw InvalidArgument("unknown mode label '" + text + "'");
}

std::string to_string(ModeLabel label)
{
    return label == ModeLabel::in_phase ? "in-phase" : "out-of-phase";
}

AxialPotential PotentialFamily::at(double p) const
{
    AxialPotential pot = base;
    for (auto const& [order, d] : dkappa)
        pot.kappa[order] += p * d;
    pot.uniform_field += p * dfield;
    return pot;
}

double labelled_frequency(ModeSpectrum const& spectrum, ModeLabel label)
{
    if (spectrum.config.dimension() != 1 || spectrum.size() != 2)
        throw InvalidArgument("mode labels apply to the axial modes of an ion pair");
    for (Eigen::Index k = 0; k < 2; ++k) {
        double const prod = spectrum.eigenvectors(0, k) * spectrum.eigenvectors(1, k);
        bool const same = prod > 0.0;
        if (same == (label == ModeLabel::in_phase))
            return spectrum.frequencies[k];
    }
    throw NumericalError("no mode matches label " + to_string(label));
}

OrderShiftReport order_shift(AxialPotential const& pot, IonSpecies const& A,
                             IonSpecies const& B, ModeLabel label)
{
    OrderShiftReport r;
    r.label = label;
    r.f_AB = labelled_frequency(mode_spectrum(solve_equilibrium({A, B}, pot)), label);
    r.f_BA = labelled_frequency(mode_spectrum(solve_equilibrium({B, A}, pot)), label);
    r.delta = r.f_AB - r.f_BA;
    return r;
}

namespace {

constexpr std::uintmax_t max_root_iterations = 60;

ModeLabel other(ModeLabel label)
{
    return label == ModeLabel::in_phase ? ModeLabel::out_of_phase : ModeLabel::in_phase;
}

// Bracketed TOMS 748 root of f to |f| < ftol. Returns (x, f(x), iterations).
template<class F>
std::tuple<double, double, int> bracketed_root(F&& f, std::pair<double, double> bracket,
                                               double ftol, std::string const& what)
{
    auto [lo, hi] = bracket;
    if (!(lo < hi))
        throw InvalidArgument(what + ": bracket must satisfy lo < hi");
    double const flo = f(lo);
    double const fhi = f(hi);
    if (std::abs(flo) < ftol && std::abs(fhi) < ftol)
        throw BracketError(what + ": no sign change in bracket (both ends already within "
                           "tolerance, the null is degenerate)");
    if (std::abs(flo) < ftol)
        return {lo, flo, 0};
    if (std::abs(fhi) < ftol)
        return {hi, fhi, 0};
    if ((flo > 0.0) == (fhi > 0.0))
        throw BracketError(what + ": no sign change in bracket");

    double best_x = std::abs(flo) < std::abs(fhi) ? lo : hi;
    double best_f = std::min(std::abs(flo), std::abs(fhi));
    double best_signed = std::abs(flo) < std::abs(fhi) ? flo : fhi;
    auto tracked = [&](double x) {
        double const v = f(x);
        if (std::abs(v) < best_f) {
            best_f = std::abs(v);
            best_x = x;
            best_signed = v;
        }
        return v;
    };
    // stop once the best point meets the tolerance or the bracket collapses
    auto tol = [&](double a, double b) {
        return best_f < ftol || std::abs(b - a) <= 4.0 * std::numeric_limits<double>::epsilon()
                                                       * std::max(std::abs(a), std::abs(b));
    };
    std::uintmax_t iters = max_root_iterations;
    boost::math::tools::toms748_solve(tracked, lo, hi, flo, fhi, tol, iters);
    if (!(best_f < ftol))
        throw NumericalError(what + ": tolerance not reached in " + std::to_string(iters)
                             + " iterations");
    return {best_x, best_signed, static_cast<int>(iters)};
}

}  // namespace

NullResult null_parameter(PotentialFamily const& family, IonSpecies const& A,
                          IonSpecies const& B, ModeLabel label,
                          std::pair<double, double> bracket)
{
    auto shift = [&](double p) { return order_shift(family.at(p), A, B, label).delta; };
    auto const [p, delta, iters] = bracketed_root(shift, bracket, null_tolerance_hz,
                                                  "null parameter");
    NullResult r;
    r.p = p;
    r.delta = delta;
    r.iterations = iters;
    r.other_delta = order_shift(family.at(p), A, B, other(label)).delta;
    return r;
}

NullResult gradient_forward(PotentialFamily const& family, IonSpecies const& A,
                            IonSpecies const& B, double gradient,
                            std::pair<double, double> null_bracket)
{
    PotentialFamily f = family;
    f.base.pseudo_gradient = gradient;
    if (!(f.base.pseudo_reference_mass > 0.0))
        f.base.pseudo_reference_mass = A.mass;
    return null_parameter(f, A, B, ModeLabel::in_phase, null_bracket);
}

GradientInference infer_pseudo_gradient(PotentialFamily const& family, IonSpecies const& A,
                                        IonSpecies const& B, double measured,
                                        std::pair<double, double> gradient_bracket,
                                        std::pair<double, double> null_bracket)
{
    auto mismatch = [&](double g) {
        return gradient_forward(family, A, B, g, null_bracket).other_delta - measured;
    };
    auto const [g, residual, iters] = bracketed_root(mismatch, gradient_bracket,
                                                     null_tolerance_hz, "gradient inference");
    (void)iters;
    GradientInference out;
    out.gradient = g;
    out.residual = residual;
    out.null_p = gradient_forward(family, A, B, g, null_bracket).p;
    return out;
}

double field_sensitivity(AxialPotential const& pot, std::vector<IonSpecies> const& chain,
                         double field, std::size_t mode)
{
    auto frequency = [&](double e) {
        AxialPotential p = pot;
        p.uniform_field += e;
        auto const spec = mode_spectrum(solve_equilibrium(chain, p));
        if (mode >= spec.size())
            throw InvalidArgument("mode index out of range");
        return spec.frequencies[static_cast<Eigen::Index>(mode)];
    };
    double const f0 = frequency(0.0);
    return (frequency(field) - f0) / f0;
}

ComScan com_frequency_scan(AxialPotential const& pot, IonSpecies const& species,
                           std::size_t n_min, std::size_t n_max)
{
    if (n_min < 1 || n_max < n_min)
        throw InvalidArgument("scan range must satisfy 1 <= n_min <= n_max");
    ComScan out;
    for (std::size_t n = n_min; n <= n_max; ++n) {
        auto const spec = mode_spectrum(solve_equilibrium(std::vector<IonSpecies>(n, species), pot));
        // lowest mode whose components all share a sign
        double f = std::numeric_limits<double>::quiet_NaN();
        for (Eigen::Index k = static_cast<Eigen::Index>(spec.size()); k-- > 0;) {
            auto const col = spec.eigenvectors.col(k);
            if ((col.array() > 0.0).all() || (col.array() < 0.0).all()) {
                f = spec.frequencies[k];
                break;
            }
        }
        if (std::isnan(f))
            throw NumericalError("no in-phase mode found for N = " + std::to_string(n));
        out.points.emplace_back(n, f);
    }

    // ordinary least squares
    double const m = static_cast<double>(out.points.size());
    double sx = 0.0, sy = 0.0;
    for (auto const& [n, f] : out.points) {
        sx += static_cast<double>(n);
        sy += f;
    }
    double const mx = sx / m, my = sy / m;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (auto const& [n, f] : out.points) {
        double const dx = static_cast<double>(n) - mx;
        double const dy = f - my;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    out.slope = sxx > 0.0 ? sxy / sxx : 0.0;
    out.intercept = my - out.slope * mx;
    out.r_squared = syy > 0.0 && sxx > 0.0 ? sxy * sxy / (sxx * syy)
                                           : std::numeric_limits<double>::quiet_NaN();
    return out;
}

}  // namespace ionchain
