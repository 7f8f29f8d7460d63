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

#include "ionchain/statics.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "ionchain/constants.hpp"
#include "ionchain/errors.hpp"

namespace ionchain {

namespace c = constants;

int coordinates_per_ion(Potential const& pot) noexcept
{
    return std::holds_alternative<TrapModel3D>(pot) ? 3 : 1;
}

AxialPotential const& axial_part(Potential const& pot) noexcept
{
    if (auto const* t = std::get_if<TrapModel3D>(&pot))
        return t->axial;
    return std::get<AxialPotential>(pot);
}

namespace {

constexpr double min_separation = 1e-12;

//---------------------------------------------------------------------------//
// Derivatives of f(x) = 1/|x| in three dimensions
//---------------------------------------------------------------------------//

struct InverseDistance {
    Eigen::Vector3d x;
    double r;

    double d(int a, int b) const { return a == b ? 1.0 : 0.0; }

    double d1(int a) const { return -x[a] / (r * r * r); }

    double d2(int a, int b) const
    {
        double const r3 = r * r * r;
        return 3.0 * x[a] * x[b] / (r3 * r * r) - d(a, b) / r3;
    }

    double d3(int a, int b, int cc) const
    {
        double const r5 = std::pow(r, 5);
        return -15.0 * x[a] * x[b] * x[cc] / (r5 * r * r)
               + 3.0 * (d(a, b) * x[cc] + d(a, cc) * x[b] + d(b, cc) * x[a]) / r5;
    }

    double d4(int a, int b, int cc, int e) const
    {
        double const r5 = std::pow(r, 5);
        double const r7 = r5 * r * r;
        double const six = d(a, b) * x[cc] * x[e] + d(a, cc) * x[b] * x[e]
                           + d(a, e) * x[b] * x[cc] + d(b, cc) * x[a] * x[e]
                           + d(b, e) * x[a] * x[cc] + d(cc, e) * x[a] * x[b];
        double const three = d(a, b) * d(cc, e) + d(a, cc) * d(b, e) + d(a, e) * d(b, cc);
        return 105.0 * x[a] * x[b] * x[cc] * x[e] / (r7 * r * r) - 15.0 * six / r7
               + 3.0 * three / r5;
    }
};

// Spatial axis of local coordinate a.
inline int axis_of(int dim, int a) noexcept
{
    return dim == 1 ? 2 : a;
}

double trap_energy(Potential const& pot, IonSpecies const& s, Eigen::Vector3d const& r)
{
    if (auto const* t = std::get_if<TrapModel3D>(&pot))
        return evaluate_trap(*t, s, r);
    return evaluate_axial(std::get<AxialPotential>(pot), s, r.z());
}

// Offsets of r from the trap expansion origin.
std::array<double, 3> trap_offsets(TrapModel3D const& t, Eigen::Vector3d const& r)
{
    return {r.x(), r.y(), r.z() - t.axial.expansion_origin};
}

}  // namespace

//---------------------------------------------------------------------------//
// EnergyModel
//---------------------------------------------------------------------------//

EnergyModel::EnergyModel(std::vector<IonSpecies> species, Potential potential)
    : species_(std::move(species)), potential_(std::move(potential)),
      dim_(coordinates_per_ion(potential_))
{
    if (species_.empty())
        throw InvalidArgument("chain must contain at least one ion");
    std::visit([](auto const& p) { p.validate(); }, potential_);
}

Eigen::Vector3d EnergyModel::position(Eigen::VectorXd const& x, std::size_t i) const
{
    if (dim_ == 1)
        return {0.0, 0.0, x[static_cast<Eigen::Index>(i)]};
    auto const o = static_cast<Eigen::Index>(3 * i);
    return {x[o], x[o + 1], x[o + 2]};
}

Eigen::VectorXd EnergyModel::flatten(std::vector<Eigen::Vector3d> const& r) const
{
    if (r.size() != ions())
        throw InvalidArgument("position count does not match the chain");
    Eigen::VectorXd x(static_cast<Eigen::Index>(size()));
    for (std::size_t i = 0; i < r.size(); ++i)
        for (int a = 0; a < dim_; ++a)
            x[static_cast<Eigen::Index>(i) * dim_ + a] = r[i][axis_of(dim_, a)];
    return x;
}

void EnergyModel::check_separations(Eigen::VectorXd const& x) const
{
    if (x.size() != static_cast<Eigen::Index>(size()))
        throw InvalidArgument("coordinate vector has wrong length");
    for (std::size_t i = 0; i < ions(); ++i)
        for (std::size_t j = i + 1; j < ions(); ++j)
            if ((position(x, i) - position(x, j)).norm() < min_separation)
                throw InvalidArgument("ions " + std::to_string(i) + " and "
                                      + std::to_string(j) + " coincide");
}

double EnergyModel::energy(Eigen::VectorXd const& x) const
{
    check_separations(x);
    double u = 0.0;
    for (std::size_t i = 0; i < ions(); ++i)
        u += trap_energy(potential_, species_[i], position(x, i));
    for (std::size_t i = 0; i < ions(); ++i)
        for (std::size_t j = i + 1; j < ions(); ++j)
            u += c::coulomb_constant * species_[i].charge_si() * species_[j].charge_si()
                 / (position(x, i) - position(x, j)).norm();
    return u;
}

Eigen::VectorXd EnergyModel::gradient(Eigen::VectorXd const& x) const
{
    check_separations(x);
    Eigen::VectorXd g = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(size()));
    auto at = [&](std::size_t i, int a) -> double& {
        return g[static_cast<Eigen::Index>(i) * dim_ + a];
    };

    for (std::size_t i = 0; i < ions(); ++i) {
        IonSpecies const& s = species_[i];
        Eigen::Vector3d const r = position(x, i);
        if (auto const* t = std::get_if<TrapModel3D>(&potential_)) {
            double const q = s.charge_si();
            auto const d = trap_offsets(*t, r);
            std::array<double, 3> f{2.0 * q * t->radial_curvature(0, s) * r.x(),
                                    2.0 * q * t->radial_curvature(1, s) * r.y(),
                                    axial_derivative(t->axial, s, r.z(), 1)};
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b)
                    for (std::size_t cc = 0; cc < 3; ++cc) {
                        double const bc = d[b] * d[cc];
                        f[a] += q * 3.0 * t->trap_cubic(a, b, cc) * bc;
                        for (std::size_t e = 0; e < 3; ++e)
                            f[a] += q * 4.0 * t->trap_quartic(a, b, cc, e) * bc * d[e];
                    }
            for (int a = 0; a < 3; ++a)
                at(i, a) += f[static_cast<std::size_t>(a)];
        } else {
            at(i, 0) += axial_derivative(std::get<AxialPotential>(potential_), s, r.z(), 1);
        }
    }

    for (std::size_t i = 0; i < ions(); ++i)
        for (std::size_t j = i + 1; j < ions(); ++j) {
            InverseDistance const f{position(x, i) - position(x, j),
                                    (position(x, i) - position(x, j)).norm()};
            double const pre = c::coulomb_constant * species_[i].charge_si()
                               * species_[j].charge_si();
            for (int a = 0; a < dim_; ++a) {
                double const v = pre * f.d1(axis_of(dim_, a));
                at(i, a) += v;
                at(j, a) -= v;
            }
        }
    return g;
}

Eigen::MatrixXd EnergyModel::hessian(Eigen::VectorXd const& x) const
{
    check_separations(x);
    auto const n = static_cast<Eigen::Index>(size());
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(n, n);

    for (std::size_t i = 0; i < ions(); ++i) {
        IonSpecies const& s = species_[i];
        Eigen::Vector3d const r = position(x, i);
        auto const o = static_cast<Eigen::Index>(i) * dim_;
        if (auto const* t = std::get_if<TrapModel3D>(&potential_)) {
            double const q = s.charge_si();
            auto const d = trap_offsets(*t, r);
            h(o, o) += 2.0 * q * t->radial_curvature(0, s);
            h(o + 1, o + 1) += 2.0 * q * t->radial_curvature(1, s);
            h(o + 2, o + 2) += axial_derivative(t->axial, s, r.z(), 2);
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b) {
                    double v = 0.0;
                    for (std::size_t cc = 0; cc < 3; ++cc) {
                        v += 6.0 * t->trap_cubic(a, b, cc) * d[cc];
                        for (std::size_t e = 0; e < 3; ++e)
                            v += 12.0 * t->trap_quartic(a, b, cc, e) * d[cc] * d[e];
                    }
                    h(o + static_cast<Eigen::Index>(a), o + static_cast<Eigen::Index>(b)) += q * v;
                }
        } else {
            h(o, o) += axial_derivative(std::get<AxialPotential>(potential_), s, r.z(), 2);
        }
    }

    for (std::size_t i = 0; i < ions(); ++i)
        for (std::size_t j = i + 1; j < ions(); ++j) {
            InverseDistance const f{position(x, i) - position(x, j),
                                    (position(x, i) - position(x, j)).norm()};
            double const pre = c::coulomb_constant * species_[i].charge_si()
                               * species_[j].charge_si();
            std::array<Eigen::Index, 2> const base{static_cast<Eigen::Index>(i) * dim_,
                                                   static_cast<Eigen::Index>(j) * dim_};
            for (int a = 0; a < dim_; ++a)
                for (int b = 0; b < dim_; ++b) {
                    double const v = pre * f.d2(axis_of(dim_, a), axis_of(dim_, b));
                    for (unsigned mask = 0; mask < 4; ++mask) {
                        double const sign = (std::popcount(mask) % 2) ? -1.0 : 1.0;
                        h(base[mask & 1u] + a, base[(mask >> 1) & 1u] + b) += sign * v;
                    }
                }
        }
    return h;
}

Tensor3 EnergyModel::third(Eigen::VectorXd const& x, bool coulomb, bool trap) const
{
    check_separations(x);
    Tensor3 t3(size());
    auto const D = static_cast<std::size_t>(dim_);

    for (std::size_t i = 0; trap && i < ions(); ++i) {
        IonSpecies const& s = species_[i];
        Eigen::Vector3d const r = position(x, i);
        std::size_t const o = i * D;
        if (auto const* t = std::get_if<TrapModel3D>(&potential_)) {
            double const q = s.charge_si();
            auto const d = trap_offsets(*t, r);
            t3(o + 2, o + 2, o + 2) += axial_derivative(t->axial, s, r.z(), 3);
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b)
                    for (std::size_t cc = 0; cc < 3; ++cc) {
                        double v = 6.0 * t->trap_cubic(a, b, cc);
                        for (std::size_t e = 0; e < 3; ++e)
                            v += 24.0 * t->trap_quartic(a, b, cc, e) * d[e];
                        t3(o + a, o + b, o + cc) += q * v;
                    }
        } else {
            t3(o, o, o) += axial_derivative(std::get<AxialPotential>(potential_), s, r.z(), 3);
        }
    }

    for (std::size_t i = 0; coulomb && i < ions(); ++i)
        for (std::size_t j = i + 1; j < ions(); ++j) {
            InverseDistance const f{position(x, i) - position(x, j),
                                    (position(x, i) - position(x, j)).norm()};
            double const pre = c::coulomb_constant * species_[i].charge_si()
                               * species_[j].charge_si();
            std::array<std::size_t, 2> const base{i * D, j * D};
            for (std::size_t a = 0; a < D; ++a)
                for (std::size_t b = 0; b < D; ++b)
                    for (std::size_t cc = 0; cc < D; ++cc) {
                        double const v = pre
                                         * f.d3(axis_of(dim_, static_cast<int>(a)),
                                                axis_of(dim_, static_cast<int>(b)),
                                                axis_of(dim_, static_cast<int>(cc)));
                        for (unsigned mask = 0; mask < 8; ++mask) {
                            double const sign = (std::popcount(mask) % 2) ? -1.0 : 1.0;
                            t3(base[mask & 1u] + a, base[(mask >> 1) & 1u] + b,
                               base[(mask >> 2) & 1u] + cc) += sign * v;
                        }
                    }
        }
    return t3;
}

Tensor4 EnergyModel::fourth(Eigen::VectorXd const& x, bool coulomb, bool trap) const
{
    check_separations(x);
    Tensor4 t4(size());
    auto const D = static_cast<std::size_t>(dim_);

    for (std::size_t i = 0; trap && i < ions(); ++i) {
        IonSpecies const& s = species_[i];
        Eigen::Vector3d const r = position(x, i);
        std::size_t const o = i * D;
        if (auto const* t = std::get_if<TrapModel3D>(&potential_)) {
            double const q = s.charge_si();
            t4(o + 2, o + 2, o + 2, o + 2) += axial_derivative(t->axial, s, r.z(), 4);
            for (std::size_t a = 0; a < 3; ++a)
                for (std::size_t b = 0; b < 3; ++b)
                    for (std::size_t cc = 0; cc < 3; ++cc)
                        for (std::size_t e = 0; e < 3; ++e)
                            t4(o + a, o + b, o + cc, o + e) += q * 24.0 * t->trap_quartic(a, b, cc, e);
        } else {
            t4(o, o, o, o) += axial_derivative(std::get<AxialPotential>(potential_), s, r.z(), 4);
        }
    }

    for (std::size_t i = 0; coulomb && i < ions(); ++i)
        for (std::size_t j = i + 1; j < ions(); ++j) {
            InverseDistance const f{position(x, i) - position(x, j),
                                    (position(x, i) - position(x, j)).norm()};
            double const pre = c::coulomb_constant * species_[i].charge_si()
                               * species_[j].charge_si();
            std::array<std::size_t, 2> const base{i * D, j * D};
            for (std::size_t a = 0; a < D; ++a)
                for (std::size_t b = 0; b < D; ++b)
                    for (std::size_t cc = 0; cc < D; ++cc)
                        for (std::size_t e = 0; e < D; ++e) {
                            double const v = pre
                                             * f.d4(axis_of(dim_, static_cast<int>(a)),
                                                    axis_of(dim_, static_cast<int>(b)),
                                                    axis_of(dim_, static_cast<int>(cc)),
                                                    axis_of(dim_, static_cast<int>(e)));
                            for (unsigned mask = 0; mask < 16; ++mask) {
                                double const sign = (std::popcount(mask) % 2) ? -1.0 : 1.0;
                                t4(base[mask & 1u] + a, base[(mask >> 1) & 1u] + b,
                                   base[(mask >> 2) & 1u] + cc, base[(mask >> 3) & 1u] + e)
                                    += sign * v;
                            }
                        }
        }
    return t4;
}

//---------------------------------------------------------------------------//
// Scales
//---------------------------------------------------------------------------//

double characteristic_length(IonSpecies const& species, double kappa2)
{
    if (!(kappa2 > 0.0))
        throw InvalidArgument("kappa_2 must be positive");
    return std::cbrt(species.charge_si() / (8.0 * c::pi * c::vacuum_permittivity * kappa2));
}

double chain_length(ChainConfiguration const& cfg)
{
    if (cfg.positions.size() < 2)
        throw InvalidArgument("chain length needs at least two ions");
    return (cfg.positions.back() - cfg.positions.front()).norm();
}

double force_scale(ChainConfiguration const& cfg)
{
    IonSpecies const& s = cfg.species.front();
    double const k2 = axial_part(cfg.potential).kappa2();
    return 2.0 * s.charge_si() * k2 * characteristic_length(s, k2);
}

//---------------------------------------------------------------------------//
// Equilibrium
//---------------------------------------------------------------------------//

namespace {

bool ordered(EnergyModel const& model, Eigen::VectorXd const& x)
{
    for (std::size_t i = 0; i + 1 < model.ions(); ++i)
        if (!(model.position(x, i + 1).z() - model.position(x, i).z() > min_separation))
            return false;
    return true;
}

struct NewtonResult {
    Eigen::VectorXd x;
    double residual;
};

// Damped Newton on an ordered chain. `f`, `g`, `h` evaluate energy, gradient
// and Hessian; `admissible` rejects steps that reorder ions.
template<class F, class G, class H, class A>
NewtonResult newton(Eigen::VectorXd x, F&& f, G&& g, H&& h, A&& admissible, double gtol,
                    int max_iterations)
{
    double e = f(x);
    Eigen::VectorXd grad = g(x);
    for (int it = 0; it < max_iterations; ++it) {
        double const gmax = grad.cwiseAbs().maxCoeff();
        if (gmax < gtol)
            return {x, gmax};

        Eigen::MatrixXd const hess = h(x);
        Eigen::LDLT<Eigen::MatrixXd> ldlt(hess);
        Eigen::VectorXd step = -ldlt.solve(grad);
        bool const positive = ldlt.info() == Eigen::Success && ldlt.isPositive()
                              && step.allFinite() && step.dot(grad) < 0.0;
        if (!positive) {
            // steepest descent scaled by the largest curvature
            double const scale = std::max(hess.diagonal().cwiseAbs().maxCoeff(),
                                          std::numeric_limits<double>::min());
            step = -grad / scale;
        }

        double const slope = step.dot(grad);
        double alpha = 1.0;
        bool crossed = false;
        bool accepted = false;
        for (int ls = 0; ls < 60; ++ls, alpha *= 0.5) {
            Eigen::VectorXd const trial = x + alpha * step;
            if (!admissible(trial)) {
                crossed = true;
                continue;
            }
            double const et = f(trial);
            bool const armijo = et <= e + 1e-4 * alpha * slope;
            // Near the minimum the energy stalls in rounding; accept steps
            // that still shrink the gradient.
            bool stalled = false;
            if (!armijo && std::abs(et - e) <= 1e-12 * std::abs(e)) {
                stalled = g(trial).cwiseAbs().maxCoeff() < gmax;
            }
            if (armijo || stalled) {
                x = trial;
                e = et;
                accepted = true;
                break;
            }
        }
        if (!accepted) {
            if (crossed)
                throw IonCrossingError("equilibrium search: ions would cross");
            throw NumericalError("equilibrium search: line search failed");
        }
        grad = g(x);
    }
    double const gmax = grad.cwiseAbs().maxCoeff();
    if (gmax < gtol)
        return {x, gmax};
    throw NumericalError("equilibrium search did not converge in "
                         + std::to_string(max_iterations) + " iterations");
}

void require_confined(EnergyModel const& model, Eigen::VectorXd const& x)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(model.hessian(x),
                                                       Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 0.0)
        throw NumericalError("unconfined potential: Hessian not positive definite at the "
                             "stationary point");
}

}  // namespace

std::vector<double> harmonic_chain_positions(std::size_t n)
{
    if (n == 0)
        throw InvalidArgument("chain must contain at least one ion");
    if (n == 1)
        return {0.0};

    auto const m = static_cast<Eigen::Index>(n);
    Eigen::VectorXd u(m);
    double const spacing = 2.0 * std::pow(static_cast<double>(n), -0.4);
    for (Eigen::Index i = 0; i < m; ++i)
        u[i] = (static_cast<double>(i) - 0.5 * static_cast<double>(n - 1)) * spacing;

    auto f = [m](Eigen::VectorXd const& v) {
        double e = v.squaredNorm();
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = i + 1; j < m; ++j)
                e += 2.0 / (v[j] - v[i]);
        return e;
    };
    auto g = [m](Eigen::VectorXd const& v) {
        Eigen::VectorXd r = 2.0 * v;
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = i + 1; j < m; ++j) {
                double const d = v[j] - v[i];
                r[i] += 2.0 / (d * d);
                r[j] -= 2.0 / (d * d);
            }
        return r;
    };
    auto h = [m](Eigen::VectorXd const& v) {
        Eigen::MatrixXd r = 2.0 * Eigen::MatrixXd::Identity(m, m);
        for (Eigen::Index i = 0; i < m; ++i)
            for (Eigen::Index j = i + 1; j < m; ++j) {
                double const d = v[j] - v[i];
                double const k = 4.0 / (d * d * d);
                r(i, i) += k;
                r(j, j) += k;
                r(i, j) -= k;
                r(j, i) -= k;
            }
        return r;
    };
    auto admissible = [m](Eigen::VectorXd const& v) {
        for (Eigen::Index i = 0; i + 1 < m; ++i)
            if (!(v[i + 1] > v[i]))
                return false;
        return true;
    };
    auto const res = newton(u, f, g, h, admissible, 1e-14, 200);
    return {res.x.data(), res.x.data() + m};
}

ChainConfiguration solve_equilibrium(std::vector<IonSpecies> const& species,
                                     Potential const& potential,
                                     std::optional<std::vector<double>> const& axial_guess,
                                     SolverOptions const& options)
{
    AxialPotential const& axial = axial_part(potential);
    EnergyModel const axial_model(species, axial);
    std::size_t const n = species.size();

    double const k2 = axial.kappa2();
    double const l = characteristic_length(species.front(), k2);
    double const fscale = 2.0 * species.front().charge_si() * k2 * l;
    double const gtol = options.tolerance * fscale;

    Eigen::VectorXd z(static_cast<Eigen::Index>(n));
    if (axial_guess) {
        if (axial_guess->size() != n)
            throw InvalidArgument("initial guess length does not match the chain");
        for (std::size_t i = 0; i < n; ++i)
            z[static_cast<Eigen::Index>(i)] = (*axial_guess)[i];
        if (!ordered(axial_model, z))
            throw InvalidArgument("initial guess must list ions in increasing axial order");
    } else {
        // centre where the summed linear force balances the harmonic term
        double push = 0.0;
        for (auto const& s : species) {
            double const pseudo = axial.pseudo_gradient == 0.0
                                      ? 0.0
                                      : axial.pseudo_gradient * axial.pseudo_reference_mass / s.mass;
            push += axial.uniform_field - pseudo;
        }
        double const centre = axial.expansion_origin + push / (2.0 * k2 * static_cast<double>(n));
        auto const u = harmonic_chain_positions(n);
        for (std::size_t i = 0; i < n; ++i)
            z[static_cast<Eigen::Index>(i)] = centre + l * u[i];
    }

    auto admissible = [&](EnergyModel const& m) {
        return [&m](Eigen::VectorXd const& v) { return ordered(m, v); };
    };
    auto run = [&](EnergyModel const& m, Eigen::VectorXd const& x0) {
        return newton(
            x0, [&m](Eigen::VectorXd const& v) { return m.energy(v); },
            [&m](Eigen::VectorXd const& v) { return m.gradient(v); },
            [&m](Eigen::VectorXd const& v) { return m.hessian(v); }, admissible(m), gtol,
            options.max_iterations);
    };

    NewtonResult res = run(axial_model, z);

    ChainConfiguration cfg;
    cfg.species = species;
    cfg.potential = potential;
    cfg.positions.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        cfg.positions[i] = axial_model.position(res.x, i);

    EnergyModel const full(species, potential);
    Eigen::VectorXd x = full.flatten(cfg.positions);
    if (full.dimension() == 3) {
        auto const* trap = std::get_if<TrapModel3D>(&potential);
        Eigen::VectorXd const g3 = full.gradient(x);
        if (trap->has_tensors() && g3.cwiseAbs().maxCoeff() >= gtol) {
            res = run(full, x);
            x = res.x;
            for (std::size_t i = 0; i < n; ++i)
                cfg.positions[i] = full.position(x, i);
        } else {
            res.residual = g3.cwiseAbs().maxCoeff();
        }
    }
    require_confined(full, x);
    cfg.residual_gradient = res.residual;
    return cfg;
}

}  // namespace ionchain
