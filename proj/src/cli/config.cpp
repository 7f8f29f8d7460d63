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

#include "ionchain/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <string_view>
#include <tuple>

#include "ionchain/constants.hpp"

namespace ionchain::cli {

using nlohmann::json;

namespace {

constexpr double mhz = 1e6;
constexpr double khz = 1e3;
constexpr double ms = 1e-3;
constexpr double um = 1e-6;

[[noreturn]] void fail(std::string const& path, std::string const& what)
{
    throw ConfigError(path + ": " + what);
}

std::string child(std::string const& path, std::string const& key)
{
    return path.empty() ? key : path + "." + key;
}

std::string child(std::string const& path, std::size_t index)
{
    return path + "[" + std::to_string(index) + "]";
}

void require_object(json const& j, std::string const& path)
{
    if (!j.is_object())
        fail(path.empty() ? "<root>" : path, "expected an object");
}

void check_keys(json const& obj, std::string const& path,
                std::initializer_list<std::string_view> allowed)
{
    require_object(obj, path);
    for (auto const& [key, value] : obj.items()) {
        bool known = false;
        for (auto a : allowed)
            known = known || key == a;
        if (!known)
            fail(child(path, key), "unknown key");
    }
}

json const* find(json const& obj, std::string const& key)
{
    auto it = obj.find(key);
    return it == obj.end() ? nullptr : &*it;
}

json const& need(json const& obj, std::string const& path, std::string const& key)
{
    auto const* v = find(obj, key);
    if (!v)
        fail(child(path, key), "required field missing");
    return *v;
}

double number(json const& v, std::string const& path)
{
    if (!v.is_number())
        fail(path, "expected a number");
    double const x = v.get<double>();
    if (!std::isfinite(x))
        fail(path, "expected a finite number");
    return x;
}

double positive(json const& v, std::string const& path)
{
    double const x = number(v, path);
    if (!(x > 0.0))
        fail(path, "must be positive");
    return x;
}

std::size_t count(json const& v, std::string const& path, std::size_t min = 0)
{
    if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min))
        fail(path, "expected an integer >= " + std::to_string(min));
    return static_cast<std::size_t>(v.get<long long>());
}

// One-based mode index in the file, zero-based in memory.
std::size_t mode_index(json const& v, std::string const& path)
{
    return count(v, path, 1) - 1;
}

std::string text(json const& v, std::string const& path)
{
    if (!v.is_string())
        fail(path, "expected a string");
    return v.get<std::string>();
}

bool boolean(json const& v, std::string const& path)
{
    if (!v.is_boolean())
        fail(path, "expected true or false");
    return v.get<bool>();
}

std::vector<double> numbers(json const& v, std::string const& path,
                            std::optional<std::size_t> length = std::nullopt)
{
    if (!v.is_array())
        fail(path, "expected an array of numbers");
    if (length && v.size() != *length)
        fail(path, "expected " + std::to_string(*length) + " entries, got "
                       + std::to_string(v.size()));
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i)
        out.push_back(number(v[i], child(path, i)));
    return out;
}

std::pair<double, double> interval(json const& v, std::string const& path)
{
    auto const xs = numbers(v, path, 2);
    if (!(xs[0] < xs[1]))
        fail(path, "expected [lo, hi] with lo < hi");
    return {xs[0], xs[1]};
}

// {"3": value, ...} keyed by polynomial order.
std::map<int, double> by_order(json const& v, std::string const& path)
{
    require_object(v, path);
    std::map<int, double> out;
    for (auto const& [key, value] : v.items()) {
        std::string const p = child(path, key);
        int order = 0;
        try {
            std::size_t used = 0;
            order = std::stoi(key, &used);
            if (used != key.size())
                throw std::invalid_argument(key);
        } catch (std::exception const&) {
            fail(p, "key must be an integer order");
        }
        if (order < 3)
            fail(p, "order must be >= 3");
        out[order] = number(value, p);
    }
    return out;
}

IonSpecies const& species_ref(RunConfig const& cfg, json const& v, std::string const& path)
{
    auto const label = text(v, path);
    auto it = cfg.species.find(label);
    if (it == cfg.species.end())
        fail(path, "unknown species '" + label + "'");
    return it->second;
}

AxialPotential parse_axial(json const& j, std::string const& path, RunConfig const& cfg)
{
    double kappa2 = 0.0;
    auto const* k2 = find(j, "kappa2_v_per_m2");
    auto const* fax = find(j, "axial_frequency_mhz");
    if ((k2 != nullptr) == (fax != nullptr))
        fail(path, "give exactly one of kappa2_v_per_m2 and axial_frequency_mhz");
    if (k2) {
        kappa2 = positive(*k2, child(path, "kappa2_v_per_m2"));
    } else {
        IonSpecies const* ref = nullptr;
        if (auto const* r = find(j, "frequency_reference"))
            ref = &species_ref(cfg, *r, child(path, "frequency_reference"));
        else if (!cfg.chain.empty())
            ref = &cfg.chain.front();
        else
            fail(child(path, "frequency_reference"), "required when the chain is empty");
        kappa2 = kappa2_for_frequency(*ref, positive(*fax, child(path, "axial_frequency_mhz")) * mhz);
    }

    std::map<int, double> lambdas;
    if (auto const* v = find(j, "lambda_um"))
        for (auto const& [order, value] : by_order(*v, child(path, "lambda_um"))) {
            if (value == 0.0)
                fail(child(child(path, "lambda_um"), std::to_string(order)), "must be nonzero");
            lambdas[order] = value * um;
        }
    AxialPotential pot = axial_from_lambdas(kappa2, lambdas);
    if (auto const* v = find(j, "kappa_si"))
        for (auto const& [order, value] : by_order(*v, child(path, "kappa_si"))) {
            if (lambdas.count(order))
                fail(child(child(path, "kappa_si"), std::to_string(order)),
                     "order also given in lambda_um");
            pot.kappa[order] = value;
        }
    if (auto const* v = find(j, "uniform_field_v_per_m"))
        pot.uniform_field = number(*v, child(path, "uniform_field_v_per_m"));
    if (auto const* v = find(j, "expansion_origin_um"))
        pot.expansion_origin = number(*v, child(path, "expansion_origin_um")) * um;
    if (auto const* v = find(j, "pseudo_gradient_ev_per_m"))
        pot.pseudo_gradient = number(*v, child(path, "pseudo_gradient_ev_per_m"));
    if (auto const* v = find(j, "pseudo_reference"))
        pot.pseudo_reference_mass = species_ref(cfg, *v, child(path, "pseudo_reference")).mass;
    else if (pot.pseudo_gradient != 0.0)
        fail(child(path, "pseudo_reference"), "required with pseudo_gradient_ev_per_m");
    return pot;
}

TrapModel3D parse_radial(json const& j, std::string const& path, AxialPotential axial,
                         RunConfig const& cfg)
{
    check_keys(j, path, {"frequencies_mhz", "reference", "mass_scaling", "trap_cubic_v_per_m3",
                         "trap_quartic_v_per_m4"});
    auto const f = numbers(need(j, path, "frequencies_mhz"), child(path, "frequencies_mhz"), 2);
    IonSpecies const* ref = nullptr;
    if (auto const* r = find(j, "reference"))
        ref = &species_ref(cfg, *r, child(path, "reference"));
    else if (!cfg.chain.empty())
        ref = &cfg.chain.front();
    else
        fail(child(path, "reference"), "required when the chain is empty");

    std::optional<Tensor3> cubic;
    if (auto const* v = find(j, "trap_cubic_v_per_m3")) {
        cubic = Tensor3(3);
        cubic->data() = numbers(*v, child(path, "trap_cubic_v_per_m3"), 27);
    }
    std::optional<Tensor4> quartic;
    if (auto const* v = find(j, "trap_quartic_v_per_m4")) {
        quartic = Tensor4(3);
        quartic->data() = numbers(*v, child(path, "trap_quartic_v_per_m4"), 81);
    }
    TrapModel3D trap = trap3d_from_frequencies(*ref, {f[0] * mhz, f[1] * mhz}, std::move(axial),
                                               cubic, quartic);
    if (auto const* v = find(j, "mass_scaling"))
        trap.radial_mass_scaling = boolean(*v, child(path, "mass_scaling"));
    return trap;
}

Potential parse_potential(json const& j, RunConfig const& cfg)
{
    std::string const path = "potential";
    check_keys(j, path, {"kappa2_v_per_m2", "axial_frequency_mhz", "frequency_reference",
                         "lambda_um", "kappa_si", "uniform_field_v_per_m", "expansion_origin_um",
                         "pseudo_gradient_ev_per_m", "pseudo_reference", "radial"});
    AxialPotential axial = parse_axial(j, path, cfg);
    try {
        axial.validate();
        if (auto const* r = find(j, "radial")) {
            TrapModel3D trap = parse_radial(*r, child(path, "radial"), std::move(axial), cfg);
            trap.validate();
            return trap;
        }
    } catch (ConfigError const&) {
        throw;
    } catch (InvalidArgument const& e) {
        fail(path, e.what());
    }
    return axial;
}

ThermalEnvironment parse_environment(json const& j)
{
    std::string const path = "environment";
    check_keys(j, path, {"temperature_mk", "nbar"});
    auto const* t = find(j, "temperature_mk");
    auto const* n = find(j, "nbar");
    if ((t != nullptr) == (n != nullptr))
        fail(path, "give exactly one of temperature_mk and nbar");
    if (t) {
        double const mk = number(*t, child(path, "temperature_mk"));
        if (mk < 0.0)
            fail(child(path, "temperature_mk"), "must be non-negative");
        return ThermalEnvironment::doppler(mk * 1e-3);
    }
    auto const list = numbers(*n, child(path, "nbar"));
    for (std::size_t i = 0; i < list.size(); ++i)
        if (list[i] < 0.0)
            fail(child(child(path, "nbar"), i), "must be non-negative");
    return ThermalEnvironment::explicit_nbar(list);
}

ChiInput parse_chi_input(json const& j)
{
    std::string const path = "chi_input";
    check_keys(j, path, {"matrix_hz", "frequencies_mhz"});
    auto const f = numbers(need(j, path, "frequencies_mhz"), child(path, "frequencies_mhz"));
    if (f.empty())
        fail(child(path, "frequencies_mhz"), "must not be empty");
    auto const& m = need(j, path, "matrix_hz");
    std::string const mp = child(path, "matrix_hz");
    if (!m.is_array() || m.size() != f.size())
        fail(mp, "expected " + std::to_string(f.size()) + " rows");
    ChiInput in;
    auto const n = static_cast<Eigen::Index>(f.size());
    in.chi.resize(n, n);
    in.frequencies_hz.resize(n);
    for (Eigen::Index r = 0; r < n; ++r) {
        auto const row = numbers(m[static_cast<std::size_t>(r)], child(mp, static_cast<std::size_t>(r)), f.size());
        for (Eigen::Index c = 0; c < n; ++c)
            in.chi(r, c) = row[static_cast<std::size_t>(c)];
        if (!(f[static_cast<std::size_t>(r)] > 0.0))
            fail(child(child(path, "frequencies_mhz"), static_cast<std::size_t>(r)), "must be positive");
        in.frequencies_hz[r] = f[static_cast<std::size_t>(r)] * mhz;
    }
    return in;
}

std::pair<std::string, std::string> pair_of(json const& v, std::string const& path,
                                            RunConfig const& cfg)
{
    if (!v.is_array() || v.size() != 2)
        fail(path, "expected two species labels");
    return {species_ref(cfg, v[0], child(path, 0)).label,
            species_ref(cfg, v[1], child(path, 1)).label};
}

}  // namespace

IonSpecies const& RunConfig::find_species(std::string const& label) const
{
    auto it = species.find(label);
    if (it == species.end())
        throw ConfigError("species: unknown label '" + label + "'");
    return it->second;
}

json load_json(std::string const& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError(path + ": cannot open file");
    try {
        return json::parse(in);
    } catch (json::parse_error const& e) {
        throw ConfigError(path + ": " + e.what());
    }
}

void apply_override(json& doc, std::string const& assignment)
{
    auto const eq = assignment.find('=');
    if (eq == std::string::npos || eq == 0)
        throw ConfigError("--param '" + assignment + "': expected key=value");
    std::string const key = assignment.substr(0, eq);
    std::string const raw = assignment.substr(eq + 1);

    json value;
    try {
        value = json::parse(raw);
    } catch (json::parse_error const&) {
        value = raw;
    }

    json* node = &doc;
    std::size_t start = 0;
    std::string path;
    while (true) {
        auto const dot = key.find('.', start);
        std::string const seg = key.substr(start, dot == std::string::npos ? dot : dot - start);
        if (seg.empty())
            throw ConfigError("--param '" + assignment + "': empty path segment");
        path = child(path, seg);
        bool const last = dot == std::string::npos;
        if (node->is_array()) {
            std::size_t idx = 0;
            try {
                idx = static_cast<std::size_t>(std::stoul(seg));
            } catch (std::exception const&) {
                throw ConfigError(path + ": array index expected");
            }
            if (idx >= node->size())
                throw ConfigError(path + ": array index out of range");
            node = &(*node)[idx];
        } else {
            if (node->is_null())
                *node = json::object();
            if (!node->is_object())
                throw ConfigError(path + ": cannot descend into a scalar");
            node = &(*node)[seg];
        }
        if (last) {
            *node = value;
            return;
        }
        start = dot + 1;
    }
}

RunConfig parse_config(json const& doc)
{
    check_keys(doc, "", {"version", "species", "chain", "potential", "environment",
                         "contributions", "chi_input", "coherence", "gate", "scan", "null",
                         "gradient", "sensitivity", "flop"});
    auto const& version = need(doc, "", "version");
    if (!version.is_number_integer() || version.get<int>() != config_version)
        fail("version", "unsupported version, expected " + std::to_string(config_version));

    RunConfig cfg;
    if (auto const* s = find(doc, "species")) {
        require_object(*s, "species");
        for (auto const& [label, entry] : s->items()) {
            std::string const p = child("species", label);
            check_keys(entry, p, {"mass_u", "charge"});
            double const mass = positive(need(entry, p, "mass_u"), child(p, "mass_u"));
            int charge = 1;
            if (auto const* q = find(entry, "charge")) {
                if (!q->is_number_integer() || q->get<int>() == 0)
                    fail(child(p, "charge"), "expected a nonzero integer");
                charge = q->get<int>();
            }
            cfg.species.emplace(label, make_species(label, mass, charge));
        }
    }
    if (auto const* c = find(doc, "chain")) {
        if (!c->is_array())
            fail("chain", "expected an array of species labels");
        for (std::size_t i = 0; i < c->size(); ++i)
            cfg.chain.push_back(species_ref(cfg, (*c)[i], child("chain", i)));
    }
    if (auto const* p = find(doc, "potential"))
        cfg.potential = parse_potential(*p, cfg);
    if (auto const* e = find(doc, "environment"))
        cfg.environment = parse_environment(*e);
    if (auto const* c = find(doc, "contributions")) {
        check_keys(*c, "contributions", {"coulomb", "trap_cubic", "trap_quartic"});
        if (auto const* v = find(*c, "coulomb"))
            cfg.contributions.coulomb = boolean(*v, "contributions.coulomb");
        if (auto const* v = find(*c, "trap_cubic"))
            cfg.contributions.trap_cubic = boolean(*v, "contributions.trap_cubic");
        if (auto const* v = find(*c, "trap_quartic"))
            cfg.contributions.trap_quartic = boolean(*v, "contributions.trap_quartic");
    }
    if (auto const* c = find(doc, "chi_input"))
        cfg.chi_input = parse_chi_input(*c);

    if (auto const* j = find(doc, "coherence")) {
        std::string const p = "coherence";
        check_keys(*j, p, {"mode", "n_upper", "t_start_ms", "t_stop_ms", "points"});
        CoherenceSection s;
        s.mode = mode_index(need(*j, p, "mode"), child(p, "mode"));
        if (auto const* v = find(*j, "n_upper"))
            s.n_upper = static_cast<unsigned>(count(*v, child(p, "n_upper"), 1));
        if (auto const* v = find(*j, "t_start_ms"))
            s.t_start = number(*v, child(p, "t_start_ms")) * ms;
        if (auto const* v = find(*j, "t_stop_ms"))
            s.t_stop = number(*v, child(p, "t_stop_ms")) * ms;
        if (auto const* v = find(*j, "points"))
            s.points = count(*v, child(p, "points"), 2);
        if (!(s.t_start >= 0.0 && s.t_stop > s.t_start))
            fail(p, "need 0 <= t_start_ms < t_stop_ms");
        cfg.coherence = s;
    }
    if (auto const* j = find(doc, "gate")) {
        std::string const p = "gate";
        check_keys(*j, p, {"mode", "detuning_khz"});
        GateSection s;
        s.mode = mode_index(need(*j, p, "mode"), child(p, "mode"));
        auto const d = numbers(need(*j, p, "detuning_khz"), child(p, "detuning_khz"));
        if (d.empty())
            fail(child(p, "detuning_khz"), "must not be empty");
        for (std::size_t i = 0; i < d.size(); ++i) {
            if (d[i] == 0.0)
                fail(child(child(p, "detuning_khz"), i), "must be nonzero");
            s.detunings_hz.push_back(d[i] * khz);
        }
        cfg.gate = s;
    }
    if (auto const* j = find(doc, "scan")) {
        std::string const p = "scan";
        check_keys(*j, p, {"species", "n_min", "n_max"});
        ScanSection s;
        s.species = species_ref(cfg, need(*j, p, "species"), child(p, "species")).label;
        if (auto const* v = find(*j, "n_min"))
            s.n_min = count(*v, child(p, "n_min"), 1);
        if (auto const* v = find(*j, "n_max"))
            s.n_max = count(*v, child(p, "n_max"), 1);
        if (s.n_max < s.n_min)
            fail(p, "need n_min <= n_max");
        cfg.scan = s;
    }
    if (auto const* j = find(doc, "null")) {
        std::string const p = "null";
        check_keys(*j, p, {"pair", "label", "dkappa_si", "dfield_v_per_m", "bracket"});
        NullSection s;
        std::tie(s.species_a, s.species_b) = pair_of(need(*j, p, "pair"), child(p, "pair"), cfg);
        if (auto const* v = find(*j, "label")) {
            try {
                s.label = parse_mode_label(text(*v, child(p, "label")));
            } catch (ConfigError const&) {
                throw;
            } catch (InvalidArgument const& e) {
                fail(child(p, "label"), e.what());
            }
        }
        if (auto const* v = find(*j, "dkappa_si"))
            s.dkappa = by_order(*v, child(p, "dkappa_si"));
        if (auto const* v = find(*j, "dfield_v_per_m"))
            s.dfield = number(*v, child(p, "dfield_v_per_m"));
        if (s.dkappa.empty() && s.dfield == 0.0)
            fail(p, "the family needs dkappa_si or dfield_v_per_m");
        s.bracket = interval(need(*j, p, "bracket"), child(p, "bracket"));
        cfg.null = s;
    }
    if (auto const* j = find(doc, "gradient")) {
        std::string const p = "gradient";
        check_keys(*j, p, {"measured_khz", "bracket_ev_per_m"});
        GradientSection s;
        s.measured_hz = number(need(*j, p, "measured_khz"), child(p, "measured_khz")) * khz;
        s.bracket = interval(need(*j, p, "bracket_ev_per_m"), child(p, "bracket_ev_per_m"));
        cfg.gradient = s;
    }
    if (auto const* j = find(doc, "sensitivity")) {
        std::string const p = "sensitivity";
        check_keys(*j, p, {"field_v_per_m", "mode"});
        SensitivitySection s;
        s.field = number(need(*j, p, "field_v_per_m"), child(p, "field_v_per_m"));
        if (auto const* v = find(*j, "mode"))
            s.mode = mode_index(*v, child(p, "mode"));
        cfg.sensitivity = s;
    }
    if (auto const* j = find(doc, "flop")) {
        std::string const p = "flop";
        check_keys(*j, p, {"eta", "rabi_khz", "decay_time_ms", "fock", "nbar", "cutoff",
                           "t_stop_ms", "points"});
        FlopSection s;
        auto const eta = numbers(need(*j, p, "eta"), child(p, "eta"), 2);
        if (eta[0] < 0.0 || eta[1] < 0.0)
            fail(child(p, "eta"), "must be non-negative");
        s.params.eta1 = eta[0];
        s.params.eta2 = eta[1];
        s.params.Omega0 = 2.0 * constants::pi * positive(need(*j, p, "rabi_khz"),
                                                          child(p, "rabi_khz")) * khz;
        if (auto const* v = find(*j, "decay_time_ms"))
            s.params.decay_time = positive(*v, child(p, "decay_time_ms")) * ms;
        auto const* fock = find(*j, "fock");
        auto const* nbar = find(*j, "nbar");
        if ((fock != nullptr) == (nbar != nullptr))
            fail(p, "give exactly one of fock and nbar");
        if (fock)
            s.params.fock = static_cast<unsigned>(count(*fock, child(p, "fock")));
        else {
            s.params.nbar = number(*nbar, child(p, "nbar"));
            if (s.params.nbar < 0.0)
                fail(child(p, "nbar"), "must be non-negative");
        }
        if (auto const* v = find(*j, "cutoff"))
            s.params.cutoff = static_cast<unsigned>(count(*v, child(p, "cutoff")));
        s.t_stop = positive(need(*j, p, "t_stop_ms"), child(p, "t_stop_ms")) * ms;
        if (auto const* v = find(*j, "points"))
            s.points = count(*v, child(p, "points"), 2);
        cfg.flop = s;
    }
    return cfg;
}

}  // namespace ionchain::cli
