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

#include "ionchain/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <sstream>

#include "ionchain/constants.hpp"

namespace ionchain::cli {

using nlohmann::json;

namespace {

constexpr char const* axis_names = "xyz";

// Rows of plain CSV built with a fixed number format.
class Table {
  public:
    explicit Table(int digits) : digits_(digits) {}

    void comment(std::string const& line) { os_ << "# " << line << '\n'; }

    template<class... T>
    void row(T const&... cells)
    {
        bool first = true;
        ((os_ << (first ? "" : ",") << cell(cells), first = false), ...);
        os_ << '\n';
    }

    void row(std::vector<std::string> const& cells)
    {
        for (std::size_t i = 0; i < cells.size(); ++i)
            os_ << (i ? "," : "") << cells[i];
        os_ << '\n';
    }

    std::string num(double v) const { return format_number(v, digits_); }
    std::string str() const { return os_.str(); }

  private:
    int digits_;
    std::ostringstream os_;

    std::string cell(double v) const { return num(v); }
    std::string cell(std::string const& s) const { return s; }
    std::string cell(char const* s) const { return s; }
    std::string cell(std::size_t v) const { return std::to_string(v); }
    std::string cell(unsigned v) const { return std::to_string(v); }
    std::string cell(int v) const { return std::to_string(v); }
};

void require_chain(RunConfig const& cfg, std::string const& command)
{
    if (cfg.chain.empty())
        throw ConfigError("chain: required by '" + command + "'");
    if (!cfg.potential)
        throw ConfigError("potential: required by '" + command + "'");
}

template<class T>
T const& require(std::optional<T> const& section, std::string const& name,
                 std::string const& command)
{
    if (!section)
        throw ConfigError(name + ": section required by '" + command + "'");
    return *section;
}

std::string contributions_text(Contributions const& c)
{
    std::ostringstream os;
    os << "coulomb=" << c.coulomb << " trap_cubic=" << c.trap_cubic
       << " trap_quartic=" << c.trap_quartic;
    return os.str();
}

std::string resonance_text(Resonance const& r)
{
    std::ostringstream os;
    os << "resonant denominator " << r.kind << " (Z=" << r.Z + 1 << ", alpha="
       << r.alpha + 1 << ", beta=" << r.beta + 1 << "), relative size " << r.relative;
    return os.str();
}

ChiMatrix compute_chi(RunConfig const& cfg, std::string const& command)
{
    require_chain(cfg, command);
    auto const spec = mode_spectrum(solve_equilibrium(cfg.chain, *cfg.potential));
    // checked here so the message carries one-based mode numbers
    auto const hard = detect_resonances(spec.omega, resonance_error_tol);
    if (!hard.empty())
        throw ResonanceError(resonance_text(hard.front()));
    auto const A = derivative_tensors(spec.config, cfg.contributions);
    return chi_matrix(mode_tensors(A, spec), spec, cfg.contributions);
}

// Golden input when given, otherwise computed from the chain.
ChiInput chi_source(RunConfig const& cfg, std::string const& command, Output& out)
{
    if (cfg.chi_input)
        return *cfg.chi_input;
    auto const chi = compute_chi(cfg, command);
    for (auto const& r : chi.warnings)
        out.warnings.push_back(resonance_text(r));
    return {chi.chi, chi.mode_frequencies};
}

std::vector<double> linspace(double a, double b, std::size_t n)
{
    std::vector<double> t(n);
    for (std::size_t i = 0; i < n; ++i)
        t[i] = a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
    return t;
}

// Rounds to the printed precision so the JSON mirror matches the text.
double rounded(double v, int digits)
{
    return std::strtod(format_number(v, digits).c_str(), nullptr);
}

//---------------------------------------------------------------------------//

Output cmd_modes(RunConfig const& cfg, int digits)
{
    require_chain(cfg, "modes");
    auto const spec = mode_spectrum(solve_equilibrium(cfg.chain, *cfg.potential));
    auto const& c = spec.config;
    int const D = c.dimension();
    Table t(digits);

    t.comment("equilibrium positions");
    t.comment("ion,species,x_m,y_m,z_m");
    for (std::size_t i = 0; i < c.positions.size(); ++i)
        t.row(i + 1, c.species[i].label, c.positions[i].x(), c.positions[i].y(),
              c.positions[i].z());

    t.comment("normal modes by descending frequency");
    t.comment("mode,frequency_hz,omega_rad_per_s,sigma_prime_sqrtkg_m");
    for (std::size_t k = 0; k < spec.size(); ++k) {
        auto const e = static_cast<Eigen::Index>(k);
        t.row(k + 1, spec.frequencies[e], spec.omega[e], spec.sigma_prime[e]);
    }

    std::vector<std::string> head{"coordinate", "ion", "species", "axis"};
    for (std::size_t k = 0; k < spec.size(); ++k)
        head.push_back("mode_" + std::to_string(k + 1));
    auto const mode_table = [&](std::string const& title, std::string const& unit,
                                Eigen::MatrixXd const& m) {
        t.comment(title);
        std::string line;
        for (std::size_t h = 0; h < head.size(); ++h)
            line += (h ? "," : "") + head[h] + (h >= 4 ? unit : "");
        t.comment(line);
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            auto const ion = static_cast<std::size_t>(r / D);
            char const axis = D == 1 ? 'z' : axis_names[r % D];
            std::vector<std::string> cells{std::to_string(r + 1), std::to_string(ion + 1),
                                           c.species[ion].label, std::string(1, axis)};
            for (Eigen::Index k = 0; k < m.cols(); ++k)
                cells.push_back(t.num(m(r, k)));
            t.row(cells);
        }
    };
    mode_table("mass-weighted eigenvectors, columns normalized", "", spec.eigenvectors);
    mode_table("ground-state extent per ion and mode", "_m", spec.sigma_ion);
    return {t.str(), std::nullopt, {}};
}

Output cmd_chi(RunConfig const& cfg, int digits)
{
    auto const chi = compute_chi(cfg, "chi");
    Output out;
    for (auto const& r : chi.warnings)
        out.warnings.push_back(resonance_text(r));

    // round-off residue of exact cancellations is printed as 0
    double const floor = 1e-12 * chi.chi.cwiseAbs().maxCoeff();
    Eigen::MatrixXd const shown = (chi.chi.array().abs() <= floor).select(0.0, chi.chi);

    auto const n = shown.rows();
    std::vector<std::vector<std::string>> cells(static_cast<std::size_t>(n));
    std::size_t width = 0;
    for (Eigen::Index r = 0; r < n; ++r)
        for (Eigen::Index c = 0; c < n; ++c) {
            cells[static_cast<std::size_t>(r)].push_back(format_number(shown(r, c), digits));
            width = std::max(width, cells[static_cast<std::size_t>(r)].back().size());
        }

    std::ostringstream os;
    os << "# chi matrix in Hz per quantum: row Z, column alpha, modes by descending frequency\n";
    os << "# contributions: " << contributions_text(chi.provenance) << '\n';
    os << "# mode,frequency_hz\n";
    for (Eigen::Index k = 0; k < n; ++k)
        os << "# " << k + 1 << ',' << format_number(chi.mode_frequencies[k], digits) << '\n';
    for (auto const& row : cells) {
        for (std::size_t c = 0; c < row.size(); ++c)
            os << (c ? "  " : "") << std::string(width - row[c].size(), ' ') << row[c];
        os << '\n';
    }
    out.primary = os.str();

    json j;
    j["version"] = config_version;
    j["units"] = "Hz per quantum";
    j["mode_frequencies_hz"] = json::array();
    for (Eigen::Index k = 0; k < n; ++k)
        j["mode_frequencies_hz"].push_back(rounded(chi.mode_frequencies[k], digits));
    j["chi_hz"] = json::array();
    for (Eigen::Index r = 0; r < n; ++r) {
        json row = json::array();
        for (Eigen::Index c = 0; c < n; ++c)
            row.push_back(rounded(shown(r, c), digits));
        j["chi_hz"].push_back(row);
    }
    j["contributions"] = {{"coulomb", chi.provenance.coulomb},
                          {"trap_cubic", chi.provenance.trap_cubic},
                          {"trap_quartic", chi.provenance.trap_quartic}};
    j["warnings"] = out.warnings;
    out.json_mirror = j.dump(2) + "\n";
    return out;
}

Output cmd_coherence(RunConfig const& cfg, int digits)
{
    auto const& s = require(cfg.coherence, "coherence", "coherence");
    auto const& env = require(cfg.environment, "environment", "coherence");
    Output out;
    auto const src = chi_source(cfg, "coherence", out);
    auto const times = linspace(s.t_start, s.t_stop, s.points);

    std::vector<double> c(times.size());
    for (std::size_t i = 0; i < times.size(); ++i)
        c[i] = fock_coherence(src.chi, src.frequencies_hz, s.mode, s.n_upper, env, times[i]);

    Table t(digits);
    t.comment("coherence of (|0> + |n>)/sqrt 2 in mode " + std::to_string(s.mode + 1)
              + ", n = " + std::to_string(s.n_upper));
    std::string half = "none";
    for (std::size_t i = 1; i < c.size(); ++i)
        if (c[i - 1] >= 0.5 && c[i] < 0.5) {
            double const f = (c[i - 1] - 0.5) / (c[i - 1] - c[i]);
            half = t.num(times[i - 1] + f * (times[i] - times[i - 1]));
            break;
        }
    t.comment("first crossing of 1/2 (s): " + half);
    t.comment("t_s,coherence");
    for (std::size_t i = 0; i < times.size(); ++i)
        t.row(times[i], c[i]);
    out.primary = t.str();
    return out;
}

Output cmd_gate(RunConfig const& cfg, int digits)
{
    auto const& s = require(cfg.gate, "gate", "gate");
    auto const& env = require(cfg.environment, "environment", "gate");
    Output out;
    auto const src = chi_source(cfg, "gate", out);
    Table t(digits);
    t.comment("thermal infidelity of a phase gate on mode " + std::to_string(s.mode + 1));
    t.comment("detuning_hz,infidelity");
    for (double d : s.detunings_hz)
        t.row(d, thermal_gate_infidelity(src.chi, src.frequencies_hz, s.mode,
                                         2.0 * constants::pi * d, env));
    out.primary = t.str();
    return out;
}

Output cmd_scan(RunConfig const& cfg, int digits)
{
    auto const& s = require(cfg.scan, "scan", "scan");
    if (!cfg.potential)
        throw ConfigError("potential: required by 'scan'");
    auto const& pot = axial_part(*cfg.potential);
    auto const& sp = cfg.find_species(s.species);
    auto const scan = com_frequency_scan(pot, sp, s.n_min, s.n_max);

    Table t(digits);
    t.comment("in-phase axial mode of " + s.species + " chains");
    t.comment("slope_hz_per_ion: " + t.num(scan.slope));
    t.comment("intercept_hz: " + t.num(scan.intercept));
    t.comment("r_squared: " + t.num(scan.r_squared));
    t.comment("n,f_com_hz,length_m");
    for (auto const& [n, f] : scan.points) {
        double len = std::nan("");
        if (n >= 2)
            len = chain_length(solve_equilibrium(std::vector<IonSpecies>(n, sp), pot));
        t.row(n, f, len);
    }
    return {t.str(), std::nullopt, {}};
}

PotentialFamily family_of(RunConfig const& cfg, NullSection const& s, std::string const& command)
{
    if (!cfg.potential)
        throw ConfigError("potential: required by '" + command + "'");
    PotentialFamily f;
    f.base = axial_part(*cfg.potential);
    f.dkappa = s.dkappa;
    f.dfield = s.dfield;
    return f;
}

Output cmd_null(RunConfig const& cfg, int digits)
{
    auto const& s = require(cfg.null, "null", "null");
    auto const family = family_of(cfg, s, "null");
    auto const r = null_parameter(family, cfg.find_species(s.species_a),
                                  cfg.find_species(s.species_b), s.label, s.bracket);
    Table t(digits);
    t.comment("null of the " + to_string(s.label) + " order shift " + s.species_a + s.species_b
              + " - " + s.species_b + s.species_a);
    t.comment("p,delta_hz,other_delta_hz,iterations");
    t.row(r.p, r.delta, r.other_delta, r.iterations);
    return {t.str(), std::nullopt, {}};
}

Output cmd_gradient(RunConfig const& cfg, int digits)
{
    auto const& s = require(cfg.null, "null", "gradient");
    auto const& g = require(cfg.gradient, "gradient", "gradient");
    auto const family = family_of(cfg, s, "gradient");
    auto const r = infer_pseudo_gradient(family, cfg.find_species(s.species_a),
                                         cfg.find_species(s.species_b), g.measured_hz,
                                         g.bracket, s.bracket);
    Table t(digits);
    t.comment("pseudopotential gradient reproducing the measured out-of-phase order shift");
    t.comment("gradient_ev_per_m,null_p,residual_hz");
    t.row(r.gradient, r.null_p, r.residual);
    return {t.str(), std::nullopt, {}};
}

Output cmd_sensitivity(RunConfig const& cfg, int digits)
{
    auto const& s = require(cfg.sensitivity, "sensitivity", "sensitivity");
    require_chain(cfg, "sensitivity");
    double const shift = field_sensitivity(axial_part(*cfg.potential), cfg.chain, s.field, s.mode);
    Table t(digits);
    t.comment("fractional axial frequency change under an added uniform field");
    t.comment("field_v_per_m,mode,fractional_shift");
    t.row(s.field, s.mode + 1, shift);
    return {t.str(), std::nullopt, {}};
}

Output cmd_flop(RunConfig const& cfg, int digits)
{
    auto const& s = require(cfg.flop, "flop", "flop");
    auto const times = linspace(0.0, s.t_stop, s.points);
    auto const curve = sideband_flop(s.params, times);
    Table t(digits);
    t.comment("blue-sideband excitation of two ions sharing one mode");
    t.comment("initial levels kept: " + std::to_string(curve.cutoff + 1));
    t.comment("t_s,excitation,norm");
    for (std::size_t i = 0; i < times.size(); ++i)
        t.row(curve.t[i], curve.A[i], curve.norm[i]);
    return {t.str(), std::nullopt, {}};
}

using Handler = std::function<Output(RunConfig const&, int)>;

std::map<std::string, Handler> const& handlers()
{
    static std::map<std::string, Handler> const table{
        {"modes", cmd_modes},     {"chi", cmd_chi},   {"coherence", cmd_coherence},
        {"gate", cmd_gate},       {"scan", cmd_scan}, {"null", cmd_null},
        {"gradient", cmd_gradient}, {"sensitivity", cmd_sensitivity}, {"flop", cmd_flop},
    };
    return table;
}

}  // namespace

std::vector<std::string> const& command_names()
{
    static std::vector<std::string> const names = [] {
        std::vector<std::string> n;
        for (auto const& [name, h] : handlers())
            n.push_back(name);
        return n;
    }();
    return names;
}

int output_precision()
{
    char const* env = std::getenv("IONCHAIN_PRECISION");
    if (!env || !*env)
        return 12;
    char* end = nullptr;
    long const d = std::strtol(env, &end, 10);
    if (*end != '\0' || d < 1 || d > 17)
        throw ConfigError("IONCHAIN_PRECISION: expected an integer from 1 to 17");
    return static_cast<int>(d);
}

std::string format_number(double value, int digits)
{
    if (value == 0.0)
        value = 0.0;  // drops the sign of -0
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, value);
    return buf;
}

Output run_command(std::string const& command, RunConfig const& cfg, int digits)
{
    auto it = handlers().find(command);
    if (it == handlers().end())
        throw ConfigError("unknown command '" + command + "'");
    return it->second(cfg, digits);
}

int exit_code(std::exception const& e) noexcept
{
    if (dynamic_cast<ResonanceError const*>(&e))
        return exit_resonance;
    if (dynamic_cast<BracketError const*>(&e))
        return exit_bracket;
    if (dynamic_cast<NumericalError const*>(&e))
        return exit_numerical;
    if (dynamic_cast<InvalidArgument const*>(&e) || dynamic_cast<json::exception const*>(&e))
        return exit_config;
    return exit_internal;
}

}  // namespace ionchain::cli
