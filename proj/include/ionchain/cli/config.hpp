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

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Core>
#include <json.hpp>

#include "ionchain/anharmonic.hpp"
#include "ionchain/calibration.hpp"
#include "ionchain/dynamics.hpp"
#include "ionchain/errors.hpp"
#include "ionchain/statics.hpp"

namespace ionchain::cli {

/// Malformed or inconsistent configuration. The message starts with the
/// offending field path.
class ConfigError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

inline constexpr int config_version = 1;

/// Precomputed shift matrix supplied instead of a chain.
struct ChiInput {
    Eigen::MatrixXd chi;  // Hz per quantum
    Eigen::VectorXd frequencies_hz;
};

struct CoherenceSection {
    std::size_t mode = 0;  // zero-based
    unsigned n_upper = 1;
    double t_start = 0.0;  // s
    double t_stop = 0.5;  // s
    std::size_t points = 501;
};

struct GateSection {
    std::size_t mode = 0;
    std::vector<double> detunings_hz;
};

struct ScanSection {
    std::string species;
    std::size_t n_min = 1;
    std::size_t n_max = 8;
};

struct NullSection {
    std::string species_a;
    std::string species_b;
    ModeLabel label = ModeLabel::in_phase;
    std::map<int, double> dkappa;  // V m^-n per unit p
    double dfield = 0.0;  // V/m per unit p
    std::pair<double, double> bracket{0.0, 1.0};
};

struct GradientSection {
    double measured_hz = 0.0;
    std::pair<double, double> bracket{-1.0, 1.0};  // eV/m
};

struct SensitivitySection {
    double field = 0.0;  // V/m
    std::size_t mode = 0;
};

struct FlopSection {
    SidebandParams params;
    double t_stop = 1e-3;  // s
    std::size_t points = 201;
};

struct RunConfig {
    std::map<std::string, IonSpecies> species;
    std::vector<IonSpecies> chain;
    std::optional<Potential> potential;
    std::optional<ThermalEnvironment> environment;
    Contributions contributions;
    std::optional<ChiInput> chi_input;

    std::optional<CoherenceSection> coherence;
    std::optional<GateSection> gate;
    std::optional<ScanSection> scan;
    std::optional<NullSection> null;
    std::optional<GradientSection> gradient;
    std::optional<SensitivitySection> sensitivity;
    std::optional<FlopSection> flop;

    IonSpecies const& find_species(std::string const& label) const;
};

/// Reads a JSON document. Throws ConfigError on I/O or syntax errors.
nlohmann::json load_json(std::string const& path);

/// Applies one `dotted.path=value` override. The value is parsed as JSON when
/// possible and taken as a string otherwise. Missing objects are created;
/// numeric segments index arrays.
void apply_override(nlohmann::json& doc, std::string const& assignment);

/// Validates the whole document and converts units. Unknown keys, wrong types
/// and missing required fields throw ConfigError.
RunConfig parse_config(nlohmann::json const& doc);

}  // namespace ionchain::cli
