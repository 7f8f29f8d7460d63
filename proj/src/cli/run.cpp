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

#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "ionchain/cli/commands.hpp"

namespace ionchain::cli {

namespace {

void write_file(std::string const& path, std::string const& content)
{
    std::ofstream f(path, std::ios::binary);
    if (!f || !(f << content))
        throw ConfigError(path + ": cannot write output");
}

}  // namespace

int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Normal modes, anharmonic couplings and calibration of trapped-ion chains."};
    app.name("ionchain");
    std::string command;
    std::string config_path;
    std::string out_path;
    std::vector<std::string> params;
    app.add_option("command", command, "What to compute")
        ->required()
        ->check(CLI::IsMember(command_names()));
    app.add_option("--config", config_path, "JSON run configuration")->required();
    app.add_option("--out", out_path, "Output file (stdout when omitted)");
    app.add_option("--param", params, "Override a config value, dotted.key=value");

    try {
        app.parse(argc, argv);
    } catch (CLI::ParseError const& e) {
        int const code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_config;
    }

    try {
        int const digits = output_precision();
        auto doc = load_json(config_path);
        for (auto const& p : params)
            apply_override(doc, p);
        auto const cfg = parse_config(doc);
        auto const result = run_command(command, cfg, digits);
        for (auto const& w : result.warnings)
            err << "warning: " << w << '\n';
        if (out_path.empty()) {
            out << result.primary;
        } else {
            write_file(out_path, result.primary);
            if (result.json_mirror)
                write_file(out_path + ".json", *result.json_mirror);
        }
        return exit_ok;
    } catch (std::exception const& e) {
        err << "error: " << e.what() << '\n';
        return exit_code(e);
    }
}

}  // namespace ionchain::cli
