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

#include <exception>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ionchain/cli/config.hpp"

namespace ionchain::cli {

/// Exit codes of the command-line tool.
enum ExitCode : int {
    exit_ok = 0,
    exit_internal = 1,
    exit_config = 2,
    exit_numerical = 3,
    exit_resonance = 4,
    exit_bracket = 5,
};

/// Rendered result of one command.
struct Output {
    std::string primary;  // CSV table or aligned matrix
    std::optional<std::string> json_mirror;  // written next to --out as <out>.json
    std::vector<std::string> warnings;  // printed to stderr
};

std::vector<std::string> const& command_names();

/// Significant digits for numeric output: IONCHAIN_PRECISION when set
/// (1 to 17), otherwise 12.
int output_precision();

/// printf("%.*g") with -0 folded to 0.
std::string format_number(double value, int digits);

/// Runs one command on a validated configuration.
Output run_command(std::string const& command, RunConfig const& cfg, int digits);

/// Maps a library exception to the tool's exit code.
int exit_code(std::exception const& e) noexcept;

/// Full command-line entry point; returns the process exit code.
int run_cli(int argc, char const* const* argv, std::ostream& out, std::ostream& err);

}  // namespace ionchain::cli
