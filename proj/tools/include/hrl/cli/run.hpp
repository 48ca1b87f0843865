#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include <nlohmann/json.hpp>

#include "hrl/cli/config.hpp"

namespace hrl::cli {

enum ExitCode : int { exit_pass = 0, exit_violation = 1, exit_invalid_config = 2, exit_numerical = 3 };

/// Report of one command before it is written anywhere.
struct Outcome {
    nlohmann::json report;
    /// Plot-ready table for sweep and verify-3d.
    std::optional<std::string> csv;
    bool pass = false;
};

/// Runs the pipeline named by the config. Throws ConfigError, DomainError,
/// NumericalFailure.
Outcome execute(const RunConfig& config);

struct RunOptions {
    /// Subcommand given on the command line; must match the config.
    std::optional<std::string> command;
    std::optional<std::filesystem::path> out;
    std::optional<std::size_t> threads;
};

/// Loads the config, executes, writes the report (stdout when no output
/// path), the CSV and the run log line. Never throws; returns the exit code.
int run_file(const std::filesystem::path& config_path, const RunOptions& opt, std::ostream& out,
             std::ostream& err);

const char* version();

}  // namespace hrl::cli
