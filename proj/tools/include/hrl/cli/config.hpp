#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "hrl/discretize.hpp"
#include "hrl/halfline.hpp"
#include "hrl/potentials.hpp"

namespace hrl::cli {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Command {
    verify_halfline,
    verify_3d,
    partition,
    interval_constants,
    hardy_constant,
    identity_check,
    sweep,
    sobolev,
};

const char* to_string(Command c);
Command parse_command(const std::string& name);
const std::vector<std::string>& command_names();

struct Tolerances {
    double eigen = 1e-10;
    double partition = 1e-12;
    double identity = 1e-6;
};

/// One JSON schema for every command, discriminated by "command".
struct RunConfig {
    Command command = Command::verify_halfline;
    nlohmann::json raw;
    /// sha256 of the config bytes as read.
    std::string sha256;
    std::filesystem::path base_dir;

    FormSpec form = FormSpec::bilaplacian_hardy(critical_hardy());
    double nu = 0.0;
    std::optional<double> gamma;
    std::vector<double> gammas;
    MeshOptions mesh;
    std::optional<Potential> potential;
    nlohmann::json potential_json;
    std::optional<double> theoretical_C;
    Tolerances tol;
    std::optional<std::size_t> threads;
    std::optional<std::filesystem::path> output;
    std::optional<std::filesystem::path> csv;
    std::optional<std::filesystem::path> run_log;
    bool report_timing = false;

    /// Keys below the top level that a command reads itself.
    const nlohmann::json& at(const std::string& key) const;
    bool has(const std::string& key) const { return raw.contains(key); }
    double number(const std::string& key, double fallback) const;
    double number(const std::string& key) const;
    std::size_t count(const std::string& key, std::size_t fallback) const;
};

/// Parses and validates; relative paths resolve against base_dir.
RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
/// Reads the file, hashes its bytes and parses it.
RunConfig load_config(const std::filesystem::path& path);

std::string sha256_hex(const std::string& bytes);

}  // namespace hrl::cli
