#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace hrl::cli {

struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Indented JSON with sorted keys and every float printed with %.17g.
/// Non-finite floats become null.
std::string canonical_json(const nlohmann::json& j);

std::string format_double(double x);

/// Header plus rows; cells are written verbatim.
std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows);

/// Throws IoError when the file cannot be written.
void write_file(const std::filesystem::path& path, const std::string& text);
void append_line(const std::filesystem::path& path, const std::string& line);

}  // namespace hrl::cli
