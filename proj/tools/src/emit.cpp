#include "hrl/cli/emit.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>

namespace hrl::cli {

namespace {

void dump(const nlohmann::json& j, int depth, std::string& out) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close(static_cast<std::size_t>(2 * depth), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            std::map<std::string, const nlohmann::json*> sorted;
            for (auto it = j.begin(); it != j.end(); ++it) sorted.emplace(it.key(), &it.value());
            out += "{\n";
            bool first = true;
            for (const auto& [k, v] : sorted) {
                if (!first) out += ",\n";
                first = false;
                out += pad + nlohmann::json(k).dump() + ": ";
                dump(*v, depth + 1, out);
            }
            out += "\n" + close + "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i > 0) out += ",\n";
                out += pad;
                dump(j[i], depth + 1, out);
            }
            out += "\n" + close + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_double(j.get<double>());
            return;
        default:
            out += j.dump();
    }
}

}  // namespace

std::string format_double(double x) {
    if (!std::isfinite(x)) return "null";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string canonical_json(const nlohmann::json& j) {
    std::string out;
    dump(j, 0, out);
    out += "\n";
    return out;
}

std::string csv_table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
    std::string out;
    const auto line = [&](const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i > 0) out += ",";
            out += cells[i];
        }
        out += "\n";
    };
    line(header);
    for (const auto& r : rows) line(r);
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text) {
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw IoError("cannot open " + path.string() + " for writing");
    f << text;
    f.flush();
    if (!f) throw IoError("failed writing " + path.string());
}

void append_line(const std::filesystem::path& path, const std::string& line) {
    std::ofstream f(path, std::ios::binary | std::ios::app);
    if (!f) throw IoError("cannot open " + path.string() + " for appending");
    f << line << "\n";
    if (!f) throw IoError("failed writing " + path.string());
}

}  // namespace hrl::cli
