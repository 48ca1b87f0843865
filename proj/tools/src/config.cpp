#include "hrl/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

#include <openssl/evp.h>

#include "hrl/errors.hpp"
#include "hrl/potential_io.hpp"

namespace hrl::cli {

namespace {

using nlohmann::json;

const std::map<std::string, Command>& command_table() {
    static const std::map<std::string, Command> t = {
        {"verify-halfline", Command::verify_halfline},
        {"verify-3d", Command::verify_3d},
        {"partition", Command::partition},
        {"interval-constants", Command::interval_constants},
        {"hardy-constant", Command::hardy_constant},
        {"identity-check", Command::identity_check},
        {"sweep", Command::sweep},
        {"sobolev", Command::sobolev},
    };
    return t;
}

const std::set<std::string>& allowed_keys(Command c) {
    static const std::set<std::string> common = {"command", "threads", "output", "csv",
                                                 "run_log", "report_timing", "tolerance", "mesh"};
    static const std::map<Command, std::set<std::string>> extra = {
        {Command::verify_halfline, {"form", "potential", "potential_file", "nu", "gamma", "theoretical_C"}},
        {Command::verify_3d,
         {"potential", "potential_file", "angular", "gamma", "single_copy", "extra_channels", "theoretical_C"}},
        {Command::partition, {"potential", "potential_file", "nu", "D"}},
        {Command::interval_constants, {"alpha", "beta", "nu", "b_grid", "cells"}},
        {Command::hardy_constant, {"base_cells", "levels", "length", "first_cell", "boundary"}},
        {Command::identity_check, {"samples", "seed"}},
        {Command::sweep, {"form", "potential", "potential_file", "nu", "gammas"}},
        {Command::sobolev, {"p", "D1", "D2", "functions"}},
    };
    static std::map<Command, std::set<std::string>> merged;
    if (merged.empty()) {
        for (const auto& [cmd, keys] : extra) {
            auto all = common;
            all.insert(keys.begin(), keys.end());
            merged[cmd] = std::move(all);
        }
    }
    return merged.at(c);
}

double get_number(const json& j, const std::string& key) {
    const json& v = j.at(key);
    if (!v.is_number()) throw ConfigError("\"" + key + "\" must be a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) throw ConfigError("\"" + key + "\" must be finite");
    return x;
}

FormSpec parse_form(const json& j) {
    if (!j.is_object()) throw ConfigError("\"form\" must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        static const std::set<std::string> keys = {"family", "alpha", "beta", "hardy", "c"};
        if (!keys.count(it.key())) throw ConfigError("unknown form key \"" + it.key() + "\"");
    }
    const std::string family = j.value("family", std::string("bilaplacian_hardy"));
    const auto num = [&](const char* k, double d) { return j.contains(k) ? get_number(j, k) : d; };
    if (family == "general") {
        if (!j.contains("alpha") || !j.contains("beta")) throw ConfigError("general form needs alpha and beta");
        return FormSpec::general(get_number(j, "alpha"), get_number(j, "beta"));
    }
    if (family == "bilaplacian_hardy" || family == "bilaplacian-hardy") {
        return FormSpec::bilaplacian_hardy(num("hardy", critical_hardy()));
    }
    if (family == "channel") {
        if (!j.contains("c")) throw ConfigError("channel form needs c");
        return FormSpec::channel(get_number(j, "c"), num("hardy", critical_hardy()));
    }
    throw ConfigError("unknown form family \"" + family + "\"");
}

MeshOptions parse_mesh(const json& j, MeshOptions m) {
    if (!j.is_object()) throw ConfigError("\"mesh\" must be an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (it.key() == "cells") {
            if (!it->is_number_unsigned()) throw ConfigError("mesh.cells must be a positive integer");
            m.cells = it->get<std::size_t>();
        } else if (it.key() == "L") {
            m.L = get_number(j, "L");
        } else if (it.key() == "grading") {
            m.grading = get_number(j, "grading");
        } else {
            throw ConfigError("unknown mesh key \"" + it.key() + "\"");
        }
    }
    if (m.cells < 4) throw ConfigError("mesh.cells must be >= 4");
    if (!(m.L >= 0.0)) throw ConfigError("mesh.L must be >= 0 (0 selects the default length)");
    if (!(m.grading >= 1.0)) throw ConfigError("mesh.grading must be >= 1");
    return m;
}

std::filesystem::path resolve(const std::filesystem::path& base, const json& v, const std::string& key) {
    if (!v.is_string()) throw ConfigError("\"" + key + "\" must be a path string");
    std::filesystem::path p = v.get<std::string>();
    if (p.is_relative() && !base.empty()) p = base / p;
    return p;
}

double gamma_c(double nu) { return (3.0 - nu) / 4.0; }

void check_gamma(double nu, double g, const char* what) {
    if (!(g >= gamma_c(nu) - 1e-15)) {
        std::ostringstream os;
        os << what << " = " << g << " is below the critical exponent (3 - nu)/4 = " << gamma_c(nu);
        throw ConfigError(os.str());
    }
}

}  // namespace

const char* to_string(Command c) {
    for (const auto& [name, cmd] : command_table()) {
        if (cmd == c) return name.c_str();
    }
    return "unknown";
}

Command parse_command(const std::string& name) {
    const auto it = command_table().find(name);
    if (it == command_table().end()) throw ConfigError("unknown command \"" + name + "\"");
    return it->second;
}

const std::vector<std::string>& command_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> v;
        for (const auto& [name, cmd] : command_table()) v.push_back(name);
        return v;
    }();
    return names;
}

const nlohmann::json& RunConfig::at(const std::string& key) const {
    if (!raw.contains(key)) throw ConfigError("missing \"" + key + "\"");
    return raw.at(key);
}

double RunConfig::number(const std::string& key, double fallback) const {
    return raw.contains(key) ? get_number(raw, key) : fallback;
}

double RunConfig::number(const std::string& key) const {
    if (!raw.contains(key)) throw ConfigError("missing \"" + key + "\"");
    return get_number(raw, key);
}

std::size_t RunConfig::count(const std::string& key, std::size_t fallback) const {
    if (!raw.contains(key)) return fallback;
    const json& v = raw.at(key);
    if (!v.is_number_unsigned()) throw ConfigError("\"" + key + "\" must be a nonnegative integer");
    return v.get<std::size_t>();
}

RunConfig parse_config(const nlohmann::json& j, const std::filesystem::path& base_dir) {
    if (!j.is_object()) throw ConfigError("config must be a JSON object");
    if (!j.contains("command") || !j.at("command").is_string()) throw ConfigError("config needs a \"command\" string");
    RunConfig c;
    c.command = parse_command(j.at("command").get<std::string>());
    c.raw = j;
    c.base_dir = base_dir;
    const auto& allowed = allowed_keys(c.command);
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key())) {
            throw ConfigError("key \"" + it.key() + "\" is not used by " + std::string(to_string(c.command)));
        }
    }

    if (j.contains("threads")) {
        if (!j.at("threads").is_number_unsigned() || j.at("threads").get<std::size_t>() == 0) {
            throw ConfigError("\"threads\" must be a positive integer");
        }
        c.threads = j.at("threads").get<std::size_t>();
    }
    if (j.contains("output")) c.output = resolve(base_dir, j.at("output"), "output");
    if (j.contains("csv")) c.csv = resolve(base_dir, j.at("csv"), "csv");
    if (j.contains("run_log")) c.run_log = resolve(base_dir, j.at("run_log"), "run_log");
    if (j.contains("report_timing")) {
        if (!j.at("report_timing").is_boolean()) throw ConfigError("\"report_timing\" must be a boolean");
        c.report_timing = j.at("report_timing").get<bool>();
    }
    if (j.contains("tolerance")) {
        const json& t = j.at("tolerance");
        if (!t.is_object()) throw ConfigError("\"tolerance\" must be an object");
        for (auto it = t.begin(); it != t.end(); ++it) {
            const double v = get_number(t, it.key());
            if (!(v > 0.0)) throw ConfigError("tolerances must be positive");
            if (it.key() == "eigen") {
                c.tol.eigen = v;
            } else if (it.key() == "partition") {
                c.tol.partition = v;
            } else if (it.key() == "identity") {
                c.tol.identity = v;
            } else {
                throw ConfigError("unknown tolerance \"" + it.key() + "\"");
            }
        }
    }
    if (j.contains("mesh")) c.mesh = parse_mesh(j.at("mesh"), c.mesh);
    if (j.contains("form")) c.form = parse_form(j.at("form"));
    if (j.contains("nu")) c.nu = get_number(j, "nu");
    if (!(c.nu >= 0.0 && c.nu < 3.0)) throw ConfigError("nu must lie in [0, 3)");
    if (j.contains("gamma")) c.gamma = get_number(j, "gamma");
    if (j.contains("theoretical_C")) c.theoretical_C = get_number(j, "theoretical_C");

    if (j.contains("potential") && j.contains("potential_file")) {
        throw ConfigError("give either \"potential\" or \"potential_file\", not both");
    }
    try {
        if (j.contains("potential")) {
            c.potential_json = j.at("potential");
            c.potential = potential_from_json(c.potential_json);
        } else if (j.contains("potential_file")) {
            const auto path = resolve(base_dir, j.at("potential_file"), "potential_file");
            std::ifstream f(path);
            if (!f) throw ConfigError("cannot read potential file " + path.string());
            c.potential_json = json::parse(f);
            c.potential = potential_from_json(c.potential_json);
        }
    } catch (const DomainError& e) {
        throw ConfigError(std::string("invalid potential: ") + e.what());
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid potential: ") + e.what());
    }

    try {
        c.form.validate();
    } catch (const DomainError& e) {
        throw ConfigError(e.what());
    }

    switch (c.command) {
        case Command::verify_halfline:
            if (!c.potential) throw ConfigError("verify-halfline needs a potential");
            if (!c.gamma) c.gamma = gamma_c(c.nu);
            check_gamma(c.nu, *c.gamma, "gamma");
            if (c.form.family == FormSpec::Family::general && !(c.nu <= 2.0 * c.form.beta)) {
                throw ConfigError("the general family needs nu <= 2 beta");
            }
            break;
        case Command::verify_3d:
            if (!c.potential) throw ConfigError("verify-3d needs a potential");
            if (!c.gamma) c.gamma = 0.25;
            if (!(*c.gamma >= 0.25)) throw ConfigError("verify-3d needs gamma >= 1/4");
            break;
        case Command::partition:
            if (!c.potential) throw ConfigError("partition needs a potential");
            if (!(c.number("D") > 0.0)) throw ConfigError("partition needs D > 0");
            break;
        case Command::interval_constants: {
            const double alpha = c.number("alpha");
            const double beta = c.number("beta");
            if (!(alpha >= 0.0 && beta >= 0.0 && beta < 1.5 + alpha)) {
                throw ConfigError("interval constants need alpha >= 0 and 0 <= beta < 3/2 + alpha");
            }
            if (!(c.nu <= 2.0 * beta)) throw ConfigError("interval constants need nu <= 2 beta");
            break;
        }
        case Command::hardy_constant:
            if (c.count("base_cells", 128) < 4) throw ConfigError("base_cells must be >= 4");
            if (c.count("levels", 3) < 1) throw ConfigError("levels must be >= 1");
            if (!(c.number("length", 1.0) > 0.0)) throw ConfigError("length must be positive");
            if (!(c.number("first_cell", 1e-16) > 0.0)) throw ConfigError("first_cell must be positive");
            break;
        case Command::identity_check:
            if (c.count("samples", 20) < 1) throw ConfigError("samples must be >= 1");
            break;
        case Command::sweep:
            if (!c.potential) throw ConfigError("sweep needs a potential");
            if (!j.contains("gammas") || !j.at("gammas").is_array() || j.at("gammas").empty()) {
                throw ConfigError("sweep needs a nonempty \"gammas\" array");
            }
            for (const auto& g : j.at("gammas")) {
                if (!g.is_number()) throw ConfigError("gammas must be numbers");
                c.gammas.push_back(g.get<double>());
                check_gamma(c.nu, c.gammas.back(), "gammas entry");
            }
            if (c.form.family == FormSpec::Family::general && !(c.nu <= 2.0 * c.form.beta)) {
                throw ConfigError("the general family needs nu <= 2 beta");
            }
            break;
        case Command::sobolev: {
            const json& p = c.at("p");
            if (p.is_string()) {
                if (p.get<std::string>() != "inf") throw ConfigError("p must be a number > 1 or \"inf\"");
            } else if (!(c.number("p") > 1.0)) {
                throw ConfigError("p must be > 1");
            }
            if (j.contains("D2") && !(j.at("D2").is_number() || j.at("D2") == "empirical")) {
                throw ConfigError("D2 must be a number or \"empirical\"");
            }
            break;
        }
    }
    return c;
}

std::string sha256_hex(const std::string& bytes) {
    unsigned char md[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256 failed");
    }
    std::ostringstream os;
    for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << static_cast<int>(md[i]);
    return os.str();
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot read config " + path.string());
    std::ostringstream buf;
    buf << f.rdbuf();
    const std::string bytes = buf.str();
    json j;
    try {
        j = json::parse(bytes);
    } catch (const json::parse_error& e) {
        throw ConfigError(std::string("config is not valid JSON: ") + e.what());
    }
    RunConfig c = parse_config(j, path.parent_path());
    c.sha256 = sha256_hex(bytes);
    return c;
}

}  // namespace hrl::cli
