#include <chrono>
#include <cstdlib>
#include <ctime>

#include "hrl/cli/emit.hpp"
#include "hrl/cli/run.hpp"
#include "hrl/errors.hpp"
#include "hrl/parallel.hpp"

#ifndef HRL_VERSION
#define HRL_VERSION "0.0.0"
#endif

namespace hrl::cli {

namespace {

using nlohmann::json;

std::string utc_now() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

std::optional<std::filesystem::path> run_log_path(const RunConfig& c, const std::optional<std::filesystem::path>& out) {
    if (c.run_log) return c.run_log;
    if (const char* env = std::getenv("HRL_RUN_LOG"); env && *env) return std::filesystem::path(env);
    if (out) return out->parent_path() / "hrl_runs.jsonl";
    return std::nullopt;
}

}  // namespace

const char* version() { return HRL_VERSION; }

int run_file(const std::filesystem::path& config_path, const RunOptions& opt, std::ostream& out, std::ostream& err) {
    RunConfig config;
    try {
        config = load_config(config_path);
    } catch (const ConfigError& e) {
        err << "invalid config: " << e.what() << "\n";
        return exit_invalid_config;
    } catch (const json::exception& e) {
        err << "invalid config: " << e.what() << "\n";
        return exit_invalid_config;
    }
    if (opt.command && *opt.command != to_string(config.command)) {
        err << "invalid config: command \"" << to_string(config.command) << "\" does not match subcommand \""
            << *opt.command << "\"\n";
        return exit_invalid_config;
    }

    const std::size_t threads = opt.threads ? *opt.threads : config.threads.value_or(0);
    set_default_threads(threads);
    const auto output = opt.out ? opt.out : config.output;
    std::optional<std::filesystem::path> csv_path = config.csv;
    if (!csv_path && output) csv_path = std::filesystem::path(*output).replace_extension(".csv");

    const auto t0 = std::chrono::steady_clock::now();
    int code = exit_pass;
    std::string message;
    Outcome outcome;
    try {
        outcome = execute(config);
        code = outcome.pass ? exit_pass : exit_violation;
    } catch (const ConfigError& e) {
        code = exit_invalid_config;
        message = std::string("invalid config: ") + e.what();
    } catch (const json::exception& e) {
        code = exit_invalid_config;
        message = std::string("invalid config: ") + e.what();
    } catch (const DomainError& e) {
        code = exit_invalid_config;
        message = std::string("invalid parameters: ") + e.what();
    } catch (const NumericalFailure& e) {
        code = exit_numerical;
        message = std::string("numerical failure: ") + e.what();
    } catch (const std::exception& e) {
        code = exit_numerical;
        message = std::string("failure: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    if (code == exit_pass || code == exit_violation) {
        if (outcome.report.contains("seconds")) {
            outcome.report["seconds"] = config.report_timing ? json(seconds) : json(nullptr);
        }
        try {
            const std::string text = canonical_json(outcome.report);
            if (output) {
                write_file(*output, text);
            } else {
                out << text;
            }
            if (outcome.csv && csv_path) write_file(*csv_path, *outcome.csv);
        } catch (const IoError& e) {
            code = exit_numerical;
            message = e.what();
        }
        if (code == exit_violation) {
            err << "check failed for " << to_string(config.command) << "; full context in the report\n";
            if (output) err << canonical_json(outcome.report);
        }
    }
    if (!message.empty()) err << message << "\n";

    if (const auto log = run_log_path(config, output)) {
        json line = {{"command", to_string(config.command)},
                     {"config", config_path.string()},
                     {"config_sha256", config.sha256},
                     {"version", version()},
                     {"seconds", seconds},
                     {"threads", default_threads()},
                     {"exit_code", code},
                     {"output", output ? json(output->string()) : json(nullptr)},
                     {"started_utc", utc_now()}};
        try {
            append_line(*log, line.dump());
        } catch (const IoError& e) {
            err << e.what() << "\n";
            if (code == exit_pass || code == exit_violation) code = exit_numerical;
        }
    }
    return code;
}

}  // namespace hrl::cli
