#include <iostream>

#include <CLI11.hpp>

#include "hrl/cli/run.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for fourth-order Hardy-Rellich and Lieb-Thirring inequalities", "hrl"};
    app.set_version_flag("--version", hrl::cli::version());
    app.require_subcommand(1);

    std::string config;
    std::string out;
    std::size_t threads = 0;
    for (const auto& name : hrl::cli::command_names()) {
        auto* sub = app.add_subcommand(name, "run " + name);
        sub->add_option("--config", config, "JSON run configuration")->required()->check(CLI::ExistingFile);
        sub->add_option("--out", out, "report path (default: stdout)");
        sub->add_option("--threads", threads, "worker threads (default: config, HRL_THREADS, cores)")
            ->check(CLI::PositiveNumber);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : hrl::cli::exit_invalid_config;
    }

    const auto* sub = app.get_subcommands().front();
    hrl::cli::RunOptions opt;
    opt.command = sub->get_name();
    if (!out.empty()) opt.out = out;
    if (threads > 0) opt.threads = threads;
    return hrl::cli::run_file(config, opt, std::cout, std::cerr);
}
