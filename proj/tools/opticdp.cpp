#include "opticdp/runner.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Dynamic programming solvers built from optics"};
    app.require_subcommand(1);

    std::string config;
    auto* run = app.add_subcommand("run", "Solve the configured problem and write CSV outputs");
    run->add_option("config", config, "Config file")->required();

    std::string snap_config;
    std::size_t every = 1;
    auto* snapshot = app.add_subcommand("snapshot", "Write value_k.csv and policy_k.csv every N iterations");
    snapshot->add_option("config", snap_config, "Config file")->required();
    snapshot->add_option("--every", every, "Snapshot stride")->check(CLI::PositiveNumber);

    auto* list = app.add_subcommand("presets", "List built-in environment presets");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // Usage errors share the config-error exit code.
        const int code = app.exit(e);
        return code == 0 ? 0 : opticdp::kExitConfigError;
    }

    if (*run) return opticdp::run(config, std::cout, std::cerr);
    if (*snapshot) return opticdp::snapshot_sequence(snap_config, every, std::cout, std::cerr);
    if (*list) {
        for (const auto& p : opticdp::presets()) std::cout << p.name << "  " << p.description << '\n';
    }
    return 0;
}
