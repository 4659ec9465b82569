#include <CLI11.hpp>

#include <iostream>

#include "quadevo/selfcheck.hpp"
#include "quadevo/simulation.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Gaussian evolution under time-dependent quadratic Hamiltonians"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "integrate a configured scenario and write CSV");
    run->add_option("--config", config_path, "INI configuration file")->required();

    std::string level = "fast";
    auto* check = app.add_subcommand("selfcheck", "run the built-in verification suites");
    check->add_option("--level", level, "fast or full")
        ->check(CLI::IsMember({"fast", "full"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (*run) {
        return quadevo::run_command(config_path, std::cout, std::cerr);
    }
    quadevo::SelfcheckOptions options;
    options.level = quadevo::parse_selfcheck_level(level);
    return quadevo::selfcheck_command(options, std::cout);
}
