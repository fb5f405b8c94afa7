#include <iostream>

#include "CLI11.hpp"
#include "plapcert/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"plapcert: cone certificates and fixed points for a coupled p-Laplacian system"};
    app.require_subcommand(1);

    plapcert::CliOptions options;
    std::string config;
    std::size_t n = 0, resolution = 0, max_iterations = 0;
    double tol = 0, cap = 0, damping = 0;
    std::string out;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("config", config, "problem configuration file");
        sub->add_flag("--paper-example", options.paper_example, "use the built-in example system");
        sub->add_option("--n", n, "grid intervals");
        sub->add_option("--out", out, "write the JSON report to this path");
        sub->add_flag("--json", options.json, "print the JSON report instead of text");
        sub->add_option("--resolution", resolution, "growth-bound lattice points per axis");
    };

    auto* validate = app.add_subcommand("validate", "check the structural hypotheses");
    add_common(validate);
    auto* constants = app.add_subcommand("constants", "compute the cone constants");
    add_common(constants);
    auto* certify = app.add_subcommand("certify", "check a radius ladder and sampled nonexistence");
    add_common(certify);
    certify->add_option("--ladder", options.ladder, "rungs rho1,rho2:TAG with TAG in {I1, I0, I0star}");
    certify->add_option("--cap", cap, "sampling cap for the nonexistence check");
    certify->add_option("--tol", tol, "unused; accepted for a uniform interface");
    auto* solve = app.add_subcommand("solve", "find fixed points by damped Picard iteration");
    add_common(solve);
    solve->add_option("--ladder", options.ladder, "optional ladder for localisation");
    solve->add_option("--tol", tol, "convergence tolerance on ||x - Tx||");
    solve->add_option("--damping", damping, "Picard damping in (0, 1]");
    solve->add_option("--max-iter", max_iterations, "iteration limit per start");
    solve->add_option("--amplitude", options.amplitudes, "start amplitudes a1,a2 (repeatable)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : plapcert::kExitInputError;
    }

    CLI::App* chosen = app.get_subcommands().front();
    options.command = chosen->get_name();
    if (!config.empty()) options.config_path = config;
    if (!out.empty()) options.out = out;
    if (chosen->count("--n")) options.n = n;
    if (chosen->count("--resolution")) options.resolution = resolution;
    if (chosen->get_option_no_throw("--tol") && chosen->count("--tol")) options.tol = tol;
    if (chosen->get_option_no_throw("--cap") && chosen->count("--cap")) options.cap = cap;
    if (chosen->get_option_no_throw("--damping") && chosen->count("--damping")) options.damping = damping;
    if (chosen->get_option_no_throw("--max-iter") && chosen->count("--max-iter")) options.max_iterations = max_iterations;

    try {
        return plapcert::run_command(options, std::cout, std::cerr);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return plapcert::kExitInputError;
    }
}
