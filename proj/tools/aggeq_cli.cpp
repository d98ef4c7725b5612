#include <string>
#include <vector>

#include <CLI11.hpp>

#include "aggeq/runner.hpp"

// CLI front end; all the work happens in the library's runner.

int main(int argc, char** argv) {
    CLI::App app{"Radially symmetric equilibria and dynamics of the "
                 "aggregation equation with Newtonian repulsion and "
                 "power-law attraction"};
    app.require_subcommand(0, 1);

    std::string config_path;
    app.add_option("--config", config_path,
                   "load a run configuration from a JSON file");

    aggeq::RunConfig cfg;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("-n,--dim", cfg.n, "space dimension");
        sub->add_option("-q,--exponent", cfg.q, "attraction exponent");
        sub->add_option("-M,--mass", cfg.M, "total mass");
        sub->add_option("-N,--grid", cfg.N, "number of grid segments");
        sub->add_option("--tol", cfg.tol, "solver tolerance");
        sub->add_option("-o,--output-dir", cfg.output_dir, "output directory");
    };

    CLI::App* steady = app.add_subcommand("steady", "compute the steady state");
    add_common(steady);

    CLI::App* evolve = app.add_subcommand("evolve",
                                          "evolve along characteristics");
    add_common(evolve);
    evolve->add_option("--dt", cfg.dt, "RK4 time step");
    evolve->add_option("--t-final", cfg.t_final, "final time");
    evolve->add_option("--sample-interval", cfg.sample_interval,
                       "diagnostics sampling interval");
    evolve->add_option("--initial", cfg.initial,
                       "initial datum: paper-fig2 | uniform-ball | csv");
    evolve->add_option("--initial-csv", cfg.initial_csv,
                       "r,rho file for --initial csv");

    CLI::App* largeq = app.add_subcommand("asymp-largeq",
                                          "large-q approximations");
    add_common(largeq);

    CLI::App* smalleps = app.add_subcommand("asymp-smalleps",
                                            "small-eps expansion");
    add_common(smalleps);

    CLI::App* compare = app.add_subcommand(
        "compare", "numeric vs asymptotic tables");
    add_common(compare);
    compare->add_option("--branch", cfg.branch, "largeq | smalleps");
    compare->add_option("--q-list", cfg.q_list, "q samples (largeq branch)");
    compare->add_option("--eps-list", cfg.eps_list,
                        "eps samples (smalleps branch)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (!config_path.empty()) {
        try {
            cfg = aggeq::config_from_json_file(config_path);
        } catch (const std::exception& e) {
            std::fprintf(stderr, "configuration error: %s\n", e.what());
            return 2;
        }
        return aggeq::run(cfg);
    }

    for (CLI::App* sub : {steady, evolve, largeq, smalleps, compare}) {
        if (sub->parsed()) {
            cfg.subcommand = sub->get_name();
            return aggeq::run(cfg);
        }
    }
    std::fprintf(stderr, "%s\n", app.help().c_str());
    return 2;
}
