#ifndef AGGEQ_RUNNER_HPP
#define AGGEQ_RUNNER_HPP

#include <cstddef>
#include <string>
#include <vector>

// Subcommand plumbing shared by the CLI binary and the tests: configuration,
// dispatch, and CSV/JSON emission. Output is deterministic; rerunning the
// same configuration rewrites byte-identical files.

namespace aggeq {

struct RunConfig {
    std::string subcommand;        // steady | evolve | asymp-largeq |
                                   // asymp-smalleps | compare
    int n = 3;
    double q = 2.0;
    double M = 1.0;
    std::size_t N = 200;
    double tol = 1e-10;

    // evolve
    double dt = 1e-3;
    double t_final = 5.0;
    double sample_interval = 0.1;
    std::string initial = "paper-fig2";  // paper-fig2 | uniform-ball | csv
    std::string initial_csv;

    // compare
    std::string branch = "largeq";  // largeq | smalleps
    std::vector<double> q_list;
    std::vector<double> eps_list;

    std::string output_dir = ".";
};

// exit status: 0 success, 1 solver/integrator failure, 2 configuration error
int run(const RunConfig& config);

int run_steady(const RunConfig& config);
int run_evolve(const RunConfig& config);
int run_asymp_largeq(const RunConfig& config);
int run_asymp_smalleps(const RunConfig& config);
int run_compare(const RunConfig& config);

RunConfig config_from_json_file(const std::string& path);

}  // namespace aggeq

#endif
