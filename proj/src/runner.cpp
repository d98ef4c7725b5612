#include "aggeq/runner.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>

#include <json.hpp>

#include "aggeq/asymptotics.hpp"
#include "aggeq/dynamics.hpp"
#include "aggeq/equilibrium.hpp"
#include "aggeq/io.hpp"
#include "aggeq/model.hpp"

namespace aggeq {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path out_path(const RunConfig& cfg, const std::string& name) {
    fs::path dir(cfg.output_dir);
    fs::create_directories(dir);
    return dir / name;
}

json config_echo(const RunConfig& cfg) {
    json j;
    j["subcommand"] = cfg.subcommand;
    j["n"] = cfg.n;
    j["q"] = cfg.q;
    j["M"] = cfg.M;
    j["N"] = cfg.N;
    j["tol"] = cfg.tol;
    if (cfg.subcommand == "evolve") {
        j["dt"] = cfg.dt;
        j["t_final"] = cfg.t_final;
        j["initial"] = cfg.initial;
    }
    return j;
}

void write_json(const fs::path& path, const json& j) {
    io::write_text(path, j.dump(2) + "\n");
}

const char* verdict_name(const MonotonicityVerdict& v) {
    if (!v.ok) return "violated";
    switch (v.expected) {
        case Monotonicity::decreasing: return "decreasing";
        case Monotonicity::constant: return "constant";
        case Monotonicity::increasing: return "increasing";
    }
    return "unknown";
}

RadialProfile fig2_profile(std::size_t N, double M) {
    RadialGrid grid(N, 1.0);
    std::vector<double> v(N + 1);
    for (std::size_t j = 0; j <= N; ++j) {
        const double r = grid.nodes[j];
        const double r2 = r * r;
        v[j] = (0.2 - 20.0 * r2 + 1000.0 * r2 * r2) * std::exp(-40.0 * r2);
    }
    RadialProfile prof(grid, std::move(v));
    const double m = mass(prof, 3);
    for (double& val : prof.values) val *= M / m;
    return prof;
}

RadialProfile initial_profile(const RunConfig& cfg) {
    if (cfg.initial == "paper-fig2") {
        if (cfg.n != 3)
            throw config_error("the quartic-Gaussian initial datum is a "
                               "three-dimensional profile");
        return fig2_profile(cfg.N, cfg.M);
    }
    if (cfg.initial == "uniform-ball") {
        RadialGrid grid(cfg.N, 1.0);
        std::vector<double> v(cfg.N + 1, cfg.M / Geometry(cfg.n).omega_n());
        return RadialProfile(grid, std::move(v));
    }
    if (cfg.initial == "csv") {
        if (cfg.initial_csv.empty())
            throw config_error("initial=csv requires --initial-csv");
        return io::read_profile_csv(cfg.initial_csv);
    }
    throw config_error("unknown initial datum '" + cfg.initial + "'");
}

}  // namespace

int run_steady(const RunConfig& cfg) {
    const ModelParams params = validate({cfg.n, cfg.q, cfg.M});
    const Equilibrium eq = steady_state(params, cfg.N, cfg.tol);

    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < eq.profile.grid.nodes.size(); ++j)
        rows.push_back({eq.profile.grid.nodes[j], eq.profile.values[j]});
    io::write_csv(out_path(cfg, "steady_profile.csv"), {"r", "rho"}, rows);

    const auto verdict = check_monotonicity(eq.profile, cfg.q, 1e-9);
    json j;
    j["lambda"] = eq.eig.lambda;
    j["R"] = eq.eig.R;
    j["residual"] = eq.eig.residual;
    j["iterations"] = eq.eig.iterations;
    j["monotonicity"] = verdict_name(verdict);
    j["regime"] = classify_regime(params) == Regime::singular ? "singular"
                                                              : "regular";
    j["mass"] = mass(eq.profile, cfg.n);
    j["config"] = config_echo(cfg);
    write_json(out_path(cfg, "steady_summary.json"), j);
    return 0;
}

int run_evolve(const RunConfig& cfg) {
    const ModelParams params = validate({cfg.n, cfg.q, cfg.M});
    const RadialProfile init = initial_profile(cfg);
    const Equilibrium eq = steady_state(params, cfg.N, cfg.tol);

    const Trajectory traj = evolve(init, cfg.t_final, cfg.dt, params,
                                   &eq.profile, cfg.sample_interval);
    const ConservationReport rep = conservation_report(traj);

    std::vector<std::vector<double>> diag;
    for (const auto& s : traj.samples)
        diag.push_back({s.time, s.mass, s.rho_max, s.support_radius,
                        s.dist_to_reference});
    io::write_csv(out_path(cfg, "evolve_diagnostics.csv"),
                  {"t", "mass", "rho_max", "support_radius",
                   "dist_to_equilibrium"},
                  diag);

    std::vector<std::vector<double>> stat;
    for (std::size_t i = 0; i < traj.final.radii.size(); ++i)
        stat.push_back({traj.final.time, traj.final.radii[i],
                        traj.final.densities[i]});
    io::write_csv(out_path(cfg, "evolve_final_state.csv"), {"t", "r", "rho"},
                  stat);

    json j;
    j["max_mass_drift"] = rep.max_mass_drift;
    j["centre_of_mass"] = rep.centre_of_mass;
    j["rho_max_final"] = traj.samples.back().rho_max;
    if (rep.rho_max_ceiling > 0.0) {
        j["rho_max_ceiling"] = rep.rho_max_ceiling;
        j["ceiling_respected"] = rep.ceiling_respected;
    }
    j["dist_to_equilibrium_final"] = traj.samples.back().dist_to_reference;
    j["clamped_negative_densities"] = traj.clamped_total;
    j["characteristic_crossing"] = traj.crossing_detected;
    j["config"] = config_echo(cfg);
    write_json(out_path(cfg, "evolve_summary.json"), j);
    return 0;
}

int run_asymp_largeq(const RunConfig& cfg) {
    const LargeQApprox approx = (cfg.n == 1)
        ? largeq_1d(cfg.q, cfg.N)
        : largeq_nd(cfg.n, cfg.q, cfg.N);

    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < approx.profile.grid.nodes.size(); ++j)
        rows.push_back({approx.profile.grid.nodes[j],
                        approx.profile.values[j]});
    io::write_csv(out_path(cfg, "largeq_profile.csv"), {"r", "rho"}, rows);

    json j;
    j["lambda_coarse"] = approx.lambda_coarse;
    j["lambda_refined"] = approx.lambda_refined;
    j["R_coarse"] = approx.R_coarse;
    j["R_refined"] = approx.R_refined;
    j["config"] = config_echo(cfg);
    write_json(out_path(cfg, "largeq_summary.json"), j);
    return 0;
}

int run_asymp_smalleps(const RunConfig& cfg) {
    SmallEpsExpansion exp = (cfg.n == 1) ? smalleps_limit_1d(cfg.N, 1e-11)
                                         : smalleps_limit_nd(cfg.n, cfg.N);
    exp.lambda2 = (cfg.n == 1) ? smalleps_lambda2_1d(exp)
                               : smalleps_lambda2_nd(exp);

    std::vector<std::vector<double>> rows;
    for (std::size_t j = 0; j < exp.rho0.grid.nodes.size(); ++j)
        rows.push_back({exp.rho0.grid.nodes[j], exp.rho0.values[j]});
    io::write_csv(out_path(cfg, "smalleps_profile.csv"), {"x", "rho0"}, rows);

    json j;
    j["lambda0"] = exp.lambda0;
    j["lambda1"] = exp.lambda1;
    j["lambda2"] = exp.lambda2;
    j["iterations"] = exp.iterations;
    j["config"] = config_echo(cfg);
    write_json(out_path(cfg, "smalleps_summary.json"), j);
    return 0;
}

int run_compare(const RunConfig& cfg) {
    if (cfg.branch == "largeq") {
        if (cfg.q_list.empty())
            throw config_error("compare largeq needs a nonempty q list");
        struct Row { double q, lam_num, lam_asy, R_num, R_asy; };
        std::vector<std::future<Row>> futures;
        for (double q : cfg.q_list) {
            futures.push_back(std::async(std::launch::async, [q, &cfg]() {
                const ModelParams p = validate({cfg.n, q, cfg.M});
                const Equilibrium eq = steady_state(p, cfg.N, cfg.tol);
                double lam_asy, R_asy;
                if (cfg.n == 1) {
                    lam_asy = std::pow(2.0, q - 2.0);
                    R_asy = std::pow(2.0, -(q - 2.0) / (q - 1.0));
                } else {
                    lam_asy = largeq_nd_refined(
                        cfg.n, q, std::max<std::size_t>(cfg.N, 400));
                    R_asy = support_radius(lam_asy, cfg.n, q);
                }
                return Row{q, eq.eig.lambda, lam_asy, eq.eig.R, R_asy};
            }));
        }
        std::vector<std::vector<double>> rows;
        for (auto& f : futures) {
            const Row r = f.get();
            rows.push_back({r.q, r.lam_num, r.lam_asy, r.R_num, r.R_asy});
        }
        io::write_csv(out_path(cfg, "compare_largeq.csv"),
                      {"q", "lambda_numeric", "lambda_asymptotic", "R_numeric",
                       "R_asymptotic"},
                      rows);
        return 0;
    }
    if (cfg.branch == "smalleps") {
        if (cfg.eps_list.empty())
            throw config_error("compare smalleps needs a nonempty eps list");
        SmallEpsExpansion exp = (cfg.n == 1)
            ? smalleps_limit_1d(std::max<std::size_t>(cfg.N, 400))
            : smalleps_limit_nd(cfg.n, std::max<std::size_t>(cfg.N, 400));
        exp.lambda2 = (cfg.n == 1) ? smalleps_lambda2_1d(exp)
                                   : smalleps_lambda2_nd(exp);

        struct Row { double eps, lam_num, lam_asy, edge, centre; };
        std::vector<std::future<Row>> futures;
        for (double eps : cfg.eps_list) {
            futures.push_back(std::async(std::launch::async, [eps, &cfg,
                                                              &exp]() {
                const double q = 2.0 - cfg.n + eps;
                const ModelParams p = validate({cfg.n, q, cfg.M});
                const Equilibrium eq = steady_state(p, cfg.N, cfg.tol);
                // unit-mass eigenfunction boundary/centre values for the fits
                RadialProfile unit = eq.eig.rho1;
                const double m = mass(unit, cfg.n);
                for (double& v : unit.values) v /= m;
                return Row{eps, eq.eig.lambda, exp.lambda_at(eps),
                           unit.values.back(), unit.values.front()};
            }));
        }
        std::vector<double> epss, edges, centres;
        std::vector<std::vector<double>> rows;
        for (auto& f : futures) {
            const Row r = f.get();
            rows.push_back({r.eps, r.lam_num, r.lam_asy, r.edge, r.centre});
            epss.push_back(r.eps);
            edges.push_back(r.edge);
            centres.push_back(r.centre);
        }
        io::write_csv(out_path(cfg, "compare_smalleps.csv"),
                      {"eps", "lambda_numeric", "lambda_asymptotic",
                       "rho1_edge", "rho1_centre"},
                      rows);

        json j;
        j["lambda0"] = exp.lambda0;
        j["lambda1"] = exp.lambda1;
        j["lambda2"] = exp.lambda2;
        if (epss.size() >= 4) {
            const BoundaryFit fit = boundary_scaling_fit(epss, edges, centres);
            j["fit_a"] = fit.a;
            j["fit_b"] = fit.b;
            j["fit_c"] = fit.c;
            j["fit_sqrt_residual"] = fit.sqrt_residual;
            j["fit_linear_residual"] = fit.linear_residual;
        }
        j["config"] = config_echo(cfg);
        write_json(out_path(cfg, "compare_smalleps_summary.json"), j);
        return 0;
    }
    throw config_error("unknown compare branch '" + cfg.branch + "'");
}

int run(const RunConfig& cfg) {
    try {
        if (cfg.subcommand == "steady") return run_steady(cfg);
        if (cfg.subcommand == "evolve") return run_evolve(cfg);
        if (cfg.subcommand == "asymp-largeq") return run_asymp_largeq(cfg);
        if (cfg.subcommand == "asymp-smalleps") return run_asymp_smalleps(cfg);
        if (cfg.subcommand == "compare") return run_compare(cfg);
        std::cerr << "unknown subcommand '" << cfg.subcommand << "'\n";
        return 2;
    } catch (const config_error& e) {
        std::cerr << "configuration error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

RunConfig config_from_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw config_error("cannot open config file " + path);
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw config_error(std::string("bad config file: ") + e.what());
    }
    RunConfig cfg;
    cfg.subcommand = j.value("subcommand", cfg.subcommand);
    cfg.n = j.value("n", cfg.n);
    cfg.q = j.value("q", cfg.q);
    cfg.M = j.value("M", cfg.M);
    cfg.N = j.value("N", cfg.N);
    cfg.tol = j.value("tol", cfg.tol);
    cfg.dt = j.value("dt", cfg.dt);
    cfg.t_final = j.value("t_final", cfg.t_final);
    cfg.sample_interval = j.value("sample_interval", cfg.sample_interval);
    cfg.initial = j.value("initial", cfg.initial);
    cfg.initial_csv = j.value("initial_csv", cfg.initial_csv);
    cfg.branch = j.value("branch", cfg.branch);
    cfg.q_list = j.value("q_list", cfg.q_list);
    cfg.eps_list = j.value("eps_list", cfg.eps_list);
    cfg.output_dir = j.value("output_dir", cfg.output_dir);
    return cfg;
}

}  // namespace aggeq
