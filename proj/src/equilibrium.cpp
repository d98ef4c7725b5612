#include "aggeq/equilibrium.hpp"

#include <algorithm>
#include <cmath>

#include "aggeq/kernels.hpp"
#include "aggeq/quadrature.hpp"

namespace aggeq {

namespace {

// row of int_0^1 r' I(c,r') hat_j(r') dr' for n=2: tabulated kernel,
// Gauss segments split at the diagonal where I1 has a kink
void assemble_row_n2(const RadialGrid& grid, double c, const AngularTable& tab,
                     double q, Eigen::Ref<Eigen::RowVectorXd> row) {
    const auto& nodes = grid.nodes;
    const std::size_t N = grid.segments();
    auto kernel = [&](double rp) {
        const double hi = std::max(c, rp), lo = std::min(c, rp);
        if (hi == 0.0) return 0.0;
        return std::pow(hi, q - 2.0) * tab.I1(lo / hi);
    };
    for (std::size_t j = 0; j < N; ++j) {
        const double a = nodes[j], b = nodes[j + 1];
        double splits[3] = {a, b, b};
        int ns = 2;
        if (c > a && c < b) {
            splits[1] = c;
            splits[2] = b;
            ns = 3;
        }
        for (int sI = 0; sI + 1 < ns; ++sI) {
            const double xa = splits[sI], xb = splits[sI + 1];
            const GaussRule& g = gauss_legendre(16);
            const double mid = 0.5 * (xa + xb), half = 0.5 * (xb - xa);
            for (std::size_t k = 0; k < g.x.size(); ++k) {
                const double x = mid + half * g.x[k];
                const double w = half * g.w[k] * x * kernel(x);
                const double t = (x - a) / (b - a);
                row(static_cast<Eigen::Index>(j)) += w * (1.0 - t);
                row(static_cast<Eigen::Index>(j + 1)) += w * t;
            }
        }
    }
}

}  // namespace

Eigen::MatrixXd assemble_T1(const RadialGrid& grid, const ModelParams& params) {
    validate(params);
    const int n = params.n;
    const double q = params.q;
    const std::size_t m = grid.nodes.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m),
                                              static_cast<Eigen::Index>(m));
    if (n == 1) {
        const double pref = q - 1.0;  // epsilon for n=1
        for (std::size_t i = 0; i < m; ++i) {
            const auto w = internal::radial_row_weights(grid, i, 1, q);
            for (std::size_t j = 0; j < m; ++j)
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    pref * w[j];
        }
        return A;
    }
    const double pref = params.epsilon() * Geometry(n).angular_prefactor();
    if (n == 3) {
        for (std::size_t i = 0; i < m; ++i) {
            const auto w = internal::radial_row_weights(grid, i, 3, q);
            for (std::size_t j = 0; j < m; ++j)
                A(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
                    pref * w[j];
        }
        return A;
    }
    if (n != 2)
        throw config_error("assembly supports n in {1,2,3}");
    AngularTable tab(2, q);
    for (std::size_t i = 0; i < m; ++i) {
        Eigen::RowVectorXd row = Eigen::RowVectorXd::Zero(
            static_cast<Eigen::Index>(m));
        assemble_row_n2(grid, grid.nodes[i], tab, q, row);
        A.row(static_cast<Eigen::Index>(i)) = pref * row;
    }
    return A;
}

EigenSolution power_method(const Eigen::MatrixXd& A, const RadialGrid& grid,
                           int n, double q, std::vector<double> initial,
                           double tol, std::size_t max_iter) {
    const Eigen::Index m = A.rows();
    Eigen::VectorXd x;
    if (initial.empty()) {
        x = Eigen::VectorXd::Ones(m);
    } else {
        if (static_cast<Eigen::Index>(initial.size()) != m)
            throw config_error("initial iterate does not match the grid");
        x = Eigen::Map<Eigen::VectorXd>(initial.data(), m);
        if (x.minCoeff() <= 0.0)
            throw config_error("initial iterate must be strictly positive");
    }
    x /= x.lpNorm<Eigen::Infinity>();

    EigenSolution sol;
    double lambda = 0.0;
    for (std::size_t it = 1; it <= max_iter; ++it) {
        Eigen::VectorXd y = A * x;
        lambda = y.lpNorm<Eigen::Infinity>();
        if (!(lambda > 0.0))
            throw solver_error("power iteration collapsed to zero");
        y /= lambda;
        const double step = (y - x).lpNorm<Eigen::Infinity>();
        x = y;
        sol.iterations = it;
        if (step <= tol) {
            const double resid = (A * x - lambda * x).lpNorm<Eigen::Infinity>()
                               / x.lpNorm<Eigen::Infinity>();
            sol.residual = resid;
            if (resid <= 10.0 * tol * lambda) {
                sol.converged = true;
                break;
            }
        }
    }
    if (!sol.converged)
        sol.residual = (A * x - lambda * x).lpNorm<Eigen::Infinity>()
                     / x.lpNorm<Eigen::Infinity>();
    sol.lambda = lambda;
    sol.R = support_radius(lambda, n, q);
    sol.rho1 = RadialProfile(grid, std::vector<double>(x.data(), x.data() + m));
    if (!sol.converged)
        throw solver_error("power method did not converge: residual "
                           + std::to_string(sol.residual) + " after "
                           + std::to_string(sol.iterations) + " iterations");
    return sol;
}

double support_radius(double lambda, int n, double q) {
    if (!(lambda > 0.0))
        throw config_error("support radius needs lambda > 0");
    return std::pow(lambda, -1.0 / (n + q - 2.0));
}

RadialProfile scale_to_mass(const EigenSolution& sol, const ModelParams& params) {
    const double R = sol.R;
    RadialGrid scaled(sol.rho1.grid.segments(), R);
    for (std::size_t j = 0; j < scaled.nodes.size(); ++j)
        scaled.nodes[j] = sol.rho1.grid.nodes[j] * R;
    RadialProfile prof(scaled, sol.rho1.values);
    const double m1 = mass(prof, params.n);
    if (!(m1 > 0.0))
        throw solver_error("eigenfunction carries no mass");
    const double c = params.M / m1;
    for (double& v : prof.values) v *= c;
    return prof;
}

MonotonicityVerdict check_monotonicity(const RadialProfile& profile, double q,
                                       double tol) {
    const auto& v = profile.values;
    const double vmax = *std::max_element(v.begin(), v.end());
    const double slack = tol * std::max(vmax, 1.0);
    MonotonicityVerdict verdict;
    verdict.expected = (q < 2.0) ? Monotonicity::decreasing
                     : (q > 2.0) ? Monotonicity::increasing
                                 : Monotonicity::constant;
    verdict.ok = true;
    for (std::size_t j = 0; j + 1 < v.size(); ++j) {
        const double d = v[j + 1] - v[j];
        const bool bad = (verdict.expected == Monotonicity::decreasing && d > slack)
                      || (verdict.expected == Monotonicity::increasing && d < -slack)
                      || (verdict.expected == Monotonicity::constant
                          && std::abs(d) > slack);
        if (bad) {
            verdict.ok = false;
            verdict.first_violation = j + 1;
            break;
        }
    }
    return verdict;
}

Equilibrium steady_state(const ModelParams& params, std::size_t N, double tol,
                         std::size_t max_iter) {
    validate(params);
    RadialGrid grid(N, 1.0);
    const Eigen::MatrixXd A = assemble_T1(grid, params);
    Equilibrium eq;
    eq.eig = power_method(A, grid, params.n, params.q, {}, tol, max_iter);
    eq.profile = scale_to_mass(eq.eig, params);
    return eq;
}

}  // namespace aggeq
