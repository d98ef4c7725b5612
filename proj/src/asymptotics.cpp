#include "aggeq/asymptotics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Dense>

#include "aggeq/equilibrium.hpp"
#include "aggeq/kernels.hpp"
#include "aggeq/quadrature.hpp"

namespace aggeq {

namespace {

double lgamma_ratio_coarse(int n, double q) {
    return std::lgamma(0.5 * (n - 1.0)) + std::lgamma(0.5 * (n + q - 1.0))
         - std::lgamma(n - 1.0 + 0.5 * q);
}

double trapz(const Eigen::VectorXd& f, double h) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i + 1 < f.size(); ++i)
        acc += 0.5 * h * (f(i) + f(i + 1));
    return acc;
}

}  // namespace

LargeQApprox largeq_1d(double q, std::size_t N) {
    if (q < 5.0)
        throw config_error("large-q expansion accepted for q >= 5");
    LargeQApprox out;
    out.lambda_coarse = std::pow(2.0, q - 1.0);
    out.lambda_refined = std::pow(2.0, q - 2.0);
    out.R_coarse = support_radius(out.lambda_coarse, 1, q);     // = 1/2
    out.R_refined = std::pow(2.0, -(q - 2.0) / (q - 1.0));
    RadialGrid grid(N, 1.0);
    std::vector<double> v(N + 1);
    const double pref = q / std::pow(2.0, q + 1.0);
    for (std::size_t j = 0; j <= N; ++j) {
        const double x = grid.nodes[j];
        v[j] = pref * (std::pow(1.0 + x, q - 1.0) + std::pow(1.0 - x, q - 1.0));
    }
    out.profile = RadialProfile(grid, std::move(v));
    const double m = mass(out.profile, 1);
    for (double& val : out.profile.values) val /= m;
    return out;
}

double largeq_nd_coarse(int n, double q) {
    if (n < 2) throw config_error("coarse nD formula needs n >= 2");
    return Geometry(n).angular_prefactor() * std::pow(2.0, n + q - 3.0)
         * std::exp(lgamma_ratio_coarse(n, q));
}

RadialProfile largeq_nd_profile(int n, double q, const RadialGrid& grid) {
    if (n < 2) throw config_error("boundary-layer profile needs n >= 2");
    const double p = n + q - 2.0;
    std::vector<double> v(grid.nodes.size());
    for (std::size_t j = 0; j < grid.nodes.size(); ++j) {
        const double r = grid.nodes[j];
        auto f = [&](double t) {
            const double st = std::sin(t);
            const double root =
                std::sqrt(std::max(1.0 - r * r * st * st, 0.0));
            const double base = root - r * std::cos(t);
            const double ang = (n == 2) ? 1.0 : std::pow(st, n - 2);
            return ang * std::pow(base, p);
        };
        v[j] = gauss_integrate(f, 0.0, std::numbers::pi, 200);
    }
    RadialProfile prof(grid, std::move(v));
    const double m = mass(prof, n);
    for (double& val : prof.values) val /= m;
    return prof;
}

double largeq_nd_refined(int n, double q, std::size_t N) {
    RadialGrid grid(N, 1.0);
    const RadialProfile prof = largeq_nd_profile(n, q, grid);
    double t1_at_edge = 0.0;
    if (n == 3) {
        const auto w = internal::radial_row_weights(grid, N, 3, q);
        for (std::size_t j = 0; j <= N; ++j) t1_at_edge += w[j] * prof.values[j];
        t1_at_edge *= (n + q - 2.0) * Geometry(3).angular_prefactor();
    } else {
        ModelParams params{n, q, 1.0};
        const Eigen::MatrixXd A = assemble_T1(grid, params);
        const Eigen::Map<const Eigen::VectorXd> pv(prof.values.data(),
                                                   static_cast<Eigen::Index>(
                                                       prof.values.size()));
        t1_at_edge = A.row(A.rows() - 1).dot(pv);
    }
    return t1_at_edge / prof.values.back();
}

LargeQApprox largeq_nd(int n, double q, std::size_t N) {
    LargeQApprox out;
    out.lambda_coarse = largeq_nd_coarse(n, q);
    out.lambda_refined = largeq_nd_refined(n, q, N);
    out.R_coarse = support_radius(out.lambda_coarse, n, q);
    out.R_refined = support_radius(out.lambda_refined, n, q);
    out.profile = largeq_nd_profile(n, q, RadialGrid(N, 1.0));
    return out;
}

SmallEpsExpansion smalleps_limit_1d(std::size_t N, double tol,
                                    std::size_t max_sweeps) {
    // nodes on [-1,1], boundary values pinned to zero
    std::vector<double> nodes(N + 1);
    for (std::size_t j = 0; j <= N; ++j)
        nodes[j] = -1.0 + 2.0 * static_cast<double>(j) / static_cast<double>(N);
    const auto m = static_cast<Eigen::Index>(N - 1);
    const double h = 2.0 / static_cast<double>(N);

    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd x(m), wlog(m);
    const KernelTerm diff_kernel[] = {
        {SigmaKind::power, -1.0, 1.0, 0.0, TermGeom::abs_dist}};
    for (Eigen::Index k = 0; k < m; ++k) {
        const double xi = nodes[static_cast<std::size_t>(k) + 1];
        x(k) = xi;
        const auto w = product_weights(nodes, xi, diff_kernel, true);
        double rowsum = 0.0;
        for (double wv : w) rowsum += wv;
        for (Eigen::Index j = 0; j < m; ++j)
            A(k, j) = w[static_cast<std::size_t>(j) + 1];
        wlog(k) = std::log(1.0 - xi * xi);
        A(k, k) += -rowsum + wlog(k);
    }

    Eigen::VectorXd rho = (1.0 - x.array().square()).matrix();
    double sig = trapz(rho.cwiseProduct(wlog), h) / trapz(rho, h);
    SmallEpsExpansion out;
    out.n = 1;
    out.lambda0 = 2.0;
    out.lambda2 = std::numeric_limits<double>::quiet_NaN();
    bool done = false;
    for (std::size_t it = 1; it <= max_sweeps; ++it) {
        Eigen::MatrixXd S = A - sig * Eigen::MatrixXd::Identity(m, m);
        Eigen::VectorXd z = S.partialPivLu().solve(rho);
        z /= z.cwiseAbs().maxCoeff();
        if (z(m / 2) < 0.0) z = -z;
        const double new_sig = trapz(z.cwiseProduct(wlog), h) / trapz(z, h);
        const double step = (z - rho).cwiseAbs().maxCoeff();
        rho = z;
        out.iterations = it;
        if (step < tol && std::abs(new_sig - sig) < tol) {
            sig = new_sig;
            done = true;
            break;
        }
        sig = new_sig;
    }
    if (!done)
        throw solver_error("inverse iteration did not converge in "
                           + std::to_string(max_sweeps) + " sweeps");
    rho /= trapz(rho, h);
    out.lambda1 = trapz(rho.cwiseProduct(wlog), h) / trapz(rho, h);

    RadialGrid grid;
    grid.R_edge = 1.0;
    grid.nodes = nodes;
    std::vector<double> vals(N + 1, 0.0);
    for (Eigen::Index k = 0; k < m; ++k)
        vals[static_cast<std::size_t>(k) + 1] = rho(k);
    out.rho0 = RadialProfile(grid, std::move(vals));
    return out;
}

double smalleps_lambda2_1d(const SmallEpsExpansion& exp) {
    const auto& nodes = exp.rho0.grid.nodes;
    const std::size_t N = nodes.size() - 1;
    const double h = nodes[1] - nodes[0];
    const KernelTerm log_kernel[] = {
        {SigmaKind::power_log, -1.0, 1.0, 0.0, TermGeom::abs_dist}};
    Eigen::VectorXd R(static_cast<Eigen::Index>(N - 1)),
        rho(static_cast<Eigen::Index>(N - 1)),
        k2(static_cast<Eigen::Index>(N - 1));
    for (std::size_t k = 1; k < N; ++k) {
        const double xi = nodes[k];
        const auto w = product_weights(nodes, xi, log_kernel, true);
        double dot = 0.0, rowsum = 0.0;
        for (std::size_t j = 0; j <= N; ++j) {
            dot += w[j] * exp.rho0.values[j];
            rowsum += w[j];
        }
        const auto idx = static_cast<Eigen::Index>(k - 1);
        rho(idx) = exp.rho0.values[k];
        R(idx) = dot - rowsum * rho(idx);
        const double lm = std::log(1.0 - xi), lp = std::log(1.0 + xi);
        k2(idx) = 0.5 * (lm * lm + lp * lp);
    }
    const double term1 = trapz(R.cwiseProduct(rho), h);
    const double term2 = trapz(k2.cwiseProduct(rho).cwiseProduct(rho), h);
    return (term1 + term2) / trapz(rho.cwiseProduct(rho), h);
}

namespace {

// radial reductions of the n=3 difference kernels at field point r > 0:
//   int |y-x|^{-3} (.) dy   -> 2pi (s/r) (|r-s|^{-1} - (r+s)^{-1})
//   int ln|y-x| |y-x|^{-3}  -> same with the u^{-1} ln u primitive
std::vector<double> n3_diff_row(const std::vector<double>& nodes, double r,
                                SigmaKind kind) {
    const double two_pi = 2.0 * std::numbers::pi;
    std::vector<double> w;
    if (r == 0.0) {
        const KernelTerm terms[] = {{kind, -1.0, 2.0, 0.0, TermGeom::abs_dist}};
        w = product_weights(nodes, 0.0, terms, true);
    } else {
        const KernelTerm terms[] = {
            {kind, -1.0, 0.0, 1.0 / r, TermGeom::abs_dist},
            {kind, -1.0, 0.0, -1.0 / r, TermGeom::shifted}};
        w = product_weights(nodes, r, terms, true);
    }
    for (double& v : w) v *= two_pi;
    return w;
}

double k2_3d(double r) {
    auto f = [&](double t) {
        const double st = std::sin(t);
        const double root = std::sqrt(std::max(1.0 - r * r * st * st, 0.0));
        const double arg = std::max(root - r * std::cos(t), 1e-300);
        const double l = std::log(arg);
        return st * l * l;
    };
    return std::numbers::pi * gauss_integrate(f, 0.0, std::numbers::pi, 200);
}

}  // namespace

SmallEpsExpansion smalleps_limit_nd(int n, std::size_t N, double tol,
                                    std::size_t max_sweeps) {
    if (n != 3)
        throw config_error(
            "small-eps limit implemented for n in {1,3}; the n=2 singular "
            "regime has no explicit radial kernel");
    RadialGrid grid(N, 1.0);
    const auto& nodes = grid.nodes;
    const auto m = static_cast<Eigen::Index>(N);  // keep r=0, drop r=1
    const double two_pi = 2.0 * std::numbers::pi;

    Eigen::MatrixXd A(m, m);
    Eigen::VectorXd r(m), wlog(m);
    for (Eigen::Index k = 0; k < m; ++k) {
        const double ri = nodes[static_cast<std::size_t>(k)];
        r(k) = ri;
        const auto w = n3_diff_row(nodes, ri, SigmaKind::power);
        double rowsum = 0.0;
        for (double wv : w) rowsum += wv;
        for (Eigen::Index j = 0; j < m; ++j)
            A(k, j) = w[static_cast<std::size_t>(j)];
        wlog(k) = two_pi * std::log1p(-ri * ri);  // (n omega_n / 2) ln(1-r^2)
        A(k, k) += -rowsum + wlog(k);
    }

    // r^2-weighted quadrature for the quotient and normalization
    const KernelTerm r2_kernel[] = {
        {SigmaKind::power, 2.0, 1.0, 0.0, TermGeom::abs_dist}};
    const auto wr_full = product_weights(nodes, 0.0, r2_kernel);
    Eigen::VectorXd wr(m);
    for (Eigen::Index j = 0; j < m; ++j)
        wr(j) = wr_full[static_cast<std::size_t>(j)];

    Eigen::VectorXd rho = (1.0 - r.array().square()).matrix();
    auto quotient = [&](const Eigen::VectorXd& v) {
        return wr.dot(v.cwiseProduct(wlog)) / wr.dot(v);
    };
    double sig = quotient(rho);
    SmallEpsExpansion out;
    out.n = n;
    out.lambda0 = Geometry(n).sphere_area();
    out.lambda2 = std::numeric_limits<double>::quiet_NaN();
    bool done = false;
    for (std::size_t it = 1; it <= max_sweeps; ++it) {
        Eigen::MatrixXd S = A - sig * Eigen::MatrixXd::Identity(m, m);
        Eigen::VectorXd z = S.partialPivLu().solve(rho);
        z /= z.cwiseAbs().maxCoeff();
        if (z(0) < 0.0) z = -z;
        const double new_sig = quotient(z);
        const double step = (z - rho).cwiseAbs().maxCoeff();
        rho = z;
        out.iterations = it;
        if (step < tol && std::abs(new_sig - sig) < tol) {
            sig = new_sig;
            done = true;
            break;
        }
        sig = new_sig;
    }
    if (!done)
        throw solver_error("inverse iteration did not converge in "
                           + std::to_string(max_sweeps) + " sweeps");
    rho /= 2.0 * two_pi * wr.dot(rho);  // unit mass: 4pi int r^2 rho
    out.lambda1 = quotient(rho);

    std::vector<double> vals(N + 1, 0.0);
    for (Eigen::Index k = 0; k < m; ++k)
        vals[static_cast<std::size_t>(k)] = rho(k);
    out.rho0 = RadialProfile(grid, std::move(vals));
    return out;
}

double smalleps_lambda2_nd(const SmallEpsExpansion& exp) {
    if (exp.n != 3)
        throw config_error("lambda2 implemented for n in {1,3}");
    const auto& nodes = exp.rho0.grid.nodes;
    const std::size_t N = nodes.size() - 1;
    const auto m = static_cast<Eigen::Index>(N);
    Eigen::VectorXd R(m), rho(m), k2(m), wr(m);

    const KernelTerm r2_kernel[] = {
        {SigmaKind::power, 2.0, 1.0, 0.0, TermGeom::abs_dist}};
    const auto wr_full = product_weights(nodes, 0.0, r2_kernel);
    for (std::size_t k = 0; k < N; ++k) {
        const double ri = nodes[k];
        const auto w = n3_diff_row(nodes, ri, SigmaKind::power_log);
        double dot = 0.0, rowsum = 0.0;
        for (std::size_t j = 0; j <= N; ++j) {
            dot += w[j] * exp.rho0.values[j];
            rowsum += w[j];
        }
        const auto idx = static_cast<Eigen::Index>(k);
        rho(idx) = exp.rho0.values[k];
        R(idx) = dot - rowsum * rho(idx);
        k2(idx) = k2_3d(ri);
        wr(idx) = wr_full[k];
    }
    const double num = wr.dot(R.cwiseProduct(rho))
                     + wr.dot(k2.cwiseProduct(rho).cwiseProduct(rho));
    const double den = wr.dot(rho.cwiseProduct(rho));
    return num / den;
}

BoundaryFit boundary_scaling_fit(const std::vector<double>& eps,
                                 const std::vector<double>& rho_edge,
                                 const std::vector<double>& rho_centre) {
    if (eps.size() < 4 || eps.size() != rho_edge.size()
        || eps.size() != rho_centre.size())
        throw config_error("boundary fit needs >= 4 matching samples");
    const std::size_t k = eps.size();
    BoundaryFit fit;

    // edge^2 = a * eps, least squares in a
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        num += rho_edge[i] * rho_edge[i] * eps[i];
        den += eps[i] * eps[i];
    }
    fit.a = num / den;

    auto linear_fit = [&](const std::vector<double>& y, double& b, double& c) {
        double se = 0.0, se2 = 0.0, sy = 0.0, sey = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            se += eps[i];
            se2 += eps[i] * eps[i];
            sy += y[i];
            sey += eps[i] * y[i];
        }
        const double det = k * se2 - se * se;
        b = (se2 * sy - se * sey) / det;
        c = (k * sey - se * sy) / det;
    };
    linear_fit(rho_centre, fit.b, fit.c);

    double lb = 0.0, lc = 0.0;
    linear_fit(rho_edge, lb, lc);
    double ss_sqrt = 0.0, ss_lin = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double ds = rho_edge[i] - std::sqrt(fit.a * eps[i]);
        const double dl = rho_edge[i] - (lb + lc * eps[i]);
        ss_sqrt += ds * ds;
        ss_lin += dl * dl;
    }
    fit.sqrt_residual = std::sqrt(ss_sqrt / k);
    fit.linear_residual = std::sqrt(ss_lin / k);
    return fit;
}

}  // namespace aggeq
