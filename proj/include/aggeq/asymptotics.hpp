#ifndef AGGEQ_ASYMPTOTICS_HPP
#define AGGEQ_ASYMPTOTICS_HPP

#include <cstddef>
#include <vector>

#include "aggeq/model.hpp"

// Two asymptotic regimes used to cross-check the eigensolver.
//
// Large q: the operator mass concentrates at |y| = 1, giving closed-form
// approximations of lambda and R plus an explicit boundary-layer profile.
// Small eps = n+q-2: lambda = lambda0 + lambda1 eps + lambda2 eps^2 + ...
// with the O(eps) equation solved by inverse iteration for the limiting
// profile rho0 (which vanishes on the boundary) and lambda2 recovered from
// the solvability condition of the O(eps^2) equation.

namespace aggeq {

struct LargeQApprox {
    double lambda_coarse = 0.0;
    double lambda_refined = 0.0;
    double R_coarse = 0.0;
    double R_refined = 0.0;
    RadialProfile profile;  // on [0,1], unit mass
};

// coarse lambda = 2^{q-1}, refined 2^{q-2}; profile
// (q/2^{q+1}) ((1+x)^{q-1} + (1-x)^{q-1})
LargeQApprox largeq_1d(double q, std::size_t N = 400);

// lambda = (n-1) omega_{n-1} 2^{n+q-3} Gamma((n-1)/2) Gamma((n+q-1)/2)
//          / Gamma(n-1+q/2)
double largeq_nd_coarse(int n, double q);

// rho(r) proportional to
// int_0^pi sin^{n-2}t (sqrt(1-r^2 sin^2 t) - r cos t)^{n+q-2} dt, unit mass
RadialProfile largeq_nd_profile(int n, double q, const RadialGrid& grid);

// one more application of the operator to the boundary-layer profile,
// evaluated at r=1: the second power-method iterate
double largeq_nd_refined(int n, double q, std::size_t N = 400);

LargeQApprox largeq_nd(int n, double q, std::size_t N = 400);

struct SmallEpsExpansion {
    int n = 1;
    double lambda0 = 0.0;   // 2 in 1D, n omega_n otherwise
    double lambda1 = 0.0;
    double lambda2 = 0.0;   // NaN until the solvability step runs
    RadialProfile rho0;     // 1D: on [-1,1]; nD: on [0,1]; zero boundary
    std::size_t iterations = 0;

    double lambda_at(double eps) const {
        return lambda0 + lambda1 * eps + lambda2 * eps * eps;
    }
};

// O(eps) eigenproblem int |y-x|^{-n} (rho0(y) - rho0(x)) dy
//   = (lambda1 - w(x)) rho0(x),  w = ln(1-x^2) (1D), (n omega_n/2) ln(1-r^2),
// solved by inverse iteration with imposed boundary zeros
SmallEpsExpansion smalleps_limit_1d(std::size_t N = 400, double tol = 1e-11,
                                    std::size_t max_sweeps = 200);
SmallEpsExpansion smalleps_limit_nd(int n, std::size_t N = 400,
                                    double tol = 1e-11,
                                    std::size_t max_sweeps = 200);

// lambda2 from orthogonality of the O(eps^2) right-hand side against rho0
double smalleps_lambda2_1d(const SmallEpsExpansion& exp);
double smalleps_lambda2_nd(const SmallEpsExpansion& exp);

struct BoundaryFit {
    double a = 0.0;  // rho1_eps(edge) ~ sqrt(a eps)
    double b = 0.0;  // rho1_eps(centre) ~ b + c eps
    double c = 0.0;
    double sqrt_residual = 0.0;    // rms of the sqrt fit at the edge
    double linear_residual = 0.0;  // rms of a pure linear fit at the edge
};

// least-squares fits of the solver's boundary/centre values across eps
BoundaryFit boundary_scaling_fit(const std::vector<double>& eps,
                                 const std::vector<double>& rho_edge,
                                 const std::vector<double>& rho_centre);

}  // namespace aggeq

#endif
