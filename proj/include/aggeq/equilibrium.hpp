#ifndef AGGEQ_EQUILIBRIUM_HPP
#define AGGEQ_EQUILIBRIUM_HPP

#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "aggeq/model.hpp"

// Steady states. The scaling-invariant eigenproblem on the unit ball,
//
//   (T1 rho)(r) = (n+q-2) * c_n * int_0^1 r'^{n-1} I(r,r') rho(r') dr' ,
//
// has a unique positive eigenpair (lambda, rho1); the support radius of the
// mass-M steady state is R = lambda^{-1/(n+q-2)} and the state itself is
// c * rho1(r/R). For n=1 the operator folds onto [0,1] as
// (q-1) int_0^1 (|r-r'|^{q-2} + (r+r')^{q-2}) rho dr'.

namespace aggeq {

struct EigenSolution {
    double lambda = 0.0;
    RadialProfile rho1;      // sup-normalized eigenfunction on [0,1]
    double R = 0.0;          // support radius lambda^{-1/(n+q-2)}
    std::size_t iterations = 0;
    double residual = 0.0;   // ||A rho1 - lambda rho1||_inf / ||rho1||_inf
    bool converged = false;
};

// Dense collocation matrix of T1 on the grid nodes. Quadrature is exact for
// piecewise-linear densities when n is 1 or 3 (closed-form moments, valid in
// the weakly singular range too); n=2 integrates the tabulated kernel with
// per-segment Gauss rules split at the diagonal.
Eigen::MatrixXd assemble_T1(const RadialGrid& grid, const ModelParams& params);

// Power iteration with sup-norm normalization. Stops when both the
// successive-iterate distance and the eigen-residual pass; residual at
// convergence is below 10*tol*lambda. Empty initial means rho == 1.
EigenSolution power_method(const Eigen::MatrixXd& A, const RadialGrid& grid,
                           int n, double q,
                           std::vector<double> initial = {},
                           double tol = 1e-10, std::size_t max_iter = 5000);

double support_radius(double lambda, int n, double q);

// mass-M steady state on [0,R]
RadialProfile scale_to_mass(const EigenSolution& sol, const ModelParams& params);

enum class Monotonicity { decreasing, constant, increasing };

struct MonotonicityVerdict {
    Monotonicity expected;
    bool ok = false;
    std::size_t first_violation = 0;  // node index, valid when !ok
};

// q<2 profiles decrease in r, q=2 are constant, q>2 increase
MonotonicityVerdict check_monotonicity(const RadialProfile& profile, double q,
                                       double tol = 1e-10);

struct Equilibrium {
    EigenSolution eig;
    RadialProfile profile;  // on [0,R], mass M
};

Equilibrium steady_state(const ModelParams& params, std::size_t N,
                         double tol = 1e-10, std::size_t max_iter = 5000);

}  // namespace aggeq

#endif
