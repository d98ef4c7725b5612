#ifndef AGGEQ_QUADRATURE_HPP
#define AGGEQ_QUADRATURE_HPP

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

// Product-integration toolkit. Integrals of the form
//
//     int  f(x) * sigma(u(x)) * hat_j(x) dx,    u = |c-x|, c+x
//
// with sigma(u) = u^p or u^p ln u and f linear, are evaluated exactly from
// closed-form antiderivatives. This is what makes every kernel quadrature
// in the artifact exact for piecewise-linear densities, including the
// weakly singular exponents (p <= 0) where plain trapezoid degrades.

namespace aggeq {

enum class SigmaKind { power, power_log };

// geometry of the kernel argument relative to the row point c
enum class TermGeom {
    abs_dist,    // sigma(|c-x|)
    shifted,     // sigma(c+x)
    signed_abs,  // sign(c-x) * sigma(|c-x|)
};

struct KernelTerm {
    SigmaKind kind = SigmaKind::power;
    double p = 0.0;       // sigma exponent
    double h0 = 1.0;      // linear prefactor h(x) = h0 + h1*x
    double h1 = 0.0;
    TermGeom geom = TermGeom::abs_dist;
};

// antiderivative of u^{p+k} (optionally * ln u); vanishes at u=0 when p+k > -1
double sigma_primitive(SigmaKind kind, double p, int k, double u);

// int_{ua}^{ub} (c0 + c1 u + c2 u^2) sigma(u) du for 0 <= ua < ub.
// Divergent moments (nonzero coefficient against p+k <= -1 down to ua=0)
// throw solver_error.
double segment_quad(SigmaKind kind, double p, double c0, double c1, double c2,
                    double ua, double ub);

// Weights W_j with sum_j W_j rho_j = int sum_terms h(x) sigma(u(x)) rho_PL(x) dx,
// exact for piecewise-linear rho on the given nodes. With drop_center the hat
// centered at the node equal to c gets weight zero; difference kernels
// sum_j W_j (rho_j - rho_i) then stay finite for p down to -1 (power) since
// the adjacent hats vanish linearly at c.
std::vector<double> product_weights(std::span<const double> nodes, double c,
                                    std::span<const KernelTerm> terms,
                                    bool drop_center = false);

struct GaussRule {
    std::vector<double> x;  // nodes on [-1,1]
    std::vector<double> w;
};

// Gauss-Legendre rule, computed once per order and cached.
const GaussRule& gauss_legendre(std::size_t order);

// int_a^b f with an m-point rule mapped to [a,b]
template <typename F>
double gauss_integrate(F&& f, double a, double b, std::size_t order = 64) {
    const GaussRule& g = gauss_legendre(order);
    const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < g.x.size(); ++i)
        acc += g.w[i] * f(mid + half * g.x[i]);
    return half * acc;
}

// doubles the order until two successive values agree to rel_tol
template <typename F>
double adaptive_gauss(F&& f, double a, double b, double rel_tol = 1e-12,
                      std::size_t start_order = 64) {
    double prev = gauss_integrate(f, a, b, start_order);
    for (std::size_t m = 2 * start_order; m <= 4096; m *= 2) {
        const double cur = gauss_integrate(f, a, b, m);
        const double scale = std::abs(cur) > 1e-300 ? std::abs(cur) : 1.0;
        if (std::abs(cur - prev) <= rel_tol * scale) return cur;
        prev = cur;
    }
    return prev;
}

}  // namespace aggeq

#endif
