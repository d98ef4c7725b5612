#include "aggeq/kernels.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

#include "aggeq/quadrature.hpp"

namespace aggeq {

namespace {

double beta_fn(double a, double b) {
    return std::exp(std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b));
}

// a^q - b^q without cancellation, a >= b >= 0
double pow_diff(double a, double b, double q) {
    if (b <= 0.0) return std::pow(a, q);
    return std::pow(b, q) * std::expm1(q * std::log(a / b));
}

// D_p(s) = ((1+s)^p - (1-s)^p)/s, D_p(0) = 2p
double D(double p, double s) {
    if (s == 0.0) return 2.0 * p;
    return pow_diff(1.0 + s, 1.0 - s, p) / s;
}

double I1_closed_3d(double s, double q) {
    if (s >= 1.0) {
        if (q <= 0.0)
            throw solver_error("I1 diverges at s=1 for q <= 3-n");
        return std::pow(2.0, q) / q;  // (2^q - 0)/q
    }
    if (q == 0.0) {
        if (s == 0.0) return 2.0;
        return std::log((1.0 + s) / (1.0 - s)) / s;
    }
    return D(q, s) / q;
}

double I2_closed_3d(double s, double q) {
    return 0.5 * (D(q + 2.0, s) / (q + 2.0)
                + (1.0 - s * s) * I1_closed_3d(std::min(s, 1.0 - 1e-300), q == 0.0 ? 0.0 : q));
}

// I3 = d/ds[D_{q+2}(s)]/(q(q+2)) with the divided binomial series near s=0
double I3_closed_3d(double s, double q) {
    const double p = q + 2.0;
    if (s < 0.01) {
        // coefficients C(p,k)/(p(p-2)) for odd k, the p and p-2 factors cancel
        double acc = 0.0;
        for (int k = 3; k <= 9; k += 2) {
            double ck = (p - 1.0);
            for (int j = 3; j <= k - 1; ++j) ck *= (p - j);
            double fact = 1.0;
            for (int j = 2; j <= k; ++j) fact *= j;
            acc += 2.0 * (k - 1) * (ck / fact) * std::pow(s, k - 2);
        }
        return acc;
    }
    if (q == 0.0) {
        const double P = (1.0 + s) * (1.0 + s) * (2.0 * std::log1p(s) - 1.0);
        const double Q = (1.0 - s) * (1.0 - s) * (2.0 * std::log1p(-s) - 1.0);
        const double Lp = -(P - Q) / (2.0 * s * s)
            + 2.0 / s * ((1.0 + s) * std::log1p(s) + (1.0 - s) * std::log1p(-s));
        return 0.5 * Lp;
    }
    const double A = std::pow(1.0 + s, p - 1.0);
    const double B = std::pow(1.0 - s, p - 1.0);
    return (p * (A + B) - D(p, s)) / (s * q * (q + 2.0));
}

double theta_integral(double s, int n, double q, int variant) {
    // variant 0: I1, 1: I2, 2: I3
    auto f = [&](double t) {
        const double c = std::cos(t);
        const double base = std::pow(1.0 + s * s - 2.0 * s * c, 0.5 * q - 1.0);
        double extra = 1.0;
        if (variant == 1) extra = 1.0 - s * c;
        if (variant == 2) extra = s - c;
        const double ang = (n == 2) ? 1.0 : std::pow(std::sin(t), n - 2);
        return base * extra * ang;
    };
    return adaptive_gauss(f, 0.0, std::numbers::pi, 1e-12, 64);
}

}  // namespace

double I1_at_one(int n, double q) {
    if (!(q > 3.0 - n))
        throw solver_error("I1 diverges at s=1 for q <= 3-n");
    return std::pow(2.0, n + q - 4.0) * beta_fn(0.5 * (q + n - 3.0), 0.5 * (n - 1.0));
}

double I2_at_one(int n, double q) {
    return std::pow(2.0, n + q - 3.0) * beta_fn(0.5 * (q + n - 1.0), 0.5 * (n - 1.0));
}

double eval_I1(double s, int n, double q) {
    if (n == 3) return I1_closed_3d(s, q);
    if (n < 2) throw config_error("I1 defined for n >= 2");
    if (s >= 1.0) return I1_at_one(n, q);
    return theta_integral(s, n, q, 0);
}

double eval_I2(double s, int n, double q) {
    if (n == 3) return I2_closed_3d(s, q);
    if (n < 2) throw config_error("I2 defined for n >= 2");
    if (s >= 1.0) return I2_at_one(n, q);
    return theta_integral(s, n, q, 1);
}

double eval_I3(double s, int n, double q) {
    if (n == 3) return I3_closed_3d(s, q);
    if (n < 2) throw config_error("I3 defined for n >= 2");
    if (s >= 1.0) return I2_at_one(n, q);  // (s-cos) == (1-cos) at s=1
    return theta_integral(s, n, q, 2);
}

double eval_I_explicit_3d(double r, double r_prime, double q) {
    const double hi = std::max(r, r_prime), lo = std::min(r, r_prime);
    if (hi == 0.0) {
        if (q >= 2.0) return (q == 2.0) ? 2.0 : 0.0;
        throw solver_error("I(0,0) undefined for q < 2");
    }
    if (lo == 0.0) return 2.0 * std::pow(hi, q - 2.0);
    if (r == r_prime && q <= 0.0)
        return std::numeric_limits<double>::infinity();  // singular diagonal
    if (q == 0.0)
        return std::log((r + r_prime) / std::abs(r - r_prime)) / (r * r_prime);
    return pow_diff(r + r_prime, std::abs(r - r_prime), q) / (q * r * r_prime);
}

double eval_I(double r, double r_prime, int n, double q) {
    if (n == 3) return eval_I_explicit_3d(r, r_prime, q);
    if (n == 1) {
        // folded even-extension kernel
        return std::pow(std::abs(r - r_prime), q - 2.0)
             + std::pow(r + r_prime, q - 2.0);
    }
    const double hi = std::max(r, r_prime), lo = std::min(r, r_prime);
    if (hi == 0.0) {
        if (q >= 2.0) return (q == 2.0) ? Geometry(n).angular_norm() : 0.0;
        throw solver_error("I(0,0) undefined for q < 2");
    }
    return std::pow(hi, q - 2.0) * eval_I1(lo / hi, n, q);
}

AngularTable::AngularTable(int n, double q, std::size_t uniform_nodes)
    : n_(n), q_(q) {
    if (n < 2) throw config_error("angular tables need n >= 2");
    const std::size_t m = uniform_nodes;
    s_.reserve(m + 24);
    const double step = 1.0 / static_cast<double>(m - 1);
    for (std::size_t j = 0; j + 1 < m; ++j) s_.push_back(j * step);
    // graded cluster toward the diagonal where I1 steepens
    for (int j = 1; j <= 20; ++j) {
        const double d = step * std::pow(0.5, j);
        s_.push_back(1.0 - d);
    }
    s_.push_back(1.0);
    std::sort(s_.begin(), s_.end());

    const bool i1_finite = q > 3.0 - n;
    I1_.resize(s_.size());
    I2_.resize(s_.size());
    I3_.resize(s_.size());
    for (std::size_t j = 0; j < s_.size(); ++j) {
        const double s = s_[j];
        if (s >= 1.0 && !i1_finite)
            I1_[j] = std::numeric_limits<double>::infinity();
        else
            I1_[j] = eval_I1(s, n, q);
        I2_[j] = eval_I2(s, n, q);
        I3_[j] = eval_I3(s, n, q);
    }
}

double AngularTable::interp(const std::vector<double>& vals, double s) const {
    if (s <= 0.0) return vals.front();
    if (s >= 1.0) return vals.back();
    auto it = std::upper_bound(s_.begin(), s_.end(), s);
    std::size_t k = static_cast<std::size_t>(it - s_.begin());
    // 4-point Lagrange around the bracketing interval
    std::size_t lo = (k >= 2) ? k - 2 : 0;
    if (lo + 4 > s_.size()) lo = s_.size() - 4;
    double acc = 0.0;
    for (std::size_t i = lo; i < lo + 4; ++i) {
        double li = 1.0;
        for (std::size_t jj = lo; jj < lo + 4; ++jj)
            if (jj != i) li *= (s - s_[jj]) / (s_[i] - s_[jj]);
        acc += li * vals[i];
    }
    return acc;
}

namespace internal {

// weights for int_0^R r'^{n-1} I(r_i, r') rho_PL(r') dr', exact, n in {1,3}
std::vector<double> radial_row_weights(const RadialGrid& grid, std::size_t i,
                                       int n, double q) {
    const auto& nodes = grid.nodes;
    const double c = nodes[i];
    std::vector<KernelTerm> terms;
    if (n == 1) {
        terms = {{SigmaKind::power, q - 2.0, 1.0, 0.0, TermGeom::abs_dist},
                 {SigmaKind::power, q - 2.0, 1.0, 0.0, TermGeom::shifted}};
    } else if (n == 3) {
        if (c == 0.0) {
            terms = {{SigmaKind::power, q, 2.0, 0.0, TermGeom::abs_dist}};
        } else if (q != 0.0) {
            terms = {{SigmaKind::power, q, 0.0, 1.0 / (q * c), TermGeom::shifted},
                     {SigmaKind::power, q, 0.0, -1.0 / (q * c), TermGeom::abs_dist}};
        } else {
            terms = {{SigmaKind::power_log, 0.0, 0.0, 1.0 / c, TermGeom::shifted},
                     {SigmaKind::power_log, 0.0, 0.0, -1.0 / c, TermGeom::abs_dist}};
        }
    } else {
        throw config_error("exact radial weights exist only for n in {1,3}");
    }
    return product_weights(nodes, c, terms);
}

}  // namespace internal

std::vector<double> singular_row_weights(const RadialGrid& grid, std::size_t i,
                                         int n, double q) {
    if (n != 1 && n != 3)
        throw config_error("singular quadrature restricted to n in {1,3}");
    if (!(q > 2.0 - n) || q > 3.0 - n)
        throw config_error("q outside the singular range (2-n, 3-n]");
    return internal::radial_row_weights(grid, i, n, q);
}

}  // namespace aggeq
