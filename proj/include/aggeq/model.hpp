#ifndef AGGEQ_MODEL_HPP
#define AGGEQ_MODEL_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

// Shared model parameters, geometric constants, grids and radial profiles
// for the aggregation equation  rho_t - div(rho grad K*rho) = 0  with
// K = Newtonian repulsion + |x|^q/q attraction.

namespace aggeq {

class config_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class solver_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class Regime { regular, singular };

struct ModelParams {
    int n = 3;         // space dimension
    double q = 2.0;    // attraction exponent, admissible for q > 2-n
    double M = 1.0;    // total mass

    // epsilon = alpha = n+q-2; the operator strength and the small parameter
    // of the q -> 2-n expansion.
    double epsilon() const { return n + q - 2.0; }
};

// Singular quadrature regime: q in (2-n, 3-n], where the radial kernel
// blows up on the diagonal. Explicit kernels exist only for n=1 and n=3.
Regime classify_regime(const ModelParams& p);

// Throws config_error for q <= 2-n, M <= 0, unsupported n, or the
// singular regime in dimension two.
ModelParams validate(const ModelParams& p);

struct Geometry {
    int n;
    explicit Geometry(int dim) : n(dim) {}

    // volume of the unit ball
    double omega_n() const {
        switch (n) {
            case 1: return 2.0;
            case 2: return std::numbers::pi;
            case 3: return 4.0 * std::numbers::pi / 3.0;
            default: {
                double g = std::tgamma(n / 2.0 + 1.0);
                return std::pow(std::numbers::pi, n / 2.0) / g;
            }
        }
    }
    double sphere_area() const { return n * omega_n(); }

    // int_0^pi sin^{n-2} dtheta (n >= 2)
    double angular_norm() const {
        return std::sqrt(std::numbers::pi) * std::tgamma((n - 1) / 2.0)
             / std::tgamma(n / 2.0);
    }
    // n omega_n / angular_norm = (n-1) omega_{n-1}; 2pi for n=3, 2 for n=2
    double angular_prefactor() const { return sphere_area() / angular_norm(); }
};

struct RadialGrid {
    double R_edge = 1.0;
    std::vector<double> nodes;   // uniform, nodes[0]=0, nodes[N]=R_edge

    RadialGrid() = default;
    RadialGrid(std::size_t N, double R);

    std::size_t segments() const { return nodes.size() - 1; }
    double h() const { return nodes.size() > 1 ? nodes[1] - nodes[0] : 0.0; }
    std::vector<double> trapezoid_weights() const;
};

struct RadialProfile {
    RadialGrid grid;
    std::vector<double> values;

    RadialProfile() = default;
    RadialProfile(RadialGrid g, std::vector<double> v);
};

// Total mass of the radial profile under even (n=1) or spherical (n>=2)
// extension. Integrates r^{n-1} rho exactly for the piecewise-linear
// representation; see mass_trapezoid for the plain rule.
double mass(const RadialProfile& profile, int n);
double mass_trapezoid(const RadialProfile& profile, int n);

// same exact integral on raw node/value arrays (particle states)
double mass_nodes(const std::vector<double>& r, const std::vector<double>& v,
                  int n);

}  // namespace aggeq

#endif
