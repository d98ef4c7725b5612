#include "aggeq/model.hpp"

#include <algorithm>

namespace aggeq {

Regime classify_regime(const ModelParams& p) {
    return (p.q <= 3.0 - p.n) ? Regime::singular : Regime::regular;
}

ModelParams validate(const ModelParams& p) {
    if (p.n < 1)
        throw config_error("dimension must be >= 1");
    if (!(p.M > 0.0))
        throw config_error("total mass must be positive");
    if (!(p.q > 2.0 - p.n))
        throw config_error("attraction exponent q must exceed 2-n");
    if (p.n > 3 && p.q < 2.0)
        throw config_error("dimensions above three supported only for q >= 2");
    if (p.n == 2 && classify_regime(p) == Regime::singular)
        throw config_error(
            "singular regime q in (0,1] unsupported in dimension two "
            "(no explicit radial kernel)");
    return p;
}

RadialGrid::RadialGrid(std::size_t N, double R) : R_edge(R), nodes(N + 1) {
    if (N == 0)
        throw config_error("grid needs at least one segment");
    for (std::size_t j = 0; j <= N; ++j)
        nodes[j] = R * static_cast<double>(j) / static_cast<double>(N);
    nodes[N] = R;
}

std::vector<double> RadialGrid::trapezoid_weights() const {
    std::vector<double> w(nodes.size(), 0.0);
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        const double half = 0.5 * (nodes[j + 1] - nodes[j]);
        w[j] += half;
        w[j + 1] += half;
    }
    return w;
}

RadialProfile::RadialProfile(RadialGrid g, std::vector<double> v)
    : grid(std::move(g)), values(std::move(v)) {
    if (grid.nodes.size() != values.size())
        throw config_error("profile values do not match grid");
}

namespace {

// exact integral of r^k * (piecewise-linear rho) over one segment, k in {0,1,2}
double segment_moment(int k, double a, double b, double pa, double pb) {
    const double h = b - a;
    if (h <= 0.0) return 0.0;
    const double slope = (pb - pa) / h;
    const double c0 = pa - slope * a;
    auto ipow = [](double x, int m) {
        double r = 1.0;
        for (int i = 0; i < m; ++i) r *= x;
        return r;
    };
    return c0 * (ipow(b, k + 1) - ipow(a, k + 1)) / (k + 1)
         + slope * (ipow(b, k + 2) - ipow(a, k + 2)) / (k + 2);
}

}  // namespace

double mass_nodes(const std::vector<double>& r, const std::vector<double>& v,
                  int n) {
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < r.size(); ++j)
        acc += segment_moment(n - 1, r[j], r[j + 1], v[j], v[j + 1]);
    return (n == 1) ? 2.0 * acc : Geometry(n).sphere_area() * acc;
}

double mass(const RadialProfile& profile, int n) {
    return mass_nodes(profile.grid.nodes, profile.values, n);
}

double mass_trapezoid(const RadialProfile& profile, int n) {
    const auto& r = profile.grid.nodes;
    const auto& v = profile.values;
    const auto w = profile.grid.trapezoid_weights();
    double acc = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j)
        acc += w[j] * std::pow(r[j], n - 1) * v[j];
    return (n == 1) ? 2.0 * acc : Geometry(n).sphere_area() * acc;
}

}  // namespace aggeq
