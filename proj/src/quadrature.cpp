#include "aggeq/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "aggeq/model.hpp"

namespace aggeq {

double sigma_primitive(SigmaKind kind, double p, int k, double u) {
    const double m = p + k;
    if (kind == SigmaKind::power) {
        if (m == -1.0) return std::log(u);
        return std::pow(u, m + 1.0) / (m + 1.0);
    }
    if (m == -1.0) {
        const double l = std::log(u);
        return 0.5 * l * l;
    }
    return std::pow(u, m + 1.0) * (std::log(u) - 1.0 / (m + 1.0)) / (m + 1.0);
}

double segment_quad(SigmaKind kind, double p, double c0, double c1, double c2,
                    double ua, double ub) {
    double acc = 0.0;
    const double coef[3] = {c0, c1, c2};
    for (int k = 0; k < 3; ++k) {
        if (coef[k] == 0.0) continue;
        if (ua == 0.0) {
            if (p + k <= -1.0)
                throw solver_error("divergent singular moment");
            acc += coef[k] * sigma_primitive(kind, p, k, ub);  // primitive -> 0 at 0
        } else {
            acc += coef[k] * (sigma_primitive(kind, p, k, ub)
                            - sigma_primitive(kind, p, k, ua));
        }
    }
    return acc;
}

std::vector<double> product_weights(std::span<const double> nodes, double c,
                                    std::span<const KernelTerm> terms,
                                    bool drop_center) {
    const std::size_t N = nodes.size() - 1;
    std::vector<double> W(N + 1, 0.0);

    for (std::size_t j = 0; j < N; ++j) {
        const double a = nodes[j], b = nodes[j + 1];
        // hat_j falls 1->0 on [a,b], hat_{j+1} rises 0->1
        for (int side = 0; side < 2; ++side) {
            const std::size_t jj = j + side;
            const double va = side == 0 ? 1.0 : 0.0;
            const double vb = side == 0 ? 0.0 : 1.0;
            if (drop_center && std::abs(nodes[jj] - c) < 1e-15) continue;

            for (const KernelTerm& t : terms) {
                if (t.geom == TermGeom::shifted) {
                    // u = c+x: hat = Au + Bu*u, h = H0 + H1*u
                    const double Bu = (vb - va) / (b - a);
                    const double Au = va - Bu * a - Bu * c;
                    const double H0 = t.h0 - t.h1 * c, H1 = t.h1;
                    W[jj] += segment_quad(t.kind, t.p, Au * H0,
                                          Au * H1 + Bu * H0, Bu * H1,
                                          c + a, c + b);
                    continue;
                }
                // split at c if it lies inside the segment
                struct Piece { double ua, ub, fa, fb; int sgn; };
                Piece pieces[2];
                int np = 0;
                if (c <= a) {
                    pieces[np++] = {a - c, b - c, va, vb, +1};
                } else if (c >= b) {
                    pieces[np++] = {c - b, c - a, vb, va, -1};
                } else {
                    const double vc = va + (vb - va) * (c - a) / (b - a);
                    pieces[np++] = {0.0, c - a, vc, va, -1};
                    pieces[np++] = {0.0, b - c, vc, vb, +1};
                }
                for (int ip = 0; ip < np; ++ip) {
                    const Piece& pc = pieces[ip];
                    if (pc.ub <= pc.ua) continue;
                    const double B = (pc.fb - pc.fa) / (pc.ub - pc.ua);
                    const double A = pc.fa - B * pc.ua;  // hat = A + B u
                    double H0 = t.h0 + t.h1 * c;
                    double H1 = static_cast<double>(pc.sgn) * t.h1;
                    double sfac = 1.0;
                    if (t.geom == TermGeom::signed_abs)
                        sfac = static_cast<double>(-pc.sgn);  // sign(c-x)
                    double c0 = sfac * A * H0;
                    double c1 = sfac * (A * H1 + B * H0);
                    double c2 = sfac * B * H1;
                    if (pc.ua == 0.0 && t.p <= -1.0) {
                        // difference kernels: the coefficient against the
                        // divergent moment must vanish (hat or h zero at c)
                        c0 = 0.0;
                        if (t.p + 1.0 <= -1.0) c1 = 0.0;
                    }
                    W[jj] += segment_quad(t.kind, t.p, c0, c1, c2, pc.ua, pc.ub);
                }
            }
        }
    }
    return W;
}

namespace {

GaussRule make_gauss(std::size_t m) {
    GaussRule g;
    g.x.resize(m);
    g.w.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        // Newton from the Chebyshev-like initial guess
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= m; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = pk;
            }
            const double dp = m * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        double p0 = 1.0, p1 = x;
        for (std::size_t k = 2; k <= m; ++k) {
            const double pk = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = pk;
        }
        const double dp = m * (x * p1 - p0) / (x * x - 1.0);
        g.x[m - 1 - i] = x;
        g.w[m - 1 - i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return g;
}

}  // namespace

const GaussRule& gauss_legendre(std::size_t order) {
    static std::map<std::size_t, GaussRule> cache;
    static std::mutex mu;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(order);
    if (it == cache.end())
        it = cache.emplace(order, make_gauss(order)).first;
    return it->second;
}

}  // namespace aggeq
