#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "aggeq/model.hpp"
#include "aggeq/quadrature.hpp"

using namespace aggeq;

TEST_CASE("sigma primitives") {
    // u^p: u^{p+1}/(p+1)
    CHECK(sigma_primitive(SigmaKind::power, 1.5, 0, 2.0)
          == doctest::Approx(std::pow(2.0, 2.5) / 2.5).epsilon(1e-14));
    // p+k = -1 gives ln u
    CHECK(sigma_primitive(SigmaKind::power, -1.0, 0, 3.0)
          == doctest::Approx(std::log(3.0)).epsilon(1e-14));
    // u^p ln u: u^{p+1}(ln u/(p+1) - 1/(p+1)^2)
    {
        const double p = 0.5, u = 2.0;
        const double expect = std::pow(u, p + 1)
            * (std::log(u) / (p + 1) - 1.0 / ((p + 1) * (p + 1)));
        CHECK(sigma_primitive(SigmaKind::power_log, p, 0, u)
              == doctest::Approx(expect).epsilon(1e-14));
    }
    // ln u / u integrates to ln^2 u / 2
    CHECK(sigma_primitive(SigmaKind::power_log, -1.0, 0, 2.0)
          == doctest::Approx(0.5 * std::log(2.0) * std::log(2.0))
                 .epsilon(1e-14));
}

TEST_CASE("segment_quad agrees with adaptive quadrature") {
    const double q = -0.5;
    const double got = segment_quad(SigmaKind::power, q, 1.0, 2.0, 3.0,
                                    0.5, 2.0);
    const double ref = adaptive_gauss(
        [&](double u) {
            return (1.0 + 2.0 * u + 3.0 * u * u) * std::pow(u, q);
        },
        0.5, 2.0);
    CHECK(got == doctest::Approx(ref).epsilon(1e-12));

    const double got_log = segment_quad(SigmaKind::power_log, q, 1.0, 0.0, 1.0,
                                        0.25, 1.5);
    const double ref_log = adaptive_gauss(
        [&](double u) {
            return (1.0 + u * u) * std::pow(u, q) * std::log(u);
        },
        0.25, 1.5);
    CHECK(got_log == doctest::Approx(ref_log).epsilon(1e-12));
}

TEST_CASE("segment_quad handles integrable endpoint singularities") {
    // int_0^1 u^{-1/2} du = 2
    CHECK(segment_quad(SigmaKind::power, -0.5, 1.0, 0.0, 0.0, 0.0, 1.0)
          == doctest::Approx(2.0).epsilon(1e-14));
    // constant against u^{-1} from zero diverges
    CHECK_THROWS_AS(
        segment_quad(SigmaKind::power, -1.0, 1.0, 0.0, 0.0, 0.0, 1.0),
        solver_error);
    // but the u-coefficient is fine: int_0^1 u * u^{-1} du = 1
    CHECK(segment_quad(SigmaKind::power, -1.0, 0.0, 1.0, 0.0, 0.0, 1.0)
          == doctest::Approx(1.0).epsilon(1e-14));
}

namespace {

double term_integral_reference(std::span<const double> nodes,
                               std::span<const double> vals, double c,
                               const KernelTerm& t) {
    auto rho = [&](double x) {
        for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
            if (x >= nodes[j] && x <= nodes[j + 1]) {
                const double w = (x - nodes[j]) / (nodes[j + 1] - nodes[j]);
                return (1 - w) * vals[j] + w * vals[j + 1];
            }
        }
        return 0.0;
    };
    // evaluate with the distance to c supplied directly so the graded
    // substitution below does not lose it to cancellation
    auto f_at = [&](double x, double dist_to_c) {
        double u, sgn = 1.0;
        switch (t.geom) {
            case TermGeom::abs_dist: u = dist_to_c; break;
            case TermGeom::shifted: u = c + x; break;
            default:
                u = dist_to_c;
                sgn = c >= x ? 1.0 : -1.0;
        }
        double s = std::pow(u, t.p);
        if (t.kind == SigmaKind::power_log) s *= std::log(u);
        return sgn * (t.h0 + t.h1 * x) * s * rho(x);
    };
    auto f = [&](double x) { return f_at(x, std::abs(c - x)); };
    // graded integration away from x=c (sign = +1 right of c, -1 left);
    // the w^4 substitution smooths the |c-x|^p endpoint singularity
    auto graded = [&](double len, double sign) {
        auto g = [&](double w) {
            const double d = w * w * w * w;
            return 4.0 * w * w * w * f_at(c + sign * d, d);
        };
        return adaptive_gauss(g, 0.0, std::pow(len, 0.25), 1e-14, 256);
    };
    // integrate segment by segment (the interpolant kinks at every node),
    // grading every sub-interval that touches the singular point
    double acc = 0.0;
    for (std::size_t j = 0; j + 1 < nodes.size(); ++j) {
        const double a = nodes[j], b = nodes[j + 1];
        const bool sing = t.geom != TermGeom::shifted;
        if (c > a && c < b) {
            acc += sing ? graded(c - a, -1.0) + graded(b - c, 1.0)
                        : adaptive_gauss(f, a, b, 1e-14, 256);
        } else if (sing && c == a) {
            acc += graded(b - a, 1.0);
        } else if (sing && c == b) {
            acc += graded(b - a, -1.0);
        } else {
            acc += adaptive_gauss(f, a, b, 1e-14, 256);
        }
    }
    return acc;
}

}  // namespace

TEST_CASE("product_weights match adaptive quadrature in every geometry") {
    std::vector<double> nodes{0.0, 0.3, 0.55, 0.8, 1.0};
    std::vector<double> vals{1.2, 0.9, 1.7, 0.4, 0.1};
    const double c = 0.55;  // on a node, the hard case

    for (const KernelTerm& t : {
             KernelTerm{SigmaKind::power, 0.75, 1.0, 0.5, TermGeom::abs_dist},
             KernelTerm{SigmaKind::power, -0.3, 2.0, 0.0, TermGeom::abs_dist},
             KernelTerm{SigmaKind::power, 1.3, 0.0, 1.0, TermGeom::shifted},
             KernelTerm{SigmaKind::power, 2.0, 1.0, 0.0, TermGeom::signed_abs},
             KernelTerm{SigmaKind::power_log, 1.5, 1.0, 0.0,
                        TermGeom::abs_dist},
         }) {
        std::vector<KernelTerm> terms{t};
        auto w = product_weights(nodes, c, terms);
        double got = 0.0;
        for (std::size_t j = 0; j < w.size(); ++j) got += w[j] * vals[j];
        const double ref = term_integral_reference(nodes, vals, c, t);
        INFO("p=" << t.p << " geom=" << static_cast<int>(t.geom));
        CHECK(got == doctest::Approx(ref).epsilon(5e-11));
    }
}

TEST_CASE("product_weights off-node row point") {
    std::vector<double> nodes{0.0, 0.25, 0.5, 0.75, 1.0};
    std::vector<double> vals{0.2, 1.0, 0.6, 0.9, 0.3};
    const double c = 0.4;
    KernelTerm t{SigmaKind::power, -0.5, 1.0, 1.0, TermGeom::abs_dist};
    std::vector<KernelTerm> terms{t};
    auto w = product_weights(nodes, c, terms);
    double got = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j) got += w[j] * vals[j];
    CHECK(got
          == doctest::Approx(term_integral_reference(nodes, vals, c, t))
                 .epsilon(5e-11));
}

TEST_CASE("drop_center difference rows stay finite at p=-1") {
    std::vector<double> nodes{0.0, 0.25, 0.5, 0.75, 1.0};
    const double c = 0.5;
    std::vector<KernelTerm> terms{
        KernelTerm{SigmaKind::power, -1.0, 1.0, 0.0, TermGeom::abs_dist}};
    auto w = product_weights(nodes, c, terms, true);
    CHECK(w[2] == 0.0);
    for (double x : w) CHECK(std::isfinite(x));
    // against rho_j - rho(c) with rho(x) = x^2 the integral is finite:
    // int |x-c|^{-1} (x^2 - interp(c)) dx for the PL interpolant of x^2
    std::vector<double> vals;
    for (double x : nodes) vals.push_back(x * x);
    double got = 0.0;
    for (std::size_t j = 0; j < w.size(); ++j)
        got += w[j] * (vals[j] - vals[2]);
    CHECK(std::isfinite(got));
}

TEST_CASE("gauss rules integrate polynomials exactly") {
    // 5-point rule is exact through degree 9
    auto f = [](double x) { return std::pow(x, 9) + 3.0 * x * x; };
    const double got = gauss_integrate(f, -1.0, 1.0, 5);
    CHECK(got == doctest::Approx(2.0).epsilon(1e-14));

    const double e = adaptive_gauss([](double x) { return std::exp(x); },
                                    0.0, 1.0);
    CHECK(e == doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-13));
}
