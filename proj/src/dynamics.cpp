#include "aggeq/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "aggeq/quadrature.hpp"

namespace aggeq {

namespace {

// cumulative int_0^{r_i} s^{n-1} rho_PL ds at every node
std::vector<double> cumulative_moment(const std::vector<double>& r,
                                      const std::vector<double>& rho, int n) {
    std::vector<double> cum(r.size(), 0.0);
    for (std::size_t j = 0; j + 1 < r.size(); ++j) {
        const double a = r[j], b = r[j + 1], h = b - a;
        double seg = 0.0;
        if (h > 0.0) {
            const double m = (rho[j + 1] - rho[j]) / h;
            const double c0 = rho[j] - m * a;
            if (n == 1) {
                seg = c0 * (b - a) + m * (b * b - a * a) / 2.0;
            } else if (n == 2) {
                seg = c0 * (b * b - a * a) / 2.0
                    + m * (b * b * b - a * a * a) / 3.0;
            } else {
                seg = c0 * (b * b * b - a * a * a) / 3.0
                    + m * (b * b * b * b - a * a * a * a) / 4.0;
            }
        }
        cum[j + 1] = cum[j] + seg;
    }
    return cum;
}

// scatter branch-continuous antiderivatives (F0 of f, F1 of s f) into hat
// weights: sum_j w_j rho_j = int f(s) rho_PL(s) ds
void hat_weights(const std::vector<double>& r, const std::vector<double>& F0,
                 const std::vector<double>& F1, std::vector<double>& w) {
    std::fill(w.begin(), w.end(), 0.0);
    for (std::size_t j = 0; j + 1 < r.size(); ++j) {
        const double h = r[j + 1] - r[j];
        if (!(h > 0.0)) continue;
        const double d0 = F0[j + 1] - F0[j];
        const double d1 = F1[j + 1] - F1[j];
        w[j] += (r[j + 1] * d0 - d1) / h;
        w[j + 1] += (d1 - r[j] * d0) / h;
    }
}

// n=3 rows: antiderivatives of f_I = s^2 I(c,s) and f_G = s G(c,s), where
// G collects the angular attraction integral; all branches are continuous
// across s = c, so segments straddling c integrate correctly.
void n3_antiderivatives(double c, double q, const std::vector<double>& r,
                        std::vector<double>& F0I, std::vector<double>& F1I,
                        std::vector<double>& F0G, std::vector<double>& F1G) {
    const double q1 = q + 1.0, q2 = q + 2.0, q3 = q + 3.0, q4 = q + 4.0,
                 q5 = q + 5.0;
    const std::size_t m = r.size();
    for (std::size_t j = 0; j < m; ++j) {
        const double s = r[j];
        if (c <= 0.0) {
            F0I[j] = (s > 0.0) ? 2.0 * std::pow(s, q1) / q1 : 0.0;
            F1I[j] = (s > 0.0) ? 2.0 * std::pow(s, q2) / q2 : 0.0;
            F0G[j] = 0.0;
            F1G[j] = 0.0;
            continue;
        }
        const double up = c + s, um = std::abs(c - s);
        const bool left = s < c;
        const double Xq = std::pow(up, q);
        const double Yq = (um > 0.0) ? std::pow(um, q) : 0.0;
        const double up1 = Xq * up, up2 = up1 * up, up3 = up2 * up,
                     up4 = up3 * up, up5 = up4 * up;
        const double um1 = Yq * um, um2 = um1 * um, um3 = um2 * um,
                     um4 = um3 * um, um5 = um4 * um;

        const double P0 = up2 / q2 - c * up1 / q1;
        const double Q0 = left ? -c * um1 / q1 + um2 / q2
                               : c * um1 / q1 + um2 / q2;
        F0I[j] = (P0 - Q0) / (q * c);
        const double P1 = up3 / q3 - 2.0 * c * up2 / q2 + c * c * up1 / q1;
        const double Q1 = left
            ? -(c * c * um1 / q1 - 2.0 * c * um2 / q2 + um3 / q3)
            : c * c * um1 / q1 + 2.0 * c * um2 / q2 + um3 / q3;
        F1I[j] = (P1 - Q1) / (q * c);

        const double A0 = up3 / q3 - c * up2 / q2;
        const double B0 = left ? -c * um2 / q2 + um3 / q3
                               : -(c * um2 / q2 + um3 / q3);
        const double C0 = up4 / q4 - c * up3 / q3;
        const double D0 = left ? -c * um3 / q3 + um4 / q4
                               : c * um3 / q3 + um4 / q4;
        F0G[j] = (q2 / c * (A0 - B0) - (C0 - D0) / (c * c)) / (q * q2);
        const double A1 = up4 / q4 - 2.0 * c * up3 / q3 + c * c * up2 / q2;
        const double B1 = left
            ? -(c * c * um2 / q2 - 2.0 * c * um3 / q3 + um4 / q4)
            : -(c * c * um2 / q2 + 2.0 * c * um3 / q3 + um4 / q4);
        const double C1 = up5 / q5 - 2.0 * c * up4 / q4 + c * c * up3 / q3;
        const double D1 = left
            ? -(c * c * um3 / q3 - 2.0 * c * um4 / q4 + um5 / q5)
            : c * c * um3 / q3 + 2.0 * c * um4 / q4 + um5 / q5;
        F1G[j] = (q2 / c * (A1 - B1) - (C1 - D1) / (c * c)) / (q * q2);
    }
}

}  // namespace

Characteristics::Characteristics(const ModelParams& params) : params_(params) {
    validate(params);
    if (params.n == 3 && params.q == 0.0)
        throw config_error("dynamics in n=3 not implemented for q = 0 "
                           "(log-attraction antiderivatives)");
    if (params.n == 2)
        table_ = std::make_shared<const AngularTable>(2, params.q);
}

void Characteristics::velocity_row(double c, const std::vector<double>& r,
                                   const std::vector<double>& rho,
                                   double& v_rep, double& v_att,
                                   double& interaction) const {
    // v_rep filled by caller (cumulative); computes the attraction and
    // interaction integrals at field point c
    (void)v_rep;
    const int n = params_.n;
    const double q = params_.q;
    const std::size_t m = r.size();
    v_att = 0.0;
    interaction = 0.0;

    if (n == 1) {
        const KernelTerm att_terms[] = {
            {SigmaKind::power, q - 1.0, 1.0, 0.0, TermGeom::signed_abs},
            {SigmaKind::power, q - 1.0, 1.0, 0.0, TermGeom::shifted}};
        const KernelTerm int_terms[] = {
            {SigmaKind::power, q - 2.0, 1.0, 0.0, TermGeom::abs_dist},
            {SigmaKind::power, q - 2.0, 1.0, 0.0, TermGeom::shifted}};
        const auto wa = product_weights(r, c, att_terms);
        const auto wi = product_weights(r, c, int_terms);
        for (std::size_t j = 0; j < m; ++j) {
            v_att += wa[j] * rho[j];
            interaction += wi[j] * rho[j];
        }
        return;
    }
    if (n == 3) {
        std::vector<double> F0I(m), F1I(m), F0G(m), F1G(m), w(m);
        n3_antiderivatives(c, q, r, F0I, F1I, F0G, F1G);
        const double two_pi = 2.0 * std::numbers::pi;
        hat_weights(r, F0G, F1G, w);
        for (std::size_t j = 0; j < m; ++j) v_att += w[j] * rho[j];
        hat_weights(r, F0I, F1I, w);
        for (std::size_t j = 0; j < m; ++j) interaction += w[j] * rho[j];
        v_att *= two_pi;
        interaction *= two_pi;
        return;
    }
    // n=2: Gauss segments over the tabulated kernels, split at the diagonal
    const AngularTable& tab = *table_;
    auto vel_kernel = [&](double s) {
        if (s <= 0.0 && c <= 0.0) return 0.0;
        if (c >= s)
            return (c > 0.0) ? std::pow(c, q - 1.0) * tab.I2(s / c) : 0.0;
        return std::pow(s, q - 1.0) * tab.I3(c / s);
    };
    auto int_kernel = [&](double s) {
        const double hi = std::max(c, s), lo = std::min(c, s);
        if (hi <= 0.0) return 0.0;
        return std::pow(hi, q - 2.0) * tab.I1(lo / hi);
    };
    const GaussRule& g = gauss_legendre(8);
    for (std::size_t j = 0; j + 1 < m; ++j) {
        const double a = r[j], b = r[j + 1];
        if (!(b > a)) continue;
        double edges[3] = {a, b, b};
        int ne = 2;
        if (c > a && c < b) {
            edges[1] = c;
            edges[2] = b;
            ne = 3;
        }
        for (int e = 0; e + 1 < ne; ++e) {
            const double mid = 0.5 * (edges[e] + edges[e + 1]);
            const double half = 0.5 * (edges[e + 1] - edges[e]);
            for (std::size_t k = 0; k < g.x.size(); ++k) {
                const double s = mid + half * g.x[k];
                const double t = (s - a) / (b - a);
                const double dens = rho[j] * (1.0 - t) + rho[j + 1] * t;
                const double wgt = half * g.w[k] * s * dens;
                v_att += wgt * vel_kernel(s);
                interaction += wgt * int_kernel(s);
            }
        }
    }
    const double pref = Geometry(2).angular_prefactor();
    v_att *= pref;
    interaction *= pref;
}

void Characteristics::rhs(const std::vector<double>& r,
                          const std::vector<double>& rho,
                          std::vector<double>& drdt,
                          std::vector<double>& drhodt) const {
    const int n = params_.n;
    const double eps = params_.epsilon();
    const std::size_t m = r.size();
    drdt.resize(m);
    drhodt.resize(m);
    const auto cum = cumulative_moment(r, rho, n);

#pragma omp parallel for schedule(dynamic)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        const double c = r[i];
        double v_rep = 0.0;
        if (c > 0.0) {
            v_rep = (n == 1) ? cum[i]
                  : (n == 2) ? cum[i] / c
                             : cum[i] / (c * c);
        }
        double v_att = 0.0, inter = 0.0;
        velocity_row(c, r, rho, v_rep, v_att, inter);
        drdt[i] = v_rep - v_att;
        drhodt[i] = -rho[i] * (rho[i] - eps * inter);
    }
}

double Characteristics::radial_velocity(const CharacteristicState& state,
                                        std::size_t i) const {
    std::vector<double> dr, dp;
    rhs(state.radii, state.densities, dr, dp);
    return dr[i];
}

double Characteristics::density_rhs(const CharacteristicState& state,
                                    std::size_t i) const {
    std::vector<double> dr, dp;
    rhs(state.radii, state.densities, dr, dp);
    return dp[i];
}

StepReport Characteristics::step_rk4(CharacteristicState& state,
                                     double dt) const {
    const std::size_t m = state.radii.size();
    std::vector<double> k1r, k1p, k2r, k2p, k3r, k3p, k4r, k4p;
    std::vector<double> rr(m), pp(m);

    rhs(state.radii, state.densities, k1r, k1p);
    for (std::size_t i = 0; i < m; ++i) {
        rr[i] = state.radii[i] + 0.5 * dt * k1r[i];
        pp[i] = state.densities[i] + 0.5 * dt * k1p[i];
    }
    rhs(rr, pp, k2r, k2p);
    for (std::size_t i = 0; i < m; ++i) {
        rr[i] = state.radii[i] + 0.5 * dt * k2r[i];
        pp[i] = state.densities[i] + 0.5 * dt * k2p[i];
    }
    rhs(rr, pp, k3r, k3p);
    for (std::size_t i = 0; i < m; ++i) {
        rr[i] = state.radii[i] + dt * k3r[i];
        pp[i] = state.densities[i] + dt * k3p[i];
    }
    rhs(rr, pp, k4r, k4p);

    StepReport rep;
    for (std::size_t i = 0; i < m; ++i) {
        state.radii[i] += dt / 6.0 * (k1r[i] + 2.0 * k2r[i] + 2.0 * k3r[i]
                                      + k4r[i]);
        state.densities[i] += dt / 6.0 * (k1p[i] + 2.0 * k2p[i] + 2.0 * k3p[i]
                                          + k4p[i]);
        if (state.densities[i] < 0.0) {
            state.densities[i] = 0.0;
            ++rep.clamped;
        }
    }
    for (std::size_t i = 0; i + 1 < m; ++i)
        if (state.radii[i + 1] < state.radii[i]) rep.crossed = true;
    state.time += dt;
    return rep;
}

double state_mass(const CharacteristicState& state, int n) {
    return mass_nodes(state.radii, state.densities, n);
}

double state_support_radius(const CharacteristicState& state) {
    double rho_max = 0.0;
    for (double v : state.densities) rho_max = std::max(rho_max, v);
    double R = 0.0;
    for (std::size_t i = 0; i < state.radii.size(); ++i)
        if (state.densities[i] > 1e-8 * rho_max)
            R = std::max(R, state.radii[i]);
    return R;
}

double profile_distance(const CharacteristicState& state,
                        const RadialProfile& reference, double edge_fraction) {
    const double R = reference.grid.nodes.back();
    const double cut = edge_fraction * R;
    const auto& rn = reference.grid.nodes;
    const auto& rv = reference.values;
    double dist = 0.0;
    for (std::size_t i = 0; i < state.radii.size(); ++i) {
        const double r = state.radii[i];
        if (r > cut) continue;
        auto it = std::upper_bound(rn.begin(), rn.end(), r);
        double ref;
        if (it == rn.begin()) {
            ref = rv.front();
        } else if (it == rn.end()) {
            ref = 0.0;
        } else {
            const std::size_t k = static_cast<std::size_t>(it - rn.begin());
            const double t = (r - rn[k - 1]) / (rn[k] - rn[k - 1]);
            ref = rv[k - 1] * (1.0 - t) + rv[k] * t;
        }
        dist = std::max(dist, std::abs(state.densities[i] - ref));
    }
    return dist;
}

namespace {

TrajectorySample make_sample(const CharacteristicState& st,
                             const ModelParams& params,
                             const RadialProfile* reference) {
    TrajectorySample s;
    s.time = st.time;
    s.mass = state_mass(st, params.n);
    s.rho_max = *std::max_element(st.densities.begin(), st.densities.end());
    s.support_radius = state_support_radius(st);
    s.dist_to_reference = reference
        ? profile_distance(st, *reference)
        : std::numeric_limits<double>::quiet_NaN();
    return s;
}

}  // namespace

Trajectory evolve(const RadialProfile& initial, double t_final, double dt,
                  const ModelParams& params, const RadialProfile* reference,
                  double sample_interval) {
    if (!(dt > 0.0))
        throw config_error("time step must be positive");
    Characteristics dyn(params);
    Trajectory traj;
    traj.params = params;

    CharacteristicState st;
    st.radii = initial.grid.nodes;
    st.densities = initial.values;
    traj.initial = st;
    traj.samples.push_back(make_sample(st, params, reference));

    const auto steps = static_cast<std::size_t>(std::llround(t_final / dt));
    const auto stride = std::max<std::size_t>(
        1, static_cast<std::size_t>(std::llround(sample_interval / dt)));
    for (std::size_t s = 1; s <= steps; ++s) {
        const StepReport rep = dyn.step_rk4(st, dt);
        traj.clamped_total += rep.clamped;
        traj.crossing_detected = traj.crossing_detected || rep.crossed;
        for (std::size_t i = 0; i < st.radii.size(); ++i) {
            if (!std::isfinite(st.radii[i]) || !std::isfinite(st.densities[i]))
                throw solver_error("non-finite state at t = "
                                   + std::to_string(st.time));
        }
        if (s % stride == 0 || s == steps)
            traj.samples.push_back(make_sample(st, params, reference));
    }
    traj.final = st;
    return traj;
}

ConservationReport conservation_report(const Trajectory& traj) {
    ConservationReport rep;
    const double m0 = traj.samples.front().mass;
    for (const auto& s : traj.samples) {
        rep.max_mass_drift = std::max(rep.max_mass_drift,
                                      std::abs(s.mass - m0) / std::abs(m0));
        rep.rho_max_series.push_back(s.rho_max);
    }
    rep.centre_of_mass = 0.0;  // exact by radial symmetry
    const ModelParams& p = traj.params;
    if (p.q < 2.0) {
        const double C = Geometry(p.n).sphere_area() + p.M * p.epsilon();
        rep.rho_max_ceiling = std::pow(C, p.n / p.epsilon());
        rep.ceiling_respected = traj.samples.back().rho_max <= rep.rho_max_ceiling;
    }
    return rep;
}

}  // namespace aggeq
