#ifndef AGGEQ_DYNAMICS_HPP
#define AGGEQ_DYNAMICS_HPP

#include <cstddef>
#include <memory>
#include <optional>
#include <vector>

#include "aggeq/kernels.hpp"
#include "aggeq/model.hpp"

// Lagrangian evolution along characteristics,
//
//   dr_i/dt   = v(r_i) = (1/r^{n-1}) int_0^r s^{n-1} rho ds  -  v_att(r_i)
//   drho_i/dt = -rho_i (rho_i - (n+q-2) c_n int s^{n-1} I(r_i,s) rho ds)
//
// with the carried densities interpolated piecewise-linearly between the
// particles. All radial integrals are exact for that interpolant in n=1 and
// n=3 (closed-form antiderivatives of the kernel branches); n=2 uses Gauss
// segments over tabulated angular kernels. Time stepping is classical RK4.

namespace aggeq {

struct CharacteristicState {
    double time = 0.0;
    std::vector<double> radii;
    std::vector<double> densities;
};

struct StepReport {
    bool crossed = false;        // radii order violated after the step
    std::size_t clamped = 0;     // negative densities clamped to zero
};

class Characteristics {
public:
    explicit Characteristics(const ModelParams& params);

    void rhs(const std::vector<double>& r, const std::vector<double>& rho,
             std::vector<double>& drdt, std::vector<double>& drhodt) const;

    double radial_velocity(const CharacteristicState& state, std::size_t i) const;
    double density_rhs(const CharacteristicState& state, std::size_t i) const;

    StepReport step_rk4(CharacteristicState& state, double dt) const;

    const ModelParams& params() const { return params_; }

private:
    void velocity_row(double c, const std::vector<double>& r,
                      const std::vector<double>& rho, double& v_rep,
                      double& v_att, double& interaction) const;

    ModelParams params_;
    std::shared_ptr<const AngularTable> table_;  // n == 2 only
};

struct TrajectorySample {
    double time = 0.0;
    double mass = 0.0;
    double rho_max = 0.0;
    double support_radius = 0.0;
    double dist_to_reference = 0.0;  // NaN when no reference given
};

struct Trajectory {
    ModelParams params;
    std::vector<TrajectorySample> samples;
    CharacteristicState initial;
    CharacteristicState final;
    std::size_t clamped_total = 0;
    bool crossing_detected = false;
};

// Sup distance between the particle densities and a reference profile,
// restricted to r <= edge_fraction * R_ref. The cutoff keeps the metric away
// from the jump at the support edge, where a particle landing a grid spacing
// off otherwise picks up the full jump height.
double profile_distance(const CharacteristicState& state,
                        const RadialProfile& reference,
                        double edge_fraction = 0.95);

Trajectory evolve(const RadialProfile& initial, double t_final, double dt,
                  const ModelParams& params,
                  const RadialProfile* reference = nullptr,
                  double sample_interval = 0.1);

struct ConservationReport {
    double max_mass_drift = 0.0;     // relative to the initial mass
    double centre_of_mass = 0.0;     // identically zero for radial states
    std::vector<double> rho_max_series;
    double rho_max_ceiling = 0.0;    // a-priori bound, q < 2 only (else 0)
    bool ceiling_respected = true;
};

ConservationReport conservation_report(const Trajectory& traj);

// particle mass and support-radius estimate of a particle state
double state_mass(const CharacteristicState& state, int n);
double state_support_radius(const CharacteristicState& state);

}  // namespace aggeq

#endif
