#ifndef AGGEQ_KERNELS_HPP
#define AGGEQ_KERNELS_HPP

#include <cstddef>
#include <vector>

#include "aggeq/model.hpp"

// Angular kernels of the radial reduction. With s = min(r,r')/max(r,r'),
//
//   I1(s) = int_0^pi (1+s^2-2s cos t)^{q/2-1} sin^{n-2}t dt
//   I2(s) = same with extra factor (1-s cos t)
//   I3(s) = same with extra factor (s-cos t)
//   I(r,r') = max(r,r')^{q-2} I1(s)
//
// I2, I3 stay bounded at s=1 for every q>2-n; I1 only for q>3-n. In n=3 all
// of them collapse to elementary closed forms.

namespace aggeq {

double eval_I1(double s, int n, double q);
double eval_I2(double s, int n, double q);
double eval_I3(double s, int n, double q);

// max^{q-2} I1(min/max); n=3 goes through the explicit formula
double eval_I(double r, double r_prime, int n, double q);

// ((r+r')^q - |r-r'|^q)/(q r r'), log branch at q=0, limits 2 max^{q-2} on the axes
double eval_I_explicit_3d(double r, double r_prime, double q);

// closed-form boundary values 2^{n+q-4} B((q+n-3)/2,(n-1)/2) etc.
double I1_at_one(int n, double q);
double I2_at_one(int n, double q);

// Sampled I1/I2/I3 with cubic interpolation; used where no closed form
// exists (n=2). Uniform s-nodes plus a graded cluster toward s=1.
class AngularTable {
public:
    AngularTable(int n, double q, std::size_t uniform_nodes = 2048);

    double I1(double s) const { return interp(I1_, s); }
    double I2(double s) const { return interp(I2_, s); }
    double I3(double s) const { return interp(I3_, s); }

    int dim() const { return n_; }
    double exponent() const { return q_; }
    const std::vector<double>& s_nodes() const { return s_; }

private:
    double interp(const std::vector<double>& vals, double s) const;
    int n_;
    double q_;
    std::vector<double> s_, I1_, I2_, I3_;
};

// Product-integration weights for int_0^R r'^{n-1} I(r_i,r') rho(r') dr',
// exact for piecewise-linear rho. Restricted to the dimensions with an
// explicit kernel; valid for the weakly singular exponents.
std::vector<double> singular_row_weights(const RadialGrid& grid, std::size_t i,
                                         int n, double q);

namespace internal {
// same weights without the regime guard; the closed-form moments are exact
// for every admissible q, so the regular regime reuses them
std::vector<double> radial_row_weights(const RadialGrid& grid, std::size_t i,
                                       int n, double q);
}  // namespace internal

}  // namespace aggeq

#endif
