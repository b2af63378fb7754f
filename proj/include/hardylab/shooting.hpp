#ifndef HARDYLAB_SHOOTING_HPP
#define HARDYLAB_SHOOTING_HPP

#include "hardylab/dimension.hpp"
#include "hardylab/ground_state.hpp"
#include "hardylab/potential.hpp"

namespace hardylab {

// Outward shooting for the radial Robin problem on the exterior of the unit
// ball:
//   psi'' + (N-1)/r psi' + eps f(r) psi = 0,  r > 1,
//   psi(1) = 1,  psi'(1) = -robin_coefficient.
// Integrated as the first-order system (psi, q = r^{N-1} psi'); q is
// nonincreasing whenever psi > 0, which keeps the system well scaled.
struct ShootingResult {
    double epsilon = 0.0;
    TabulatedProfile profile;      // psi on [1, r_inf] at log-spaced nodes
    double limit_estimate = 0.0;   // lim psi(r), tail-corrected and extrapolated
    bool monotone_decreasing = false;
    bool positive = false;         // no zero crossing before r_inf
};

// Adaptive Dormand-Prince integration at relative tolerance rel_tol.  A zero
// crossing stops the integration (supercritical coupling); the profile is
// truncated there and limit_estimate reports the crossing-side value.  For
// positive profiles the limit is read off by fitting the decaying mode
// l + c r^{2-N} over the last decade, at three shells r_inf/4, r_inf/2,
// r_inf, and Aitken-extrapolating.
ShootingResult shoot(const Dimension& dim, double epsilon, const PowerLaw& tail,
                     double r_inf, double robin_coefficient, double rel_tol = 1e-10);

// Threshold coupling: largest eps with positive profile and positive limit,
// located by bisection on that indicator, then stabilized by doubling r_inf
// until the bisection value moves by less than tol.  Throws when no bracket
// exists (e.g. tail identically zero) or when doubling fails to stabilize
// (truncation radius too small for this tail).
double epsilon0_by_bisection(const Dimension& dim, const PowerLaw& tail,
                             double robin_coefficient, double tol = 1e-6,
                             double r_inf = 1e5);

} // namespace hardylab

#endif
