#ifndef HARDYLAB_GROUND_STATE_HPP
#define HARDYLAB_GROUND_STATE_HPP

#include <limits>
#include <optional>
#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/potential.hpp"

namespace hardylab {

// Tabulated radial profile with derivatives, interpolated by cubic Hermite
// pieces in log r.  Used for numerically integrated tails.
struct TabulatedProfile {
    std::vector<double> r;        // strictly increasing
    std::vector<double> value;
    std::vector<double> slope;    // d value / d r at the nodes

    double eval(double rr) const;
    double derivative(double rr) const;
};

// Positive radial profile phi solving  laplace(phi) + V phi = 0, used both
// as the weight of energy forms and as the similarity factor of kernel
// transforms.  Piecewise description:
//   r <= match_radius :  r^{exponent} * prod_i X_i(r/scale)^{log_powers[i]}
//   r >  match_radius :  tabulated tail (value 1 at the match radius).
// With no tail the inner law applies for all r.
struct GroundState {
    double exponent = 0.0;
    std::vector<double> log_powers;
    double scale = 1.0;
    double match_radius = std::numeric_limits<double>::infinity();
    std::optional<TabulatedProfile> tail;

    double eval(double r) const;
    double log_derivative(double r) const;   // phi'(r) / phi(r)
    std::vector<double> sample(const std::vector<double>& radii) const;
};

// Assemble the ground state of the potential.  For potentials whose
// singular region ends at |x| = 1 (critical or iterated-log inner families)
// an integrated outer tail must be supplied; its value and log-derivative
// must match the inner law at the junction within match_tol, otherwise a
// std::runtime_error is raised.  Pure power-law / bounded-domain families
// need no tail.
GroundState build_ground_state(const Dimension& dim, const RadialPotential& V,
                               std::optional<TabulatedProfile> outer_tail = std::nullopt,
                               double match_tol = 1e-8);

// Weak-form residual of the ground state on a grid: for every interior node,
// the hat-function pairing of  (r^{N-1} phi')' + r^{N-1} V phi , normalized
// by the size of the two paired terms.  Returns the maximum over interior
// nodes; second-order small for consistent (phi, V) pairs.
double ground_state_residual(const Dimension& dim, const RadialGrid& grid,
                             const GroundState& phi, const RadialPotential& V);

} // namespace hardylab

#endif
