#ifndef HARDYLAB_MAZYA_HPP
#define HARDYLAB_MAZYA_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "hardylab/grid.hpp"
#include "hardylab/potential.hpp"

namespace hardylab {

using RadialFunction = std::function<double(double)>;

// One-dimensional Sobolev criterion for a weight pair: the inequality
//
//   int_0^oo (v')^2 A dr  >=  c ( int_0^oo |v|^q B dr )^{2/q},   q >= 2,
//
// over functions vanishing near infinity holds if and only if
//
//   sup_{r>0} ( int_0^r B dt ) ( int_r^oo dt/A )^{q/2}  <  +oo.
//
// mazya_sup estimates that supremum by cumulative trapezoid sums over the
// grid, then re-estimates on progressively extended domains (both endpoints
// pushed outward); `finite` records whether the estimate has stabilized or
// keeps growing with the domain.
struct MazyaCheck {
    RadialGrid grid;           // grid of the final (widest) evaluation
    std::vector<double> A, B;  // weights tabulated on that grid
    double q = 2.0;
    double sup_value = 0.0;
    double argmax_r = 0.0;     // node where the supremum is attained
    bool finite = true;
};

MazyaCheck mazya_sup(const RadialFunction& A, const RadialFunction& B,
                     const RadialGrid& grid, double q);

// Rayleigh-type Sobolev quotient in the radial variable,
//
//             int a(r) (u')^2 dr  -  int b(r) u^2 dr
//   Q(u)  =  ------------------------------------------ ,
//                 ( int W(r) |u|^p dr )^{2/p}
//
// with every angular / r^{N-1} factor folded into the weights by the caller.
// The outer endpoint of the grid is pinned to zero (it stands for infinity,
// or for the boundary in zero-trace problems); the inner endpoint is free.
struct SobolevQuotient {
    RadialFunction gradient_weight;          // a > 0
    RadialFunction target_weight;            // W > 0
    double target_exponent = 2.0;            // p >= 2
    RadialFunction potential;                // b; empty means none
};

// The three ingredients of Q evaluated on one grid function; lets callers
// test nonnegativity of the numerator directly.
struct QuotientForms {
    double gradient = 0.0;     // int a (u')^2
    double potential = 0.0;    // int b u^2
    double target = 0.0;       // int W |u|^p
};

QuotientForms quotient_forms(const SobolevQuotient& quot, const RadialGrid& grid,
                             const std::vector<double>& u);

struct BestConstantResult {
    double c_estimate = 0.0;          // best (smallest) quotient found
    RadialGrid grid;                  // final grid
    std::vector<double> minimizer;    // normalized profile achieving it
    std::vector<double> trace;        // best value per refinement level
};

// Estimates inf Q by projected gradient descent with the target norm pinned
// to 1, restarted from `restarts` deterministic random profiles, then
// continued across `refinements` nested grid refinements (injecting the
// incumbent keeps the trace nonincreasing).  The result is an upper bound
// for the true infimum, never a certificate.  A negative numerator at any
// accepted iterate means the claimed inequality fails on the grid and is
// reported by throwing.
BestConstantResult best_constant(const SobolevQuotient& quot, const RadialGrid& grid,
                                 int refinements = 2, int restarts = 20,
                                 std::uint64_t seed = 0x5eedULL);

// Spherical-harmonic energy bookkeeping.  A function given by sector
// coefficients u = sum_m u_m(r) f_m(sigma), with f_m orthonormal in the
// normalized sphere measure, has
//
//   int (|grad u|^2 - V u^2) dx
//     = sum_m int { |grad u_m|^2 + (c_m/|x|^2 - V) u_m^2 } dx,
//
// where c_m = m (N-2+m).  With theta = ess sup r^2 V the nonradial part
// gains a fixed fraction of its full gradient energy:
//
//   int (|grad u|^2 - V u^2) dx
//     >=  int (|grad u_0|^2 - V u_0^2) dx
//       + (N-1)/(N-1+theta) * int |grad (u - u_0)|^2 dx.
//
// Both are checked on the given coefficients: the identity by comparing the
// assembled operator route against direct quadrature (agreement to round-off),
// the inequality by explicit evaluation.  theta is the grid max of r^2 V(r).
double sector_eigenvalue(const Dimension& dim, int m);   // c_m = m(N-2+m)
long long harmonic_multiplicity(const Dimension& dim, int m);   // dim of degree-m harmonics

struct HarmonicImprovement {
    double identity_gap = 0.0;   // relative gap between the two energy routes
    double lhs = 0.0;            // full energy  int (|grad u|^2 - V u^2)
    double rhs = 0.0;            // improved lower bound (radial + fraction)
    double theta = 0.0;          // grid ess-sup of r^2 V
    bool holds = false;          // lhs >= rhs - tolerance
};

// `coefficients[m]` holds u_m on the grid (m = 0 is the spherical average).
HarmonicImprovement harmonic_improvement_check(const Dimension& dim,
                                               const std::vector<std::vector<double>>& coefficients,
                                               const RadialPotential& V,
                                               const RadialGrid& grid);

} // namespace hardylab

#endif
