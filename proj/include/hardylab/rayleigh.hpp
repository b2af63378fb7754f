#ifndef HARDYLAB_RAYLEIGH_HPP
#define HARDYLAB_RAYLEIGH_HPP

#include <optional>
#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/potential.hpp"

namespace hardylab {

// Boundary-weighted Rayleigh quotient
//
//           int |grad u|^2  +  alpha * int_bdry (x.nu/|x|^2) u^2 dS
//                        [ - int W u^2 when a numerator potential W is set ]
//   inf  ---------------------------------------------------------------
//                          int V u^2
//
// with nu the outward normal of the domain.  On a ball the boundary term
// enters with +alpha, on an exterior domain with -alpha (x.nu = -R at the
// inner sphere); both conventions are produced by the same oriented surface
// integral.  The default denominator V = |x|^{-2} gives the critical Hardy
// quotient; a subcritical tail f or core g gives the threshold quotients.
// `sector` adds the harmonic term m(N-2+m)/|x|^2 to the numerator; the
// infimum over all of H^1 is attained in sector 0 because that term only
// raises the quotient.
struct RayleighProblem {
    Dimension dim{3};
    RadialDomain domain = RadialDomain::ball(1.0);
    double alpha = 0.0;
    std::optional<RadialPotential> numerator_potential;
    RadialPotential weight = RadialPotential::inverse_square(Dimension(3), 1.0);
    int sector = 0;
};

struct EigenResult {
    double value = 0.0;            // best estimate (extrapolated when a study ran)
    RadialGrid grid;               // grid of the reported minimizer
    std::vector<double> minimizer; // denominator-norm 1
    double residual = 0.0;         // relative algebraic residual on that grid
    std::vector<double> trace;     // values across refinements / span doublings
    double extrapolated = 0.0;     // Aitken limit of the trace
};

// Discretized infimum on the given grid; `refine_levels` successive geometric
// midpoint refinements populate the convergence trace (nested trial spaces,
// so the trace decreases up to quadrature noise).
EigenResult solve_quotient(const RayleighProblem& p, const RadialGrid& grid,
                           int refine_levels = 1);

// Truncation study for domains with an artificial cutoff (ball centre,
// exterior infinity, whole space).  The log-extent of the artificial part
// doubles per level while the node density per unit log-radius stays fixed;
// every level is h-corrected by one Richardson step and the span trace is
// Aitken-extrapolated.  Truncation error decays like exp(-g*span) away from
// the critical boundary weight and like (pi/span)^2 at it; the (pi/span)^2
// series only reaches its asymptotic ratio around span ~ 50, so four doubled
// levels are needed before the extrapolation is trustworthy at the critical
// weight.
struct StudyOptions {
    int levels = 4;
    double base_span = 12.0;     // log-extent of the artificial side at level 0
    int nodes_per_unit = 64;     // grid nodes per unit of log-radius
    double max_span = 0.0;       // 0 = automatic overflow-safe cap
};

EigenResult solve_with_study(const RayleighProblem& p, const StudyOptions& opts = {});

// Closed forms on the unit-scale model domains:
// ball:      alpha (N-2-alpha) for 0 < alpha <= (N-2)/2, else ((N-2)/2)^2
// exterior:  alpha (N-2-alpha) for alpha >= (N-2)/2, else ((N-2)/2)^2
double lambda_ball_formula(const Dimension& dim, double alpha);
double mu_exterior_formula(const Dimension& dim, double alpha);

// Critical coupling thresholds of the matched Sobolev inequalities.
//   Base       inf over exterior of  [E(u) - (N-2)/2 * bdry] / int f u^2
//   LogRefined the same with boundary coefficient (N-2+k)/2, k >= 1
//   KelvinDual ball quotient with +(N-2-k)/2 and denominator int g u^2
// `density` is the tail f (power < -2) or core g (power > -2).  Results are
// checked against the theorem-level lower bounds (Base and LogRefined); a
// violation beyond discretization slack throws.
enum class ThresholdVariant { Base, LogRefined, KelvinDual };

EigenResult epsilon_threshold(const Dimension& dim, const PowerLaw& density,
                              ThresholdVariant variant, int k = 0,
                              const StudyOptions& opts = {});

// Strict-window test for minimizer existence: 0 < lambda_domain < lambda_ball
// where lambda_ball is the same quotient on the sub-ball of the given radius.
// An identically vanishing denominator on the sub-ball gives +infinity.
struct ExistenceRecord {
    double lambda_domain = 0.0;
    double lambda_ball = 0.0;
    bool holds = false;
    bool inconclusive = false;   // some gap is below tolerance
};

ExistenceRecord minimizer_existence_condition(const RayleighProblem& p,
                                              const RadialGrid& grid,
                                              double inner_radius, double tol = 1e-6);

} // namespace hardylab

#endif
