#ifndef HARDYLAB_GRID_HPP
#define HARDYLAB_GRID_HPP

#include <vector>

#include "hardylab/dimension.hpp"

namespace hardylab {

// Radial domains of the one-dimensional reduction.  All problems are posed
// on an interval of radii [inner, outer]:
//   Ball        (0, R]           -- truncated at inner = r_min_fraction * R
//   Exterior    [R, R_inf]       -- truncation radius R_inf supplied
//   Annulus     [a, b]
//   WholeSpace  [r_min, R_inf]   -- truncated at both ends, node pinned at r = 1
struct RadialDomain {
    enum class Kind { Ball, Exterior, Annulus, WholeSpace };

    Kind kind = Kind::Ball;
    double inner = 0.0;   // Ball: derived from r_min_fraction; others: given
    double outer = 1.0;

    static RadialDomain ball(double R) { return {Kind::Ball, 0.0, R}; }
    static RadialDomain exterior(double R, double R_inf) {
        return {Kind::Exterior, R, R_inf};
    }
    static RadialDomain annulus(double a, double b) { return {Kind::Annulus, a, b}; }
    static RadialDomain whole_space(double r_min, double R_inf) {
        return {Kind::WholeSpace, r_min, R_inf};
    }
};

// Log-uniform (geometric) node set covering the domain's radial interval.
// WholeSpace grids are built as two geometric pieces joined at r = 1 with
// matched log-spacing, so potentials switching branches at |x| = 1 always
// see a node there.  refined() inserts the geometric midpoint of every
// interval; the parent's nodes are a subset of the child's by construction.
struct RadialGrid {
    RadialDomain domain;
    std::vector<double> r;   // strictly increasing nodes

    size_t size() const { return r.size(); }
    RadialGrid refined() const;
};

// Build a grid with n nodes.  For Ball domains the inner truncation radius is
// r_min_fraction * R; r_min_fraction must lie in (0, 1e-2].  Other domain
// kinds carry their radii explicitly and ignore r_min_fraction.
RadialGrid make_grid(const RadialDomain& domain, int n, double r_min_fraction = 1e-6);

// Uniform node spacing over a truncated whole space.  Spectral sums need the
// oscillation scale 1/sqrt(lambda) resolved uniformly in r, which a geometric
// grid pays for with a huge node count at large radii; this is the right
// spacing for heat-kernel work on WholeSpace domains.  The node closest to
// r = 1 is snapped there so branch-switching potentials keep a node at the
// seam.
RadialGrid make_uniform_grid(const RadialDomain& domain, int n);

// Radial measures of the reduction, all including the angular factor
// N * omega_N:
//   Volume   r^{N-1} dr
//   Hardy    r^{N-3} dr      (i.e. u^2/|x|^2 against volume)
//   Weighted phi(r)^2 r^{N-1} dr
enum class Measure { Volume, Hardy, Weighted };

// Trapezoid node weights against the chosen measure.  phi is required for
// Measure::Weighted and ignored otherwise.
std::vector<double> quadrature_weights(const Dimension& dim, const RadialGrid& grid,
                                       Measure measure,
                                       const std::vector<double>* phi = nullptr);

// Trapezoid integral of sampled values against the measure:
// sum_j w_j values_j with w from quadrature_weights.
double quadrature(const Dimension& dim, const RadialGrid& grid,
                  const std::vector<double>& values, Measure measure,
                  const std::vector<double>* phi = nullptr);

} // namespace hardylab

#endif
