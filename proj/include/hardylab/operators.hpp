#ifndef HARDYLAB_OPERATORS_HPP
#define HARDYLAB_OPERATORS_HPP

#include <cstddef>
#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/tridiag.hpp"

namespace hardylab {

// Quadratic form
//     Q(u) = sum_i stiff[i] (u[i+1]-u[i])^2 + sum_j diag[j] u[j]^2
// together with a diagonal mass form sum_j mass[j] u[j]^2.  All coefficients
// are fully assembled (quadrature weights and the sphere-area factor are baked
// in), so forms of different operators on the same grid can be added entry by
// entry.  Nodes with fixed[j] != 0 carry a homogeneous Dirichlet condition.
struct WeightedOperator {
    RadialGrid grid;
    std::vector<double> stiff;          // size n-1, edge coefficients
    std::vector<double> diag;           // size n, nodal form diagonal
    std::vector<double> mass;           // size n, mass form diagonal
    std::vector<unsigned char> fixed;   // size n, Dirichlet flags

    std::size_t size() const { return grid.size(); }

    double form(const std::vector<double>& u) const;
    double mass_form(const std::vector<double>& u) const;
    std::vector<double> apply(const std::vector<double>& u) const;

    // Pencil over the free (non-Dirichlet) nodes.
    TridiagPencil pencil() const;
    // Pad a free-node vector with zeros at Dirichlet nodes.
    std::vector<double> expand(const std::vector<double>& reduced) const;
    // Drop Dirichlet nodes from a full-size vector.
    std::vector<double> restrict_to_free(const std::vector<double>& full) const;
};

// Edge coefficients of the Dirichlet energy of a piecewise-linear radial
// function: stiff[i] ~ area(S^{N-1}) * int_{r_i}^{r_{i+1}} r^{N-1} dr / h_i^2
// with the cell integral evaluated by the trapezoid rule.
std::vector<double> stiffness_edges(const Dimension& dim, const RadialGrid& grid);

// Edge coefficients stiff[i] * phi[i] * phi[i+1].  The product form makes the
// ground-state transform identity hold exactly in floating point:
//   Q_{A+B}(phi.w) - sum_j p_j (phi_j w_j)^2 = sum_i a_i phi_i phi_{i+1} (dw)^2
// where p = induced_potential(stiff, boundary, phi).
std::vector<double> weighted_stiffness_edges(const Dimension& dim, const RadialGrid& grid,
                                             const std::vector<double>& phi);

// Nodal diagonal p_j = ((A + B) phi)_j / phi_j of the discrete operator with
// edge coefficients `stiff` and diagonal point masses `boundary`.
std::vector<double> induced_potential(const std::vector<double>& stiff,
                                      const std::vector<double>& boundary,
                                      const std::vector<double>& phi);

// Point masses of the form  alpha * int_{boundary} (x.nu/|x|^2) u^2 dS  with nu
// the outward normal of the domain: +alpha*area*R^{N-2} at an outer sphere of
// radius R, -alpha*area*R^{N-2} at an inner sphere (where x.nu = -R).  The
// truncation radius of Exterior and WholeSpace domains carries no term.
std::vector<double> boundary_point_masses(const Dimension& dim, const RadialGrid& grid,
                                          double alpha);

} // namespace hardylab

#endif
