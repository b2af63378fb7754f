#ifndef HARDYLAB_KELVIN_HPP
#define HARDYLAB_KELVIN_HPP

#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"

namespace hardylab {

// Inversion image of a radial grid function: s = 1/r (nodes reversed, so the
// image grid is increasing again) and v(s) = s^{2-N} u(1/s) = r^{N-2} u(r).
struct KelvinImage {
    RadialGrid grid;             // annulus [1/r_max, 1/r_min]
    std::vector<double> values;  // v at the image nodes
};

KelvinImage kelvin_transform(const Dimension& dim, const RadialGrid& grid,
                             const std::vector<double>& u);

// Energy bookkeeping of the inversion.  For radial u on [R0, R1],
//
//   int |grad v|^2 over the image annulus
//     = int |grad u|^2 over [R0, R1]
//       + (N-2) |S^{N-1}| ( R1^{N-2} u(R1)^2 - R0^{N-2} u(R0)^2 ),
//
// an exact identity of the continuum.  Both sides are evaluated with the
// trapezoid Dirichlet form of this library, so the reported mismatch is the
// (second-order) discretization defect, not a modeling error.
struct KelvinCheck {
    double image_energy = 0.0;     // Dirichlet form of v on the image grid
    double source_energy = 0.0;    // Dirichlet form of u on the source grid
    double boundary_term = 0.0;    // (N-2)*area*(R1^{N-2}u(R1)^2 - R0^{N-2}u(R0)^2)
    double mismatch = 0.0;         // |image - source - boundary| / scale
};

KelvinCheck kelvin_energy_check(const Dimension& dim, const RadialGrid& grid,
                                const std::vector<double>& u);

} // namespace hardylab

#endif
