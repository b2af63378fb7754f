#include "hardylab/kelvin.hpp"

#include <cmath>
#include <stdexcept>

#include "hardylab/operators.hpp"

namespace hardylab {

KelvinImage kelvin_transform(const Dimension& dim, const RadialGrid& grid,
                             const std::vector<double>& u) {
    const size_t n = grid.size();
    if (u.size() != n) throw std::invalid_argument("kelvin: sample size mismatch");
    KelvinImage img;
    img.grid.domain = RadialDomain::annulus(1.0 / grid.r.back(), 1.0 / grid.r.front());
    img.grid.r.resize(n);
    img.values.resize(n);
    for (size_t j = 0; j < n; ++j) {
        const size_t src = n - 1 - j;
        const double r = grid.r[src];
        img.grid.r[j] = 1.0 / r;
        img.values[j] = std::pow(r, dim.n - 2) * u[src];
    }
    return img;
}

namespace {

double dirichlet_form(const Dimension& dim, const RadialGrid& grid,
                      const std::vector<double>& u) {
    const auto a = stiffness_edges(dim, grid);
    double q = 0.0;
    for (size_t i = 0; i + 1 < grid.size(); ++i) {
        const double du = u[i + 1] - u[i];
        q += a[i] * du * du;
    }
    return q;
}

} // namespace

KelvinCheck kelvin_energy_check(const Dimension& dim, const RadialGrid& grid,
                                const std::vector<double>& u) {
    const auto img = kelvin_transform(dim, grid, u);
    KelvinCheck chk;
    chk.image_energy = dirichlet_form(dim, img.grid, img.values);
    chk.source_energy = dirichlet_form(dim, grid, u);
    const double area = dim.sphere_area();
    const double r0 = grid.r.front(), r1 = grid.r.back();
    chk.boundary_term = (dim.n - 2) * area *
                        (std::pow(r1, dim.n - 2) * u.back() * u.back() -
                         std::pow(r0, dim.n - 2) * u.front() * u.front());
    const double expect = chk.source_energy + chk.boundary_term;
    const double scale = std::fabs(chk.image_energy) + std::fabs(chk.source_energy) +
                         std::fabs(chk.boundary_term) + 1e-300;
    chk.mismatch = std::fabs(chk.image_energy - expect) / scale;
    return chk;
}

} // namespace hardylab
