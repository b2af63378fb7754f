#include "hardylab/operators.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab {

double WeightedOperator::form(const std::vector<double>& u) const {
    double q = 0.0;
    for (std::size_t i = 0; i + 1 < size(); ++i) {
        const double du = u[i + 1] - u[i];
        q += stiff[i] * du * du;
    }
    for (std::size_t j = 0; j < size(); ++j) q += diag[j] * u[j] * u[j];
    return q;
}

double WeightedOperator::mass_form(const std::vector<double>& u) const {
    double q = 0.0;
    for (std::size_t j = 0; j < size(); ++j) q += mass[j] * u[j] * u[j];
    return q;
}

std::vector<double> WeightedOperator::apply(const std::vector<double>& u) const {
    const std::size_t n = size();
    std::vector<double> y(n, 0.0);
    for (std::size_t j = 0; j < n; ++j) {
        double v = diag[j] * u[j];
        if (j > 0) v += stiff[j - 1] * (u[j] - u[j - 1]);
        if (j + 1 < n) v += stiff[j] * (u[j] - u[j + 1]);
        y[j] = v;
    }
    return y;
}

TridiagPencil WeightedOperator::pencil() const {
    const std::size_t n = size();
    std::vector<std::size_t> free_idx;
    free_idx.reserve(n);
    for (std::size_t j = 0; j < n; ++j)
        if (!fixed[j]) free_idx.push_back(j);
    if (free_idx.empty()) throw std::runtime_error("operator: all nodes are Dirichlet-fixed");

    TridiagPencil p;
    const std::size_t nf = free_idx.size();
    p.d.resize(nf);
    p.e.assign(nf > 1 ? nf - 1 : 0, 0.0);
    p.m.resize(nf);
    for (std::size_t a = 0; a < nf; ++a) {
        const std::size_t j = free_idx[a];
        double dj = diag[j];
        if (j > 0) dj += stiff[j - 1];
        if (j + 1 < n) dj += stiff[j];
        p.d[a] = dj;
        p.m[a] = mass[j];
        if (a + 1 < nf && free_idx[a + 1] == j + 1) p.e[a] = -stiff[j];
    }
    return p;
}

std::vector<double> WeightedOperator::expand(const std::vector<double>& reduced) const {
    std::vector<double> full(size(), 0.0);
    std::size_t a = 0;
    for (std::size_t j = 0; j < size(); ++j)
        if (!fixed[j]) full[j] = reduced[a++];
    if (a != reduced.size()) throw std::invalid_argument("operator: free-node count mismatch");
    return full;
}

std::vector<double> WeightedOperator::restrict_to_free(const std::vector<double>& full) const {
    if (full.size() != size()) throw std::invalid_argument("operator: vector size mismatch");
    std::vector<double> reduced;
    reduced.reserve(size());
    for (std::size_t j = 0; j < size(); ++j)
        if (!fixed[j]) reduced.push_back(full[j]);
    return reduced;
}

std::vector<double> stiffness_edges(const Dimension& dim, const RadialGrid& grid) {
    const std::size_t n = grid.size();
    const double area = dim.sphere_area();
    std::vector<double> a(n > 1 ? n - 1 : 0);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        const double h = grid.r[i + 1] - grid.r[i];
        const double rho = 0.5 * (std::pow(grid.r[i], dim.n - 1) +
                                  std::pow(grid.r[i + 1], dim.n - 1));
        a[i] = area * rho / h;
    }
    return a;
}

std::vector<double> weighted_stiffness_edges(const Dimension& dim, const RadialGrid& grid,
                                             const std::vector<double>& phi) {
    if (phi.size() != grid.size())
        throw std::invalid_argument("weighted_stiffness_edges: weight size mismatch");
    auto a = stiffness_edges(dim, grid);
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= phi[i] * phi[i + 1];
    return a;
}

std::vector<double> induced_potential(const std::vector<double>& stiff,
                                      const std::vector<double>& boundary,
                                      const std::vector<double>& phi) {
    const std::size_t n = phi.size();
    if (boundary.size() != n || (n > 0 && stiff.size() != n - 1))
        throw std::invalid_argument("induced_potential: size mismatch");
    std::vector<double> p(n);
    for (std::size_t j = 0; j < n; ++j) {
        if (!(phi[j] > 0.0))
            throw std::domain_error("induced_potential: weight must be strictly positive");
        double v = boundary[j] * phi[j];
        if (j > 0) v += stiff[j - 1] * (phi[j] - phi[j - 1]);
        if (j + 1 < n) v += stiff[j] * (phi[j] - phi[j + 1]);
        p[j] = v / phi[j];
    }
    return p;
}

std::vector<double> boundary_point_masses(const Dimension& dim, const RadialGrid& grid,
                                          double alpha) {
    const std::size_t n = grid.size();
    std::vector<double> b(n, 0.0);
    const double area = dim.sphere_area();
    const auto sphere_term = [&](double radius) {
        return alpha * area * std::pow(radius, dim.n - 2);
    };
    switch (grid.domain.kind) {
    case RadialDomain::Kind::Ball:
        b[n - 1] = sphere_term(grid.domain.outer);
        break;
    case RadialDomain::Kind::Exterior:
        b[0] = -sphere_term(grid.domain.inner);
        break;
    case RadialDomain::Kind::Annulus:
        b[0] = -sphere_term(grid.domain.inner);
        b[n - 1] = sphere_term(grid.domain.outer);
        break;
    case RadialDomain::Kind::WholeSpace:
        break;
    }
    return b;
}

} // namespace hardylab
