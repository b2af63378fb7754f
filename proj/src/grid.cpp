#include "hardylab/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab {
namespace {

// n geometric nodes from a to b (both included), appended to out.
void geometric_nodes(double a, double b, int n, std::vector<double>& out) {
    const double la = std::log(a), lb = std::log(b);
    for (int i = 0; i < n; ++i) {
        const double f = static_cast<double>(i) / static_cast<double>(n - 1);
        out.push_back(i == 0 ? a : (i == n - 1 ? b : std::exp(la + f * (lb - la))));
    }
}

} // namespace

RadialGrid RadialGrid::refined() const {
    RadialGrid fine;
    fine.domain = domain;
    fine.r.reserve(2 * r.size() - 1);
    for (size_t i = 0; i + 1 < r.size(); ++i) {
        fine.r.push_back(r[i]);
        fine.r.push_back(std::sqrt(r[i] * r[i + 1]));  // geometric midpoint
    }
    fine.r.push_back(r.back());
    return fine;
}

RadialGrid make_grid(const RadialDomain& domain, int n, double r_min_fraction) {
    if (n < 2) throw std::invalid_argument("make_grid: need at least 2 nodes");
    RadialGrid g;
    g.domain = domain;
    g.r.reserve(static_cast<size_t>(n));

    switch (domain.kind) {
        case RadialDomain::Kind::Ball: {
            if (!(r_min_fraction > 0.0) || r_min_fraction > 1e-2)
                throw std::invalid_argument("make_grid: r_min_fraction must lie in (0, 1e-2]");
            if (!(domain.outer > 0.0))
                throw std::invalid_argument("make_grid: ball radius must be positive");
            g.domain.inner = r_min_fraction * domain.outer;
            geometric_nodes(g.domain.inner, domain.outer, n, g.r);
            break;
        }
        case RadialDomain::Kind::Exterior:
        case RadialDomain::Kind::Annulus: {
            if (!(domain.inner > 0.0) || !(domain.outer > domain.inner))
                throw std::invalid_argument("make_grid: need 0 < inner < outer");
            geometric_nodes(domain.inner, domain.outer, n, g.r);
            break;
        }
        case RadialDomain::Kind::WholeSpace: {
            if (!(domain.inner > 0.0) || domain.inner >= 1.0 || !(domain.outer > 1.0))
                throw std::invalid_argument("make_grid: whole-space needs r_min < 1 < R_inf");
            // Split n-1 intervals between [r_min,1] and [1,R_inf] in
            // proportion to their log-lengths, keeping r = 1 as a node.
            const double l1 = -std::log(domain.inner);
            const double l2 = std::log(domain.outer);
            int m1 = static_cast<int>(std::lround((n - 1) * l1 / (l1 + l2)));
            m1 = std::max(1, std::min(n - 2, m1));
            const int m2 = (n - 1) - m1;
            geometric_nodes(domain.inner, 1.0, m1 + 1, g.r);
            g.r.pop_back();  // the shared node at r = 1
            geometric_nodes(1.0, domain.outer, m2 + 1, g.r);
            break;
        }
    }
    return g;
}

RadialGrid make_uniform_grid(const RadialDomain& domain, int n) {
    if (domain.kind != RadialDomain::Kind::WholeSpace)
        throw std::invalid_argument("make_uniform_grid: only WholeSpace domains supported");
    if (n < 2) throw std::invalid_argument("make_uniform_grid: need at least 2 nodes");
    if (!(domain.inner > 0.0) || domain.inner >= 1.0 || !(domain.outer > 1.0))
        throw std::invalid_argument("make_uniform_grid: whole-space needs r_min < 1 < R_inf");

    RadialGrid g;
    g.domain = domain;
    g.r.resize(static_cast<size_t>(n));
    const double h = (domain.outer - domain.inner) / (n - 1);
    for (int i = 0; i < n; ++i) g.r[static_cast<size_t>(i)] = domain.inner + h * i;
    g.r.back() = domain.outer;

    size_t seam = 0;
    for (size_t i = 1; i < g.r.size(); ++i)
        if (std::fabs(g.r[i] - 1.0) < std::fabs(g.r[seam] - 1.0)) seam = i;
    if (seam > 0 && seam + 1 < g.r.size()) g.r[seam] = 1.0;
    return g;
}

std::vector<double> quadrature_weights(const Dimension& dim, const RadialGrid& grid,
                                       Measure measure, const std::vector<double>* phi) {
    const size_t n = grid.size();
    if (measure == Measure::Weighted) {
        if (phi == nullptr || phi->size() != n)
            throw std::invalid_argument("quadrature_weights: weighted measure needs phi on the grid");
    }
    const double area = dim.sphere_area();
    const int p = (measure == Measure::Hardy) ? dim.n - 3 : dim.n - 1;

    std::vector<double> density(n);
    for (size_t j = 0; j < n; ++j) {
        double d = std::pow(grid.r[j], p);
        if (measure == Measure::Weighted) d *= (*phi)[j] * (*phi)[j];
        density[j] = area * d;
    }
    std::vector<double> w(n, 0.0);
    for (size_t i = 0; i + 1 < n; ++i) {
        const double h = grid.r[i + 1] - grid.r[i];
        w[i] += 0.5 * h * density[i];
        w[i + 1] += 0.5 * h * density[i + 1];
    }
    return w;
}

double quadrature(const Dimension& dim, const RadialGrid& grid,
                  const std::vector<double>& values, Measure measure,
                  const std::vector<double>* phi) {
    if (values.size() != grid.size())
        throw std::invalid_argument("quadrature: values must be sampled on the grid");
    const auto w = quadrature_weights(dim, grid, measure, phi);
    double s = 0.0;
    for (size_t j = 0; j < grid.size(); ++j) s += w[j] * values[j];
    return s;
}

} // namespace hardylab
