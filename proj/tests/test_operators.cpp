#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/operators.hpp"
#include "hardylab/tridiag.hpp"

using namespace hardylab;

namespace {

TridiagPencil laplace_chain(size_t n) {
    // second-difference matrix with identity mass: eigenvalues
    // 2 - 2 cos(k pi/(n+1)), k = 1..n
    TridiagPencil p;
    p.d.assign(n, 2.0);
    p.e.assign(n - 1, -1.0);
    p.m.assign(n, 1.0);
    return p;
}

double chain_eig(size_t n, size_t k) { return 2.0 - 2.0 * std::cos(k * M_PI / (n + 1.0)); }

} // namespace

TEST_CASE("inertia count on the second-difference matrix") {
    const size_t n = 100;
    const auto p = laplace_chain(n);
    CHECK(count_below(p, 2.0) == 50);
    CHECK(count_below(p, chain_eig(n, 7) + 1e-12) == 7);
    CHECK(count_below(p, -1.0) == 0);
    CHECK(count_below(p, 5.0) == 100);
}

TEST_CASE("smallest eigenpair of the second-difference matrix") {
    const size_t n = 100;
    const auto p = laplace_chain(n);
    const auto ep = smallest_eigenpair(p);
    CHECK(ep.value == doctest::Approx(chain_eig(n, 1)).epsilon(1e-12));
    // eigenvector proportional to sin(j pi/(n+1)), M-normalized
    double dot = 0.0, norm = 0.0, ref_norm = 0.0;
    for (size_t j = 0; j < n; ++j) {
        const double ref = std::sin((j + 1) * M_PI / (n + 1.0));
        dot += ep.vector[j] * ref;
        norm += ep.vector[j] * ep.vector[j];
        ref_norm += ref * ref;
    }
    CHECK(norm == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(std::fabs(dot) / std::sqrt(norm * ref_norm) == doctest::Approx(1.0).epsilon(1e-10));
}

TEST_CASE("eigenpairs below a cutoff") {
    const size_t n = 100;
    const auto p = laplace_chain(n);
    const double cutoff = 0.1;
    size_t expected = 0;
    while (expected < n && chain_eig(n, expected + 1) < cutoff) ++expected;
    const auto pairs = eigenpairs_below(p, cutoff);
    REQUIRE(pairs.size() == expected);
    for (size_t k = 0; k < pairs.size(); ++k)
        CHECK(pairs[k].value == doctest::Approx(chain_eig(n, k + 1)).epsilon(1e-11));
    // M-orthonormal
    for (size_t a = 0; a < pairs.size(); ++a)
        for (size_t b = a; b < pairs.size(); ++b) {
            double dot = 0.0;
            for (size_t j = 0; j < n; ++j) dot += pairs[a].vector[j] * pairs[b].vector[j];
            CHECK(dot == doctest::Approx(a == b ? 1.0 : 0.0).epsilon(1e-9));
        }
}

TEST_CASE("shifted tridiagonal solve") {
    const size_t n = 64;
    const auto p = laplace_chain(n);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    std::vector<double> b(n);
    for (auto& x : b) x = unif(rng);
    const double shift = 0.37;
    const auto x = shifted_solve(p, shift, b);
    for (size_t j = 0; j < n; ++j) {
        double tx = (p.d[j] - shift) * x[j];
        if (j > 0) tx += p.e[j - 1] * x[j - 1];
        if (j + 1 < n) tx += p.e[j] * x[j + 1];
        CHECK(tx == doctest::Approx(b[j]).epsilon(1e-10));
    }
}

TEST_CASE("dirichlet energy of a linear profile") {
    const Dimension dim(3);
    const auto g = make_grid(RadialDomain::ball(1.0), 4097, 1e-6);
    const auto stiff = stiffness_edges(dim, g);
    // u = r: |grad u| = 1, energy = |B^3| = 4 pi/3
    double energy = 0.0;
    for (size_t i = 0; i + 1 < g.size(); ++i) {
        const double du = g.r[i + 1] - g.r[i];
        energy += stiff[i] * du * du;
    }
    // second order in the log spacing, like the volume quadrature
    CHECK(energy == doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-5));
}

TEST_CASE("first dirichlet eigenvalue of the unit ball") {
    // radial mode sin(pi r)/r with eigenvalue pi^2
    const Dimension dim(3);
    const auto g = make_grid(RadialDomain::ball(1.0), 2049, 1e-4);
    WeightedOperator op;
    op.grid = g;
    op.stiff = stiffness_edges(dim, g);
    op.diag.assign(g.size(), 0.0);
    op.mass = quadrature_weights(dim, g, Measure::Volume);
    op.fixed.assign(g.size(), 0);
    op.fixed.back() = 1;  // u(1) = 0; the inner truncation stays free
    const auto ep = smallest_eigenpair(op.pencil());
    CHECK(ep.value == doctest::Approx(M_PI * M_PI).epsilon(1e-3));
}

TEST_CASE("boundary point masses follow the outward normal") {
    const Dimension dim(4);
    const double area = dim.sphere_area();

    const auto ball = make_grid(RadialDomain::ball(2.0), 33, 1e-3);
    const auto bb = boundary_point_masses(dim, ball, 0.7);
    CHECK(bb.back() == doctest::Approx(0.7 * area * std::pow(2.0, dim.n - 2)).epsilon(1e-13));
    for (size_t j = 0; j + 1 < bb.size(); ++j) CHECK(bb[j] == 0.0);

    const auto ext = make_grid(RadialDomain::exterior(1.5, 100.0), 33);
    const auto be = boundary_point_masses(dim, ext, 0.7);
    CHECK(be.front() ==
          doctest::Approx(-0.7 * area * std::pow(1.5, dim.n - 2)).epsilon(1e-13));
    for (size_t j = 1; j < be.size(); ++j) CHECK(be[j] == 0.0);

    const auto ws = make_grid(RadialDomain::whole_space(1e-3, 100.0), 33);
    for (double v : boundary_point_masses(dim, ws, 0.7)) CHECK(v == 0.0);
}

TEST_CASE("ground-transform product stiffness is exact in floating point") {
    // With edge weights a_i phi_i phi_{i+1} and the induced potential
    // p = ((A+B) phi)/phi, the identity
    //   Q_{A+B}(phi w) - sum_j p_j (phi_j w_j)^2 = sum_i a_i phi_i phi_{i+1} (dw)^2
    // holds to round-off for every nodal vector w.
    const Dimension dim(3);
    const auto g = make_grid(RadialDomain::ball(1.0), 257, 1e-4);
    const auto stiff = stiffness_edges(dim, g);
    std::vector<double> boundary(g.size(), 0.0);
    boundary.back() = 2.37;  // an arbitrary point mass at the outer sphere

    std::vector<double> phi(g.size());
    for (size_t j = 0; j < g.size(); ++j) phi[j] = std::pow(g.r[j], -0.5);
    const auto wstiff = weighted_stiffness_edges(dim, g, phi);
    const auto p = induced_potential(stiff, boundary, phi);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> unif(-1.0, 1.0);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> w(g.size());
        for (auto& x : w) x = unif(rng);

        std::vector<double> u(g.size());
        for (size_t j = 0; j < g.size(); ++j) u[j] = phi[j] * w[j];

        double lhs = 0.0;
        for (size_t i = 0; i + 1 < g.size(); ++i) {
            const double du = u[i + 1] - u[i];
            lhs += stiff[i] * du * du;
        }
        for (size_t j = 0; j < g.size(); ++j)
            lhs += boundary[j] * u[j] * u[j] - p[j] * u[j] * u[j];

        double rhs = 0.0;
        for (size_t i = 0; i + 1 < g.size(); ++i) {
            const double dw = w[i + 1] - w[i];
            rhs += wstiff[i] * dw * dw;
        }
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-10));
    }
}

TEST_CASE("dirichlet flags reduce and expand consistently") {
    const Dimension dim(3);
    const auto g = make_grid(RadialDomain::annulus(1.0, 2.0), 17);
    WeightedOperator op;
    op.grid = g;
    op.stiff = stiffness_edges(dim, g);
    op.diag.assign(g.size(), 0.3);
    op.mass = quadrature_weights(dim, g, Measure::Volume);
    op.fixed.assign(g.size(), 0);
    op.fixed.front() = 1;
    op.fixed.back() = 1;

    const auto pen = op.pencil();
    CHECK(pen.size() == g.size() - 2);

    std::vector<double> reduced(pen.size(), 1.5);
    const auto full = op.expand(reduced);
    REQUIRE(full.size() == g.size());
    CHECK(full.front() == 0.0);
    CHECK(full.back() == 0.0);
    const auto back = op.restrict_to_free(full);
    CHECK(back == reduced);

    // the quadratic form of the expanded vector matches the pencil's
    double pf = 0.0;
    for (size_t j = 0; j < pen.size(); ++j) {
        pf += pen.d[j] * reduced[j] * reduced[j];
        if (j + 1 < pen.size()) pf += 2.0 * pen.e[j] * reduced[j] * reduced[j + 1];
    }
    CHECK(op.form(full) == doctest::Approx(pf).epsilon(1e-12));
}
