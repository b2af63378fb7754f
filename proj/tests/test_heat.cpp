#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/ground_state.hpp"
#include "hardylab/heat.hpp"
#include "hardylab/potential.hpp"

using namespace hardylab;

namespace {

size_t node_near(const RadialGrid& g, double r) {
    size_t best = 0;
    for (size_t j = 1; j < g.size(); ++j)
        if (std::fabs(g.r[j] - r) < std::fabs(g.r[best] - r)) best = j;
    return best;
}

// Dirichlet kernel of the free Laplacian on the unit ball of R^3, sector 0:
// modes sin(n pi r) / (r sqrt(2 pi)), eigenvalues (n pi)^2.
double string_kernel(double t, double r) {
    double s = 0.0;
    for (int n = 1; n * n * M_PI * M_PI * t < 40.0; ++n) {
        const double a = std::sin(n * M_PI * r);
        s += std::exp(-n * n * M_PI * M_PI * t) * a * a;
    }
    return s / (2.0 * M_PI * r * r);
}

} // namespace

TEST_CASE("sector-0 ball kernel against the sine series") {
    const Dimension d3(3);
    const auto ground = build_ground_state(d3, RadialPotential::inverse_square(d3, 0.0));
    const auto g = make_grid(RadialDomain::ball(1.0), 4097, 1e-2);
    const std::vector<double> t{1e-3, 1e-2, 0.1, 0.5, 0.6};
    const auto sk = sector_diagonal(d3, ground, 0, t, g);

    CHECK(sk.eigenvalues.front() == doctest::Approx(M_PI * M_PI).epsilon(1e-4));
    for (size_t it = 0; it < 3; ++it)
        for (double r : {0.3, 0.7}) {
            const size_t j = node_near(g, r);
            CHECK(sk.diag[it][j] ==
                  doctest::Approx(string_kernel(t[it], g.r[j])).epsilon(5e-3));
        }

    SUBCASE("large-time decay rate recovers the bottom eigenvalue") {
        const size_t j = node_near(g, 0.5);
        const double rate = std::log(sk.diag[3][j] / sk.diag[4][j]) / (t[4] - t[3]);
        CHECK(rate == doctest::Approx(sk.eigenvalues.front()).epsilon(1e-5));
    }

    SUBCASE("spectral representation passes the semigroup checks") {
        const auto rep = semigroup_check(sk);
        CHECK(rep.ck_gap <= 1e-6);
        CHECK(rep.domination_excess <= 1e-6);
        CHECK(rep.monotonicity_excess <= 1e-6);
        CHECK(rep.holds);
    }
}

TEST_CASE("free whole-space kernel approaches (4 pi t)^{-3/2} inside the window") {
    const Dimension d3(3);
    const auto ground = build_ground_state(d3, RadialPotential::inverse_square(d3, 0.0));
    const auto g = make_uniform_grid(RadialDomain::whole_space(1e-3, 2.0), 513);
    const std::vector<double> t{1e-2, 2.5e-2};
    const auto dk = assemble_diagonal(d3, ground, t, g, -1, 0.5);
    CHECK(dk.cutoff_sufficient);

    double worst = 0.0;
    for (size_t it = 0; it < t.size(); ++it) {
        const double free_value = std::pow(4.0 * M_PI * t[it], -1.5);
        for (size_t j = 0; j < g.size(); ++j) {
            if (g.r[j] < 0.1 || g.r[j] > 0.5) continue;
            worst = std::max(worst, std::fabs(dk.values[it][j] / free_value - 1.0));
        }
    }
    CHECK(worst < 0.025);
}

TEST_CASE("under-resolved time grid is refused") {
    const Dimension d3(3);
    const auto ground = build_ground_state(d3, RadialPotential::inverse_square(d3, 0.0));
    const auto g = make_grid(RadialDomain::ball(1.0), 129, 1e-2);
    bool thrown = false;
    try {
        sector_diagonal(d3, ground, 0, {1e-9}, g);
    } catch (const std::runtime_error& e) {
        thrown = true;
        CHECK(std::string(e.what()).find("under-resolved") != std::string::npos);
    }
    CHECK(thrown);
}

TEST_CASE("scaled-envelope certificate for a subcritical coupling on the ball") {
    const Dimension d3(3);
    const auto V = RadialPotential::inverse_square(d3, 3.0 / 16.0);
    const auto ground = build_ground_state(d3, V);
    CHECK(ground.exponent == doctest::Approx(-0.25).epsilon(1e-14));
    const auto g = make_grid(RadialDomain::ball(1.0), 257, 1e-2);
    const auto rep =
        check_bound(d3, ground, BoundKind::SubcriticalBounded, {1e-2, 3e-2, 1e-1}, g);
    CHECK(rep.pass);
    CHECK(rep.refinement_stable);
    CHECK(rep.cutoff_sufficient);
    CHECK(std::isfinite(rep.sup_ratio));
    CHECK(rep.sup_ratio > 0.0);
    // the refined sup cannot collapse either: same kernel, finer sampling
    CHECK(rep.sup_ratio > 0.5 * rep.coarse_sup);
}

TEST_CASE("scan refuses a window with no trusted samples") {
    const Dimension d3(3);
    const auto ground = build_ground_state(d3, RadialPotential::inverse_square(d3, 0.0));
    const auto g = make_uniform_grid(RadialDomain::whole_space(1e-2, 2.0), 65);
    // t = 1 is far beyond (R_inf/4)^2/4 = 1/16: every sample is wall-polluted
    const auto dk = assemble_diagonal(d3, ground, {1.0}, g, -1, 0.5);
    CHECK_THROWS_AS(scan_bound(dk, ground, BoundKind::WholeSpacePotential),
                    std::invalid_argument);
}

TEST_CASE("ground transform identity for power-law and log-refined weights") {
    const Dimension d3(3);
    const auto g = make_grid(RadialDomain::ball(1.0), 513, 1e-4);

    const auto v1 = RadialPotential::inverse_square(d3, 0.75 * d3.critical_coupling());
    const auto rep1 = ground_transform_check(d3, v1, build_ground_state(d3, v1), g);
    CHECK(rep1.holds);
    CHECK(rep1.max_relative_gap <= 1e-6);

    const auto v2 = RadialPotential::iterated_log_bounded(d3, 1, 0.2, 1.0);
    const auto rep2 = ground_transform_check(d3, v2, build_ground_state(d3, v2), g);
    CHECK(rep2.holds);
    CHECK(rep2.ground_residual < 1e-4);
}
