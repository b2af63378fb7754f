#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"

using namespace hardylab;

TEST_CASE("ball grid geometry") {
    const auto g = make_grid(RadialDomain::ball(2.0), 65, 1e-4);
    REQUIRE(g.size() == 65);
    CHECK(g.r.front() == doctest::Approx(2e-4).epsilon(1e-15));
    CHECK(g.r.back() == 2.0);
    CHECK(g.domain.inner == doctest::Approx(2e-4).epsilon(1e-15));
    // geometric: constant ratio between neighbours
    const double q = g.r[1] / g.r[0];
    for (size_t i = 1; i + 1 < g.size(); ++i)
        CHECK(g.r[i + 1] / g.r[i] == doctest::Approx(q).epsilon(1e-12));
    CHECK_THROWS_AS(make_grid(RadialDomain::ball(1.0), 65, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(RadialDomain::ball(1.0), 1), std::invalid_argument);
}

TEST_CASE("whole-space grid carries a node at the seam r = 1") {
    const auto g = make_grid(RadialDomain::whole_space(1e-4, 1e3), 257);
    bool seam = false;
    for (double r : g.r) seam = seam || r == 1.0;
    CHECK(seam);
    CHECK(g.r.front() == 1e-4);
    CHECK(g.r.back() == 1e3);
}

TEST_CASE("refinement nests the parent grid") {
    const auto g = make_grid(RadialDomain::annulus(0.5, 8.0), 33);
    const auto f = g.refined();
    REQUIRE(f.size() == 65);
    for (size_t i = 0; i < g.size(); ++i) CHECK(f.r[2 * i] == g.r[i]);
    for (size_t i = 0; i + 1 < g.size(); ++i)
        CHECK(f.r[2 * i + 1] ==
              doctest::Approx(std::sqrt(g.r[i] * g.r[i + 1])).epsilon(1e-15));
}

TEST_CASE("uniform whole-space grid") {
    const auto g = make_uniform_grid(RadialDomain::whole_space(1e-3, 4.0), 801);
    REQUIRE(g.size() == 801);
    const double h = g.r[1] - g.r[0];
    bool seam = false;
    for (size_t i = 0; i + 1 < g.size(); ++i) {
        const double hi = g.r[i + 1] - g.r[i];
        CHECK(std::fabs(hi - h) <= 0.51 * h);  // only the snapped seam deviates
        seam = seam || g.r[i] == 1.0;
    }
    CHECK(seam);
    CHECK(g.r.back() == 4.0);
    CHECK_THROWS_AS(make_uniform_grid(RadialDomain::ball(1.0), 65), std::invalid_argument);
}

TEST_CASE("volume quadrature against closed integrals") {
    const Dimension dim(3);
    const auto g = make_grid(RadialDomain::ball(1.0), 4097, 1e-6);

    // |B^3| = 4 pi/3   (trapezoid on the geometric grid is second order in
    // the log spacing, about 2e-6 relative at this size)
    std::vector<double> one(g.size(), 1.0);
    CHECK(quadrature(dim, g, one, Measure::Volume) ==
          doctest::Approx(4.0 * M_PI / 3.0).epsilon(1e-5));

    // int r dV = 4 pi / 4 = pi
    std::vector<double> lin(g.size());
    for (size_t j = 0; j < g.size(); ++j) lin[j] = g.r[j];
    CHECK(quadrature(dim, g, lin, Measure::Volume) == doctest::Approx(M_PI).epsilon(1e-5));
}

TEST_CASE("hardy weights are the volume weights divided by r^2") {
    // Identical trapezoid cells make this an exact nodal identity, which the
    // operator assembly relies on when mixing the two measures.
    const Dimension dim(5);
    const auto g = make_grid(RadialDomain::whole_space(1e-5, 1e2), 513);
    const auto wv = quadrature_weights(dim, g, Measure::Volume);
    const auto wh = quadrature_weights(dim, g, Measure::Hardy);
    for (size_t j = 0; j < g.size(); ++j)
        CHECK(wh[j] == doctest::Approx(wv[j] / (g.r[j] * g.r[j])).epsilon(1e-14));
}

TEST_CASE("weighted measure is phi^2 times volume, nodally") {
    const Dimension dim(4);
    const auto g = make_grid(RadialDomain::annulus(0.1, 10.0), 257);
    std::vector<double> phi(g.size());
    for (size_t j = 0; j < g.size(); ++j) phi[j] = std::pow(g.r[j], -0.7);
    const auto wv = quadrature_weights(dim, g, Measure::Volume);
    const auto ww = quadrature_weights(dim, g, Measure::Weighted, &phi);
    for (size_t j = 0; j < g.size(); ++j)
        CHECK(ww[j] == doctest::Approx(phi[j] * phi[j] * wv[j]).epsilon(1e-14));
    CHECK_THROWS_AS(quadrature_weights(dim, g, Measure::Weighted, nullptr),
                    std::invalid_argument);
}

TEST_CASE("quadrature equals the weight pairing") {
    const Dimension dim(3);
    const auto g = make_grid(RadialDomain::exterior(1.0, 50.0), 129);
    std::vector<double> u(g.size());
    for (size_t j = 0; j < g.size(); ++j) u[j] = std::sin(0.3 * g.r[j]) + 1.2;
    const auto w = quadrature_weights(dim, g, Measure::Volume);
    double s = 0.0;
    for (size_t j = 0; j < g.size(); ++j) s += w[j] * u[j];
    CHECK(quadrature(dim, g, u, Measure::Volume) == doctest::Approx(s).epsilon(1e-15));
}
