#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/ground_state.hpp"
#include "hardylab/kelvin.hpp"
#include "hardylab/potential.hpp"
#include "hardylab/shooting.hpp"
#include "hardylab/special.hpp"

using namespace hardylab;

TEST_CASE("potential families evaluate their defining formulas") {
    const Dimension d3(3);
    const auto vis = RadialPotential::inverse_square(d3, 0.2);
    CHECK(vis(0.5) == doctest::Approx(0.8).epsilon(1e-15));

    const auto vci = RadialPotential::critical_inner(d3, 0.7, {2.0, -4.0});
    CHECK(vci(0.5) == doctest::Approx(0.25 / 0.25).epsilon(1e-15));
    CHECK(vci(2.0) == doctest::Approx(0.7 * 2.0 * std::pow(2.0, -4.0)).epsilon(1e-15));

    const auto vco = RadialPotential::critical_outer(d3, 0.7, {2.0, -1.0});
    CHECK(vco(0.5) == doctest::Approx(0.7 * 2.0 / 0.5).epsilon(1e-15));
    CHECK(vco(2.0) == doctest::Approx(0.25 / 4.0).epsilon(1e-15));

    // iterated-log bounded: cc + 1/4 X_1^2 + mu (X_1 X_2)^2, all over r^2
    const Dimension d4(4);
    const auto vlb = RadialPotential::iterated_log_bounded(d4, 2, 0.21, 1.0);
    const double r = 0.3;
    const double x1 = iterlog::x(1, r), x2 = iterlog::x(2, r);
    const double expected = (1.0 + 0.25 * x1 * x1 + 0.21 * x1 * x1 * x2 * x2) / (r * r);
    CHECK(vlb(r) == doctest::Approx(expected).epsilon(1e-14));
    CHECK_THROWS_AS(vlb(1.0), std::domain_error);

    CHECK_THROWS_AS(RadialPotential::critical_inner(d3, 0.7, {2.0, -1.5}),
                    std::invalid_argument);
    CHECK_THROWS_AS(RadialPotential::iterated_log_bounded(d4, 2, 0.3, 1.0),
                    std::invalid_argument);
}

TEST_CASE("inverse-square envelopes") {
    const Dimension d3(3);
    CHECK(RadialPotential::inverse_square(d3, 0.2).inverse_square_envelope() == 0.2);
    CHECK(RadialPotential::critical_inner(d3, 0.7, {1.0, -4.0}).inverse_square_envelope() ==
          doctest::Approx(0.25).epsilon(1e-15));
    CHECK(RadialPotential::iterated_log_bounded(d3, 2, 0.2, 1.0).inverse_square_envelope() ==
          doctest::Approx(0.25 + 0.25 + 0.2).epsilon(1e-15));
}

TEST_CASE("power-law ground states") {
    const Dimension d4(4);
    const auto V = RadialPotential::inverse_square(d4, 0.75);
    const auto phi = build_ground_state(d4, V);
    CHECK(phi.exponent == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(phi.eval(4.0) == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(phi.log_derivative(2.0) == doctest::Approx(-0.25).epsilon(1e-13));

    // weak residual of the exact law is pure discretization noise
    const auto g = make_grid(RadialDomain::ball(1.0), 1025, 1e-4);
    CHECK(ground_state_residual(d4, g, phi, V) < 1e-4);
}

TEST_CASE("log-refined bounded ground states solve their equation weakly") {
    const Dimension d3(3);
    for (int k : {1, 2}) {
        const auto V = RadialPotential::iterated_log_bounded(d3, k, 0.25, 1.0);
        const auto phi = build_ground_state(d3, V);
        REQUIRE(phi.log_powers.size() == static_cast<size_t>(k));
        // mu = 1/4 puts the deepest power at -beta = -1/2, like the others
        for (double p : phi.log_powers) CHECK(p == doctest::Approx(-0.5).epsilon(1e-13));
        const auto g = make_grid(RadialDomain::ball(1.0), 2049, 1e-5);
        CHECK(ground_state_residual(d3, g, phi, V) < 1e-4);
    }
}

TEST_CASE("matched tail ground states") {
    const Dimension d3(3);
    const PowerLaw f{1.0, -4.0};
    const auto sr = shoot(d3, 0.5, f, 1e4, d3.critical());
    REQUIRE(sr.positive);
    const auto V = RadialPotential::critical_inner(d3, 0.5, f);
    const auto phi = build_ground_state(d3, V, sr.profile);

    // inner law below the match, tail above, continuous at r = 1
    CHECK(phi.eval(0.25) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(phi.eval(1.0) == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(phi.eval(std::nextafter(1.0, 2.0)) == doctest::Approx(1.0).epsilon(1e-8));

    const auto g = make_grid(RadialDomain::whole_space(1e-4, 1e3), 4097);
    CHECK(ground_state_residual(d3, g, phi, V) < 1e-4);

    // the critical-inner family needs a tail
    CHECK_THROWS(build_ground_state(d3, V));

    // a tail with the wrong slope at the junction is rejected
    TabulatedProfile bad = sr.profile;
    for (auto& s : bad.slope) s *= 1.5;
    CHECK_THROWS_AS(build_ground_state(d3, V, bad), std::runtime_error);
}

TEST_CASE("kelvin transform maps power laws to dual power laws") {
    // v(s) = s^{2-N} u(1/s); for u = r^{-a} this is s^{a-(N-2)}
    const Dimension d4(4);
    const auto g = make_grid(RadialDomain::annulus(0.25, 4.0), 129);
    std::vector<double> u(g.size());
    for (size_t j = 0; j < g.size(); ++j) u[j] = std::pow(g.r[j], -0.6);
    const auto img = kelvin_transform(d4, g, u);
    REQUIRE(img.grid.size() == g.size());
    CHECK(img.grid.r.front() == doctest::Approx(0.25).epsilon(1e-14));
    CHECK(img.grid.r.back() == doctest::Approx(4.0).epsilon(1e-14));
    for (size_t j = 0; j < img.grid.size(); ++j)
        CHECK(img.values[j] ==
              doctest::Approx(std::pow(img.grid.r[j], 0.6 - 2.0)).epsilon(1e-12));
}

TEST_CASE("kelvin transform is an involution") {
    const Dimension d3(3);
    const auto g = make_grid(RadialDomain::annulus(0.5, 2.0), 65);
    std::vector<double> u(g.size());
    for (size_t j = 0; j < g.size(); ++j) u[j] = std::exp(-g.r[j]) * (1.0 + 0.3 * g.r[j]);
    const auto once = kelvin_transform(d3, g, u);
    const auto twice = kelvin_transform(d3, once.grid, once.values);
    for (size_t j = 0; j < g.size(); ++j) {
        CHECK(twice.grid.r[j] == doctest::Approx(g.r[j]).epsilon(1e-14));
        CHECK(twice.values[j] == doctest::Approx(u[j]).epsilon(1e-12));
    }
}

TEST_CASE("kelvin energy bookkeeping") {
    // image energy = source energy + (N-2) area (R1^{N-2} u(R1)^2 - R0^{N-2} u(R0)^2),
    // exact in the continuum; discretely the mismatch is second-order small.
    const Dimension d3(3);
    const auto g = make_grid(RadialDomain::annulus(0.05, 20.0), 4097);
    std::vector<double> u(g.size());
    for (size_t j = 0; j < g.size(); ++j)
        u[j] = std::pow(g.r[j], -0.7) * std::exp(-g.r[j] / 3.0);
    const auto chk = kelvin_energy_check(d3, g, u);
    CHECK(chk.mismatch < 1e-6);
    CHECK(chk.image_energy ==
          doctest::Approx(chk.source_energy + chk.boundary_term)
              .epsilon(1e-5));
}
