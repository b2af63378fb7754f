#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "hardylab/dimension.hpp"
#include "hardylab/grid.hpp"
#include "hardylab/potential.hpp"
#include "hardylab/rayleigh.hpp"

using namespace hardylab;

TEST_CASE("closed forms of the boundary-weighted quotients") {
    const Dimension d3(3), d4(4), d5(5);

    // ball: parabola alpha(N-2-alpha) up to the critical weight, then flat
    CHECK(lambda_ball_formula(d4, 0.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(lambda_ball_formula(d5, 1.0) == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(lambda_ball_formula(d5, 2.0) == doctest::Approx(2.25).epsilon(1e-15));
    CHECK(lambda_ball_formula(d3, 0.5) == doctest::Approx(0.25).epsilon(1e-15));

    // exterior: the mirror image, flat below the critical weight
    CHECK(mu_exterior_formula(d4, 1.5) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(mu_exterior_formula(d3, 0.25) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(mu_exterior_formula(d4, 1.0) == doctest::Approx(1.0).epsilon(1e-15));

    // both branches meet continuously at alpha = (N-2)/2
    for (int n : {3, 4, 5}) {
        const Dimension d(n);
        const double c = d.critical();
        CHECK(lambda_ball_formula(d, c - 1e-9) ==
              doctest::Approx(lambda_ball_formula(d, c + 1e-9)).epsilon(1e-8));
        CHECK(mu_exterior_formula(d, c - 1e-9) ==
              doctest::Approx(mu_exterior_formula(d, c + 1e-9)).epsilon(1e-8));
    }
}

TEST_CASE("discretized ball quotient reproduces the parabola branch") {
    const Dimension d4(4);
    RayleighProblem p;
    p.dim = d4;
    p.domain = RadialDomain::ball(1.0);
    p.alpha = 0.5;
    p.weight = RadialPotential::inverse_square(d4, 1.0);
    const auto res = solve_with_study(p);
    CHECK(res.value == doctest::Approx(0.75).epsilon(1e-3));
    // the bottom of the spectrum clusters on wide spans ((pi/span)^2 gaps),
    // so the eigenvector residual is gap-limited rather than at round-off
    CHECK(res.residual < 1e-3);
    CHECK(res.trace.size() >= 3);
}

TEST_CASE("discretized exterior quotient reproduces the plateau branch") {
    const Dimension d3(3);
    RayleighProblem p;
    p.dim = d3;
    p.domain = RadialDomain::exterior(1.0, 4.0);
    p.alpha = 0.25;  // below critical: value pinned at ((N-2)/2)^2
    p.weight = RadialPotential::inverse_square(d3, 1.0);
    const auto res = solve_with_study(p);
    CHECK(res.value == doctest::Approx(0.25).epsilon(1e-3));
}

TEST_CASE("threshold coupling for the r^-4 tail") {
    // Robin exterior problem with tail f = r^-4: the shooting closed form
    // puts the threshold at the root of tan x = 2x, epsilon = x^2.
    const Dimension d3(3);
    const auto res = epsilon_threshold(d3, PowerLaw{1.0, -4.0}, ThresholdVariant::Base);
    CHECK(res.value == doctest::Approx(1.358532876).epsilon(2e-3));
    // theorem-level floor: eps0 >= ((N-2)/2)^2 / K with K = 1
    CHECK(res.value >= 0.25 * (1.0 - 1e-3));
}

TEST_CASE("dual threshold for a bounded core") {
    const Dimension d3(3);
    const auto res =
        epsilon_threshold(d3, PowerLaw{1.0, -1.0}, ThresholdVariant::KelvinDual);
    CHECK(res.value >= 0.25 * (1.0 - 1e-3));
    // span doublings enlarge the trial space, so the trace cannot increase
    for (size_t i = 1; i < res.trace.size(); ++i)
        CHECK(res.trace[i] <= res.trace[i - 1] + 1e-8 * std::fabs(res.trace[i - 1]));
}

TEST_CASE("existence window: scale-invariant case is inconclusive") {
    // weight |x|^-2 makes the quotient scale invariant, so the sub-ball value
    // equals the full value and the strict window has zero width.
    const Dimension d4(4);
    RayleighProblem p;
    p.dim = d4;
    p.domain = RadialDomain::ball(1.0);
    p.alpha = 0.3;
    p.weight = RadialPotential::inverse_square(d4, 1.0);
    const auto g = make_grid(p.domain, 1025, 1e-5);
    const auto rec = minimizer_existence_condition(p, g, 0.75, 1e-4);
    CHECK(rec.inconclusive);
    CHECK(rec.lambda_domain == doctest::Approx(rec.lambda_ball).epsilon(1e-4));
}

TEST_CASE("existence window: strictly subcritical weight opens it") {
    // weight r^-1 decays slower than the Hardy weight at the origin, so
    // shrinking the ball strictly raises the quotient: 0 < lambda < lambda_sub.
    const Dimension d3(3);
    RayleighProblem p;
    p.dim = d3;
    p.domain = RadialDomain::ball(1.0);
    p.alpha = 0.5;
    p.weight = RadialPotential::power(d3, {1.0, -1.0});
    const auto g = make_grid(p.domain, 1025, 1e-5);
    const auto rec = minimizer_existence_condition(p, g, 0.5, 1e-6);
    CHECK(rec.holds);
    CHECK(!rec.inconclusive);
    CHECK(rec.lambda_domain > 0.0);
    CHECK(rec.lambda_domain < rec.lambda_ball);
}

TEST_CASE("existence window rejects non-ball domains") {
    const Dimension d3(3);
    RayleighProblem p;
    p.dim = d3;
    p.domain = RadialDomain::exterior(1.0, 8.0);
    const auto g = make_grid(p.domain, 257);
    CHECK_THROWS_AS(minimizer_existence_condition(p, g, 2.0), std::invalid_argument);
}
