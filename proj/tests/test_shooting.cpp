#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <functional>

#include "hardylab/dimension.hpp"
#include "hardylab/potential.hpp"
#include "hardylab/shooting.hpp"

using namespace hardylab;

namespace {

// Bisection root finder for smooth sign-changing functions on [lo, hi].
double bisect(const std::function<double(double)>& f, double lo, double hi) {
    double flo = f(lo);
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        const double fm = f(mid);
        if ((flo < 0) == (fm < 0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Exact limit of the N=3, f = r^-4, robin = 1/2 profile: substituting
// s = 1/r and chi = r psi turns the radial equation into chi'' + eps chi = 0,
// so the limit is cos(x) - sin(x)/(2x) with x = sqrt(eps).
double limit_closed_form(double eps) {
    const double x = std::sqrt(eps);
    return std::cos(x) - std::sin(x) / (2.0 * x);
}

} // namespace

TEST_CASE("zero coupling limit is 1 - robin/(N-2)") {
    const PowerLaw f{1.0, -4.0};
    const auto r3 = shoot(Dimension(3), 0.0, f, 1e3, 0.5);
    CHECK(r3.positive);
    CHECK(r3.limit_estimate == doctest::Approx(0.5).epsilon(1e-9));

    const auto r4 = shoot(Dimension(4), 0.0, f, 1e3, 1.0);
    CHECK(r4.positive);
    CHECK(r4.limit_estimate == doctest::Approx(0.5).epsilon(1e-9));
}

TEST_CASE("subcritical profiles against the trigonometric closed form") {
    const Dimension d3(3);
    const PowerLaw f{1.0, -4.0};
    for (double eps : {0.3, 0.9}) {
        const auto res = shoot(d3, eps, f, 1e4, 0.5);
        CHECK(res.positive);
        CHECK(res.monotone_decreasing);
        CHECK(res.limit_estimate ==
              doctest::Approx(limit_closed_form(eps)).epsilon(1e-6));
        // spot values of the whole profile, not just its limit:
        // psi(r) = w(1/r) with w(s) = cos(x(s-1)) + sin(x(s-1))/(2x)
        const double x = std::sqrt(eps);
        for (double r : {2.0, 10.0, 300.0}) {
            const double s = 1.0 / r;
            const double w =
                std::cos(x * (s - 1.0)) + std::sin(x * (s - 1.0)) / (2.0 * x);
            CHECK(res.profile.eval(r) == doctest::Approx(w).epsilon(1e-6));
        }
    }
}

TEST_CASE("supercritical coupling loses positivity") {
    const Dimension d3(3);
    const auto res = shoot(d3, 2.0 * 1.3585, PowerLaw{1.0, -4.0}, 1e4, 0.5);
    CHECK(!res.positive);
}

TEST_CASE("threshold for the r^-4 tail matches the root of tan x = 2x") {
    const Dimension d3(3);
    const double xstar =
        bisect([](double x) { return std::tan(x) - 2.0 * x; }, 1.0, 1.5);
    const double eps_exact = xstar * xstar;
    const double eps = epsilon0_by_bisection(d3, PowerLaw{1.0, -4.0}, 0.5);
    CHECK(eps == doctest::Approx(eps_exact).epsilon(2e-5));
}

TEST_CASE("threshold for the r^-3 tail matches the Bessel derivative zero") {
    // With f = r^-3 the inverted equation is chi'' + (eps/s) chi = 0, solved by
    // sqrt(s) J_1(2 sqrt(eps s)); the robin condition at s = 1 reduces to
    // J_1'(2 sqrt(eps)) = 0, so eps0 = (x*/2)^2 at the first zero x* of J_1'.
    const Dimension d3(3);
    const double xstar = bisect(
        [](double x) { return std::cyl_bessel_j(0, x) - std::cyl_bessel_j(2, x); },
        1.5, 2.5);
    const double eps_exact = 0.25 * xstar * xstar;
    const double eps = epsilon0_by_bisection(d3, PowerLaw{1.0, -3.0}, 0.5);
    CHECK(eps == doctest::Approx(eps_exact).epsilon(1e-4));
}

TEST_CASE("log-refined robin weight moves the threshold to a Bessel quotient") {
    // N=4, robin (N-2+k)/2 = 3/2 with k = 1: the dual variable rw(1/r) obeys
    // the order-1 Bessel equation, and the junction condition becomes
    // x J_0(x) / J_1(x) = 3/2 at x = sqrt(eps).
    const Dimension d4(4);
    const double xstar = bisect(
        [](double x) {
            return x * std::cyl_bessel_j(0, x) - 1.5 * std::cyl_bessel_j(1, x);
        },
        1.0, 2.0);
    const double eps_exact = xstar * xstar;
    const double eps = epsilon0_by_bisection(d4, PowerLaw{1.0, -4.0}, 1.5);
    CHECK(eps == doctest::Approx(eps_exact).epsilon(2e-5));
}
