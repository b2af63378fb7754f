#include "hardylab/shooting.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "hardylab/rayleigh.hpp"

namespace hardylab {
namespace {

struct State {
    double psi, q;   // q = r^{N-1} psi'
};

struct Rhs {
    int nm1;         // N - 1
    double eps;
    PowerLaw f;

    State operator()(double r, const State& y) const {
        const double rp = std::pow(r, nm1);
        return {y.q / rp, -rp * eps * f(r) * y.psi};
    }
};

// Dormand-Prince 5(4) step; returns the embedded error estimate.
double dp_step(const Rhs& rhs, double r, double h, const State& y, const State& k1,
               State& out, State& k_last) {
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                     a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                     a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                     b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    constexpr double e1 = 35.0 / 384 - 5179.0 / 57600, e3 = 500.0 / 1113 - 7571.0 / 16695,
                     e4 = 125.0 / 192 - 393.0 / 640, e5 = -2187.0 / 6784 + 92097.0 / 339200,
                     e6 = 11.0 / 84 - 187.0 / 2100, e7 = -1.0 / 40;

    const auto lin = [&](double c1, double c2, double c3, double c4, double c5, double c6,
                         const State& s2, const State& s3, const State& s4, const State& s5,
                         const State& s6) {
        return State{y.psi + h * (c1 * k1.psi + c2 * s2.psi + c3 * s3.psi + c4 * s4.psi +
                                  c5 * s5.psi + c6 * s6.psi),
                     y.q + h * (c1 * k1.q + c2 * s2.q + c3 * s3.q + c4 * s4.q + c5 * s5.q +
                                c6 * s6.q)};
    };
    const State z{0.0, 0.0};
    const State k2 = rhs(r + h / 5, lin(a21, 0, 0, 0, 0, 0, z, z, z, z, z));
    const State k3 = rhs(r + 3 * h / 10, lin(a31, a32, 0, 0, 0, 0, k2, z, z, z, z));
    const State k4 = rhs(r + 4 * h / 5, lin(a41, a42, a43, 0, 0, 0, k2, k3, z, z, z));
    const State k5 = rhs(r + 8 * h / 9, lin(a51, a52, a53, a54, 0, 0, k2, k3, k4, z, z));
    const State k6 = rhs(r + h, lin(a61, a62, a63, a64, a65, 0, k2, k3, k4, k5, z));
    out = lin(b1, 0, b3, b4, b5, b6, k2, k3, k4, k5, k6);
    k_last = rhs(r + h, out);

    const double err_psi = h * (e1 * k1.psi + e3 * k3.psi + e4 * k4.psi + e5 * k5.psi +
                                e6 * k6.psi + e7 * k_last.psi);
    const double err_q = h * (e1 * k1.q + e3 * k3.q + e4 * k4.q + e5 * k5.q + e6 * k6.q +
                              e7 * k_last.q);
    const double sc_psi = 1e-14 + std::max(std::fabs(y.psi), std::fabs(out.psi));
    const double sc_q = 1e-14 + std::max(std::fabs(y.q), std::fabs(out.q));
    return std::max(std::fabs(err_psi) / sc_psi, std::fabs(err_q) / sc_q);
}

// Advance from r to r_target with adaptive steps (FSAL).
void integrate_to(const Rhs& rhs, double& r, State& y, State& k1, double r_target,
                  double rel_tol, bool& crossed) {
    double h = std::min(0.05 * r, r_target - r);
    int rejects_in_a_row = 0;
    while (r < r_target) {
        h = std::min(h, r_target - r);
        State out, k_last;
        const double err = dp_step(rhs, r, h, y, k1, out, k_last) / rel_tol;
        if (err <= 1.0) {
            r += h;
            y = out;
            k1 = k_last;
            rejects_in_a_row = 0;
            if (y.psi <= 0.0) {
                crossed = true;
                return;
            }
        } else if (++rejects_in_a_row > 60) {
            throw std::runtime_error("shooting: step-size control failed to converge");
        }
        const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.2);
        h *= std::clamp(fac, 0.2, 5.0);
        if (!(h > r * 1e-15))
            throw std::runtime_error("shooting: step size underflow");
    }
}

// l + c r^{2-N} fit through (ra, pa), (rb, pb); returns l.
double tail_fit(int n, double ra, double pa, double rb, double pb) {
    const double wa = std::pow(ra, 2 - n), wb = std::pow(rb, 2 - n);
    const double c = (pa - pb) / (wa - wb);
    return pb - c * wb;
}

} // namespace

ShootingResult shoot(const Dimension& dim, double epsilon, const PowerLaw& tail,
                     double r_inf, double robin_coefficient, double rel_tol) {
    if (!(r_inf > 1.0)) throw std::invalid_argument("shooting: r_inf must exceed 1");
    if (!(epsilon >= 0.0)) throw std::invalid_argument("shooting: eps must be nonnegative");
    if (!(tail.coef >= 0.0) || (tail.coef > 0.0 && !(tail.power < -2.0)))
        throw std::invalid_argument("shooting: tail must be a nonnegative subcritical power");

    const Rhs rhs{dim.n - 1, epsilon, tail};
    ShootingResult res;
    res.epsilon = epsilon;

    const int m = std::max(129, static_cast<int>(std::lround(48.0 * std::log(r_inf))));
    std::vector<double> nodes(static_cast<size_t>(m));
    const double step = std::log(r_inf) / (m - 1);
    for (int j = 0; j < m; ++j) nodes[static_cast<size_t>(j)] = std::exp(j * step);
    nodes.front() = 1.0;
    nodes.back() = r_inf;

    double r = 1.0;
    State y{1.0, -robin_coefficient};
    State k1 = rhs(r, y);
    res.profile.r.push_back(r);
    res.profile.value.push_back(y.psi);
    res.profile.slope.push_back(y.q);

    bool crossed = false;
    bool monotone = y.q <= 1e-12;
    for (size_t j = 1; j < nodes.size() && !crossed; ++j) {
        integrate_to(rhs, r, y, k1, nodes[j], rel_tol, crossed);
        res.profile.r.push_back(r);
        res.profile.value.push_back(y.psi);
        res.profile.slope.push_back(y.q / std::pow(r, dim.n - 1));
        monotone = monotone && y.q <= 1e-12 * (1.0 + std::fabs(y.q));
    }
    res.positive = !crossed;
    res.monotone_decreasing = monotone;

    if (crossed) {
        res.limit_estimate = y.psi;   // <= 0 marks the supercritical side
        return res;
    }

    // limit via the r^{2-N} tail fit over the last decade, Aitken-extrapolated
    // across the shells r_inf/4, r_inf/2, r_inf
    const auto& pr = res.profile.r;
    const auto& pv = res.profile.value;
    const auto value_near = [&](double target) {
        const size_t j = static_cast<size_t>(
            std::lower_bound(pr.begin(), pr.end(), target) - pr.begin());
        const size_t jj = std::min(j, pr.size() - 1);
        return std::pair<double, double>(pr[jj], pv[jj]);
    };
    const auto fit_at = [&](double shell) {
        const auto [rb, pb] = value_near(shell);
        const auto [ra, pa] = value_near(shell / 10.0);
        return tail_fit(dim.n, ra, pa, rb, pb);
    };
    if (r_inf >= 1000.0) {
        const double l1 = fit_at(r_inf / 4.0);
        const double l2 = fit_at(r_inf / 2.0);
        const double l3 = fit_at(r_inf);
        const double d2 = (l3 - l2) - (l2 - l1);
        double l = l3;
        if (std::fabs(d2) > 1e-14 * (std::fabs(l3) + 1.0)) {
            const double corr = (l3 - l2) * (l3 - l2) / d2;
            if (std::isfinite(corr) && std::fabs(corr) <= 3.0 * std::fabs(l3 - l2))
                l = l3 - corr;
        }
        res.limit_estimate = l;
    } else {
        res.limit_estimate = fit_at(r_inf);
    }
    return res;
}

double epsilon0_by_bisection(const Dimension& dim, const PowerLaw& tail,
                             double robin_coefficient, double tol, double r_inf) {
    if (!(tol > 0.0)) throw std::invalid_argument("shooting: tol must be positive");
    if (!(robin_coefficient > 0.0) || !(robin_coefficient < dim.n - 2))
        throw std::invalid_argument(
            "shooting: robin coefficient must lie in (0, N-2) for a subcritical start");

    const auto subcritical = [&](double eps, double R) {
        const ShootingResult s = shoot(dim, eps, tail, R, robin_coefficient);
        return s.positive && s.limit_estimate > 0.0;
    };

    const auto bisect_at = [&](double R) {
        double lo = 0.0, hi = 1.0;
        int expansions = 0;
        while (subcritical(hi, R)) {
            lo = hi;
            hi *= 2.0;
            if (++expansions > 60)
                throw std::runtime_error(
                    "shooting: no supercritical bracket found (tail too weak on the "
                    "truncated domain; increase r_inf)");
        }
        while (hi - lo > tol)
            (subcritical(0.5 * (lo + hi), R) ? lo : hi) = 0.5 * (lo + hi);
        return 0.5 * (lo + hi);
    };

    double R = r_inf;
    double prev = bisect_at(R);
    for (int pass = 0; pass < 6; ++pass) {
        R *= 2.0;
        const double cur = bisect_at(R);
        const double change = std::fabs(cur - prev);
        prev = cur;
        if (change <= 0.25 * std::max(tol, 1e-12)) {
            const double bound =
                tail.coef > 0.0 ? mu_exterior_formula(dim, robin_coefficient) / tail.coef
                                : 0.0;
            if (cur < bound * (1.0 - tol) - 1e-12)
                throw std::runtime_error(
                    "shooting: threshold fell below its theorem lower bound");
            return cur;
        }
    }
    throw std::runtime_error(
        "shooting: threshold did not stabilize under r_inf doubling (truncation too small)");
}

} // namespace hardylab
