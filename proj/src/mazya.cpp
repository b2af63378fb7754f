#include "hardylab/mazya.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

#include "hardylab/operators.hpp"
#include "hardylab/tridiag.hpp"

namespace hardylab {

namespace {

struct SupScan {
    double sup = 0.0;
    double argmax = 0.0;
};

// Supremum of (int_{r_0}^r B)(int_r^{r_last} 1/A)^{q/2} over the nodes of one
// grid, by cumulative trapezoid sums.  Optionally returns the tabulated
// weights.
SupScan scan_grid(const RadialFunction& A, const RadialFunction& B,
                  const RadialGrid& grid, double q,
                  std::vector<double>* tab_a, std::vector<double>* tab_b) {
    const auto& r = grid.r;
    const std::size_t n = r.size();
    std::vector<double> a(n), b(n);
    for (std::size_t j = 0; j < n; ++j) {
        a[j] = A(r[j]);
        b[j] = B(r[j]);
        if (!(a[j] > 0.0) || !std::isfinite(a[j]))
            throw std::invalid_argument("mazya_sup: weight A must be positive and finite on the grid");
        if (!(b[j] >= 0.0) || !std::isfinite(b[j]))
            throw std::invalid_argument("mazya_sup: weight B must be nonnegative and finite on the grid");
    }

    std::vector<double> prefix(n, 0.0), suffix(n, 0.0);
    for (std::size_t j = 1; j < n; ++j)
        prefix[j] = prefix[j - 1] + 0.5 * (b[j - 1] + b[j]) * (r[j] - r[j - 1]);
    for (std::size_t j = n - 1; j-- > 0;)
        suffix[j] = suffix[j + 1] + 0.5 * (1.0 / a[j] + 1.0 / a[j + 1]) * (r[j + 1] - r[j]);

    SupScan out;
    out.argmax = r.front();
    for (std::size_t j = 0; j < n; ++j) {
        const double v = prefix[j] * std::pow(suffix[j], 0.5 * q);
        if (v > out.sup) {
            out.sup = v;
            out.argmax = r[j];
        }
    }
    if (tab_a) *tab_a = std::move(a);
    if (tab_b) *tab_b = std::move(b);
    return out;
}

} // namespace

MazyaCheck mazya_sup(const RadialFunction& A, const RadialFunction& B,
                     const RadialGrid& grid, double q) {
    if (!(q >= 2.0)) throw std::invalid_argument("mazya_sup: exponent q must be >= 2");
    if (grid.size() < 8) throw std::invalid_argument("mazya_sup: grid too coarse");

    const double r_lo = grid.r.front(), r_hi = grid.r.back();
    const std::size_t n0 = grid.size();
    const double span0 = std::log(r_hi / r_lo);

    // The truncated sup can only miss mass hiding beyond the endpoints; push
    // both endpoints outward twice and watch the estimate.  A stable value
    // certifies (numerically) that B is integrable at 0 and 1/A at infinity.
    double prev = 0.0;
    MazyaCheck check;
    check.q = q;
    for (int stage = 0; stage <= 2; ++stage) {
        const double extend = std::pow(16.0, stage);
        RadialGrid g;
        if (stage == 0) {
            g = grid;
        } else {
            const double lo = r_lo / extend, hi = r_hi * extend;
            const double density = static_cast<double>(n0 - 1) / span0;
            const int n = 2 + static_cast<int>(std::ceil(density * std::log(hi / lo)));
            g = make_grid(RadialDomain::annulus(lo, hi), n);
        }
        const auto scan = scan_grid(A, B, g, q, stage == 2 ? &check.A : nullptr,
                                    stage == 2 ? &check.B : nullptr);
        if (stage == 2) {
            check.grid = g;
            check.sup_value = scan.sup;
            check.argmax_r = scan.argmax;
            check.finite = scan.sup <= prev * 1.02 + 1e-300;
        }
        prev = scan.sup;
    }
    return check;
}

namespace {

// Trapezoid weights in plain dr on the grid nodes.
std::vector<double> dr_weights(const RadialGrid& grid) {
    const auto& r = grid.r;
    std::vector<double> w(r.size(), 0.0);
    for (std::size_t j = 0; j + 1 < r.size(); ++j) {
        const double h = r[j + 1] - r[j];
        w[j] += 0.5 * h;
        w[j + 1] += 0.5 * h;
    }
    return w;
}

// Discrete data of one Sobolev quotient on one grid.
struct QuotientData {
    std::vector<double> a_edge;   // gradient form = sum a_edge[i] (u_{i+1}-u_i)^2
    std::vector<double> bw;       // potential form = sum bw[j] u_j^2
    std::vector<double> ww;       // target form   = sum ww[j] |u_j|^p
    double p = 2.0;
    std::size_t n = 0;            // node count; node n-1 is pinned to zero

    double numerator(const std::vector<double>& u) const {
        double grad = 0.0, pot = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double du = u[i + 1] - u[i];
            grad += a_edge[i] * du * du;
        }
        for (std::size_t j = 0; j < n; ++j) pot += bw[j] * u[j] * u[j];
        const double num = grad - pot;
        if (num < -1e-9 * (grad + std::fabs(pot) + 1e-300))
            throw std::runtime_error(
                "best_constant: quotient numerator is negative -- the claimed "
                "inequality fails on this grid");
        return num;
    }

    double target(const std::vector<double>& u) const {
        double t = 0.0;
        for (std::size_t j = 0; j < n; ++j) t += ww[j] * std::pow(std::fabs(u[j]), p);
        return t;
    }

    // Scale u so that the target form equals 1; returns false for u == 0.
    bool normalize(std::vector<double>& u) const {
        const double t = target(u);
        if (!(t > 0.0) || !std::isfinite(t)) return false;
        const double s = std::pow(t, -1.0 / p);
        for (auto& x : u) x *= s;
        return true;
    }
};

QuotientData tabulate(const SobolevQuotient& quot, const RadialGrid& grid) {
    if (!quot.gradient_weight || !quot.target_weight)
        throw std::invalid_argument("best_constant: gradient and target weights are required");
    if (!(quot.target_exponent >= 2.0))
        throw std::invalid_argument("best_constant: target exponent must be >= 2");

    const auto& r = grid.r;
    QuotientData qd;
    qd.n = r.size();
    qd.p = quot.target_exponent;
    qd.a_edge.resize(qd.n - 1);
    for (std::size_t i = 0; i + 1 < qd.n; ++i) {
        const double h = r[i + 1] - r[i];
        const double a = 0.5 * (quot.gradient_weight(r[i]) + quot.gradient_weight(r[i + 1]));
        if (!(a > 0.0)) throw std::invalid_argument("best_constant: gradient weight must be positive");
        qd.a_edge[i] = a / h;
    }
    const auto w = dr_weights(grid);
    qd.bw.assign(qd.n, 0.0);
    qd.ww.resize(qd.n);
    for (std::size_t j = 0; j < qd.n; ++j) {
        if (quot.potential) qd.bw[j] = quot.potential(r[j]) * w[j];
        const double W = quot.target_weight(r[j]);
        if (!(W >= 0.0)) throw std::invalid_argument("best_constant: target weight must be nonnegative");
        qd.ww[j] = W * w[j];
    }
    return qd;
}

// Numerator as a tridiagonal pencil over the free nodes 0..n-2, with the
// plain trapezoid measure as preconditioner mass.
TridiagPencil free_pencil(const QuotientData& qd, const std::vector<double>& w) {
    const std::size_t nf = qd.n - 1;
    TridiagPencil pen;
    pen.d.assign(nf, 0.0);
    pen.e.assign(nf - 1, 0.0);
    pen.m.assign(nf, 0.0);
    for (std::size_t i = 0; i + 1 < qd.n; ++i) {
        pen.d[i] += qd.a_edge[i];
        if (i + 1 < nf) {
            pen.d[i + 1] += qd.a_edge[i];
            pen.e[i] = -qd.a_edge[i];
        }
    }
    for (std::size_t j = 0; j < nf; ++j) {
        pen.d[j] -= qd.bw[j];
        pen.m[j] = w[j];
    }
    return pen;
}

struct DescentResult {
    double value = 0.0;
    std::vector<double> u;
};

// Projected descent at fixed normalization target(u) = 1.  The search
// direction is the numerator gradient smoothed by one shifted stiffness
// solve (a Sobolev gradient), which keeps steps stable on stiff grids.
DescentResult descend(const QuotientData& qd, const TridiagPencil& pen,
                      std::vector<double> u, int max_iter) {
    const std::size_t nf = qd.n - 1;
    const double sigma = 1e-8 * (*std::max_element(pen.d.begin(), pen.d.end()) + 1.0);

    DescentResult res;
    if (!qd.normalize(u)) throw std::invalid_argument("best_constant: zero start profile");
    double Q = qd.numerator(u) / std::pow(qd.target(u), 2.0 / qd.p);

    int stall = 0;
    std::vector<double> g(nf), cand(qd.n, 0.0);
    for (int it = 0; it < max_iter && stall < 4; ++it) {
        // gradient of N(u)/T(u)^{2/p} at T(u) = 1, restricted to free nodes
        for (std::size_t j = 0; j < nf; ++j) {
            double ku = pen.d[j] * u[j];
            if (j > 0) ku += pen.e[j - 1] * u[j - 1];
            if (j + 1 < nf) ku += pen.e[j] * u[j + 1];
            g[j] = 2.0 * ku -
                   2.0 * Q * qd.ww[j] * std::pow(std::fabs(u[j]), qd.p - 2.0) * u[j];
        }
        const auto dir = shifted_solve(pen, -sigma, g);

        // step 1/2 makes the update u - step*dir equal to the sublinear
        // fixed-point iteration Q K^{-1}(W |u|^{p-2} u), whose linear rate is
        // the fast path; larger steps overshoot and zigzag
        double step = 0.5;
        bool accepted = false;
        for (int bt = 0; bt < 40; ++bt) {
            for (std::size_t j = 0; j < nf; ++j) cand[j] = u[j] - step * dir[j];
            cand[qd.n - 1] = 0.0;
            if (qd.normalize(cand)) {
                const double Qc = qd.numerator(cand) / std::pow(qd.target(cand), 2.0 / qd.p);
                if (Qc < Q) {
                    if (Q - Qc <= 1e-13 * (std::fabs(Q) + 1.0)) ++stall;
                    else stall = 0;
                    u.swap(cand);
                    Q = Qc;
                    accepted = true;
                    break;
                }
            }
            step *= 0.5;
        }
        if (!accepted) break;
    }
    res.value = Q;
    res.u = std::move(u);
    return res;
}

std::vector<double> random_start(const RadialGrid& grid, std::mt19937_64& rng) {
    const auto& r = grid.r;
    const std::size_t n = r.size();
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    // a log-radial bump with random centre and width, plus mild noise
    const double lc = std::log(r.front()) +
                      unif(rng) * (std::log(r.back()) - std::log(r.front()));
    const double width = 0.5 + 2.5 * unif(rng);
    std::vector<double> u(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double z = (std::log(r[j]) - lc) / width;
        u[j] = std::exp(-0.5 * z * z) * (0.75 + 0.5 * unif(rng));
    }
    u[n - 1] = 0.0;
    return u;
}

} // namespace

QuotientForms quotient_forms(const SobolevQuotient& quot, const RadialGrid& grid,
                             const std::vector<double>& u) {
    if (u.size() != grid.size())
        throw std::invalid_argument("quotient_forms: profile size mismatch");
    const auto& r = grid.r;
    const auto w = dr_weights(grid);
    QuotientForms f;
    for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
        const double du = (u[i + 1] - u[i]) / (r[i + 1] - r[i]);
        f.gradient += 0.5 * (quot.gradient_weight(r[i]) + quot.gradient_weight(r[i + 1])) *
                      du * du * (r[i + 1] - r[i]);
    }
    for (std::size_t j = 0; j < grid.size(); ++j) {
        if (quot.potential) f.potential += quot.potential(r[j]) * u[j] * u[j] * w[j];
        f.target += quot.target_weight(r[j]) *
                    std::pow(std::fabs(u[j]), quot.target_exponent) * w[j];
    }
    return f;
}

BestConstantResult best_constant(const SobolevQuotient& quot, const RadialGrid& grid,
                                 int refinements, int restarts, std::uint64_t seed) {
    if (refinements < 1) throw std::invalid_argument("best_constant: refinements >= 1");
    if (restarts < 1) throw std::invalid_argument("best_constant: restarts >= 1");

    RadialGrid g = grid;
    QuotientData qd = tabulate(quot, g);
    auto w = dr_weights(g);
    TridiagPencil pen = free_pencil(qd, w);

    std::mt19937_64 rng(seed);
    DescentResult best;
    best.value = std::numeric_limits<double>::infinity();
    for (int s = 0; s < restarts; ++s) {
        auto res = descend(qd, pen, random_start(g, rng), 2000);
        if (res.value < best.value) best = std::move(res);
    }

    BestConstantResult out;
    out.trace.push_back(best.value);
    for (int level = 1; level < refinements; ++level) {
        RadialGrid fine = g.refined();
        // inject the incumbent: new nodes interpolate linearly in r, which
        // reproduces the same piecewise-linear profile on the larger space
        std::vector<double> u(fine.size());
        for (std::size_t j = 0; j < g.size(); ++j) u[2 * j] = best.u[j];
        for (std::size_t j = 0; j + 1 < g.size(); ++j) {
            const double t = (fine.r[2 * j + 1] - g.r[j]) / (g.r[j + 1] - g.r[j]);
            u[2 * j + 1] = (1.0 - t) * best.u[j] + t * best.u[j + 1];
        }
        g = std::move(fine);
        qd = tabulate(quot, g);
        w = dr_weights(g);
        pen = free_pencil(qd, w);
        best = descend(qd, pen, std::move(u), 2000);
        out.trace.push_back(best.value);
    }

    out.c_estimate = best.value;
    out.grid = std::move(g);
    out.minimizer = std::move(best.u);
    return out;
}

double sector_eigenvalue(const Dimension& dim, int m) {
    if (m < 0) throw std::invalid_argument("sector_eigenvalue: m >= 0");
    return static_cast<double>(m) * (dim.n - 2 + m);
}

long long harmonic_multiplicity(const Dimension& dim, int m) {
    if (m < 0) throw std::invalid_argument("harmonic_multiplicity: m >= 0");
    if (m == 0) return 1;
    // C(N+m-1, m) - C(N+m-3, m-2), evaluated multiplicatively in integers
    const auto binom = [](long long top, long long k) {
        long long v = 1;
        for (long long i = 1; i <= k; ++i) v = v * (top - k + i) / i;
        return v;
    };
    const long long n = dim.n;
    return binom(n + m - 1, m) - (m >= 2 ? binom(n + m - 3, m - 2) : 0);
}

HarmonicImprovement harmonic_improvement_check(const Dimension& dim,
                                               const std::vector<std::vector<double>>& coefficients,
                                               const RadialPotential& V,
                                               const RadialGrid& grid) {
    if (coefficients.empty())
        throw std::invalid_argument("harmonic_improvement_check: need at least the radial sector");
    for (const auto& c : coefficients)
        if (c.size() != grid.size())
            throw std::invalid_argument("harmonic_improvement_check: coefficient size mismatch");

    const auto& r = grid.r;
    const std::size_t n = grid.size();
    const auto wvol = quadrature_weights(dim, grid, Measure::Volume);
    const auto whardy = quadrature_weights(dim, grid, Measure::Hardy);

    std::vector<double> vv(n);
    double theta = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
        vv[j] = V(r[j]);
        theta = std::max(theta, r[j] * r[j] * vv[j]);
    }
    if (!(theta > 0.0) || !std::isfinite(theta))
        throw std::invalid_argument(
            "harmonic_improvement_check: ess sup of r^2 V must be positive and finite");

    // Route one: quadratic form of the assembled sector operator.
    const auto stiff = stiffness_edges(dim, grid);
    double lhs_assembled = 0.0;
    // Route two: direct trapezoid quadrature of the sector integrand.
    const double area = dim.sphere_area();
    double lhs_direct = 0.0;
    // Pieces of the improved lower bound.
    double radial_energy = 0.0, nonradial_free = 0.0;

    for (std::size_t m = 0; m < coefficients.size(); ++m) {
        const auto& u = coefficients[m];
        const double cm = sector_eigenvalue(dim, static_cast<int>(m));

        WeightedOperator op;
        op.grid = grid;
        op.stiff = stiff;
        op.diag.resize(n);
        for (std::size_t j = 0; j < n; ++j)
            op.diag[j] = cm * whardy[j] - vv[j] * wvol[j];
        const double e_op = op.form(u);
        lhs_assembled += e_op;

        double grad = 0.0, zero_order = 0.0, hardy = 0.0;
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double h = r[i + 1] - r[i];
            const double du = (u[i + 1] - u[i]) / h;
            grad += 0.5 * area *
                    (std::pow(r[i], dim.n - 1) + std::pow(r[i + 1], dim.n - 1)) * du * du * h;
        }
        for (std::size_t j = 0; j < n; ++j) {
            zero_order += (cm / (r[j] * r[j]) - vv[j]) * u[j] * u[j] * wvol[j];
            hardy += cm * u[j] * u[j] * whardy[j];
        }
        lhs_direct += grad + zero_order;

        if (m == 0) radial_energy = e_op;
        else nonradial_free += grad + hardy;
    }

    HarmonicImprovement out;
    out.theta = theta;
    out.lhs = lhs_assembled;
    out.identity_gap = std::fabs(lhs_assembled - lhs_direct) /
                       (std::fabs(lhs_assembled) + std::fabs(lhs_direct) + 1e-300);
    out.rhs = radial_energy + (dim.n - 1) / (dim.n - 1 + theta) * nonradial_free;
    out.holds = out.lhs >= out.rhs - 1e-9 * (std::fabs(out.lhs) + std::fabs(out.rhs) + 1.0);
    return out;
}

} // namespace hardylab
