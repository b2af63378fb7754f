#include "hardylab/rayleigh.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "hardylab/operators.hpp"
#include "hardylab/tridiag.hpp"

namespace hardylab {
namespace {

WeightedOperator assemble(const RayleighProblem& p, const RadialGrid& grid) {
    const std::size_t n = grid.size();
    WeightedOperator op;
    op.grid = grid;
    op.stiff = stiffness_edges(p.dim, grid);
    op.diag = boundary_point_masses(p.dim, grid, p.alpha);
    const auto mvol = quadrature_weights(p.dim, grid, Measure::Volume);

    // The truncation radius of Exterior/WholeSpace domains stands in for
    // infinity, where admissible functions decay; pin it.  Without the pin a
    // non-decaying trial function (u = 1) slips in and drives the infimum
    // below its true value.  Truncations towards the origin stay free: the
    // origin has zero capacity and H^1 places no condition there.
    op.fixed.assign(n, 0);
    if (grid.domain.kind == RadialDomain::Kind::Exterior ||
        grid.domain.kind == RadialDomain::Kind::WholeSpace)
        op.fixed[n - 1] = 1;

    op.mass.resize(n);
    bool any_mass = false;
    for (std::size_t j = 0; j < n; ++j) {
        const double w = p.weight(grid.r[j]);
        if (w < 0.0)
            throw std::invalid_argument("rayleigh: denominator weight must be nonnegative");
        op.mass[j] = w * mvol[j];
        if (op.mass[j] > 0.0 && !op.fixed[j]) any_mass = true;
    }
    if (!any_mass)
        throw std::runtime_error("rayleigh: denominator weight vanishes on the whole grid");

    if (p.sector < 0) throw std::invalid_argument("rayleigh: sector must be >= 0");
    if (p.sector > 0) {
        const double cm = static_cast<double>(p.sector) * (p.dim.n - 2 + p.sector);
        for (std::size_t j = 0; j < n; ++j)
            op.diag[j] += cm * mvol[j] / (grid.r[j] * grid.r[j]);
    }
    if (p.numerator_potential)
        for (std::size_t j = 0; j < n; ++j)
            op.diag[j] -= (*p.numerator_potential)(grid.r[j]) * mvol[j];

    return op;
}

double relative_residual(const TridiagPencil& t, double lam, const std::vector<double>& v) {
    double num = 0.0, den = 0.0;
    for (std::size_t j = 0; j < t.size(); ++j) {
        double tv = t.d[j] * v[j];
        if (j > 0) tv += t.e[j - 1] * v[j - 1];
        if (j + 1 < t.size()) tv += t.e[j] * v[j + 1];
        const double mv = lam * t.m[j] * v[j];
        num += (tv - mv) * (tv - mv);
        den += tv * tv + mv * mv;
    }
    return den > 0.0 ? std::sqrt(num / den) : 0.0;
}

// One eigensolve; when `out` is given, stores grid, minimizer and residual.
double solve_value(const RayleighProblem& p, const RadialGrid& grid, EigenResult* out) {
    const auto op = assemble(p, grid);
    const auto pen = op.pencil();
    auto ep = smallest_eigenpair(pen);
    if (out) {
        out->grid = grid;
        out->minimizer = op.expand(ep.vector);
        out->residual = relative_residual(pen, ep.value, ep.vector);
    }
    return ep.value;
}

double aitken_limit(const std::vector<double>& t) {
    if (t.size() < 3) return t.back();
    const double a = t[t.size() - 3], b = t[t.size() - 2], c = t.back();
    const double d2 = (c - b) - (b - a);
    if (std::fabs(d2) < 1e-14 * (std::fabs(c) + 1.0)) return c;
    const double corr = (c - b) * (c - b) / d2;
    if (!std::isfinite(corr) || std::fabs(corr) > 3.0 * std::fabs(c - b)) return c;
    return c - corr;
}

} // namespace

EigenResult solve_quotient(const RayleighProblem& p, const RadialGrid& grid,
                           int refine_levels) {
    if (grid.domain.kind != p.domain.kind)
        throw std::invalid_argument("rayleigh: grid domain kind does not match the problem");
    if (refine_levels < 1) throw std::invalid_argument("rayleigh: need at least one level");

    EigenResult res;
    RadialGrid g = grid;
    for (int level = 0; level < refine_levels; ++level) {
        const bool last = level + 1 == refine_levels;
        res.trace.push_back(solve_value(p, g, last ? &res : nullptr));
        if (!last) g = g.refined();
    }
    res.extrapolated = aitken_limit(res.trace);
    res.value = res.trace.back();
    return res;
}

EigenResult solve_with_study(const RayleighProblem& p, const StudyOptions& opts) {
    if (opts.levels < 1) throw std::invalid_argument("rayleigh: study needs >= 1 level");
    if (p.domain.kind == RadialDomain::Kind::Annulus) {
        // no artificial truncation: the study degenerates to h-refinement
        const double extent = std::log(p.domain.outer / p.domain.inner);
        const int n = std::max(129, static_cast<int>(std::lround(opts.nodes_per_unit * extent)));
        EigenResult res = solve_quotient(p, make_grid(p.domain, n), opts.levels);
        res.value = res.extrapolated;
        return res;
    }

    const double cap = opts.max_span > 0.0
                           ? opts.max_span
                           : std::min(100.0, 340.0 / std::max(1, p.dim.n - 2));
    const double base = std::max(opts.base_span, 5.0);

    std::vector<double> spans;
    for (int i = 0; i < opts.levels; ++i) {
        const double s = std::min(base * std::pow(2.0, i), cap);
        if (!spans.empty() && s <= spans.back()) break;
        spans.push_back(s);
    }

    EigenResult res;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        const double span = spans[i];
        RadialDomain dom = p.domain;
        double extent = span;
        switch (p.domain.kind) {
        case RadialDomain::Kind::Ball:
            break;   // truncation enters through r_min_fraction below
        case RadialDomain::Kind::Exterior:
            dom.outer = dom.inner * std::exp(span);
            break;
        case RadialDomain::Kind::WholeSpace:
            dom.inner = std::exp(-span);
            dom.outer = std::exp(span);
            extent = 2.0 * span;
            break;
        case RadialDomain::Kind::Annulus:
            break;   // handled above
        }
        const int n =
            std::max(129, static_cast<int>(std::lround(opts.nodes_per_unit * extent)));
        RayleighProblem q = p;
        q.domain = dom;
        const RadialGrid g = p.domain.kind == RadialDomain::Kind::Ball
                                 ? make_grid(dom, n, std::exp(-span))
                                 : make_grid(dom, n);

        const bool last = i + 1 == spans.size();
        // one Richardson step in h removes the second-order quadrature bias,
        // leaving the trace to carry the truncation error alone
        const double vc = solve_value(q, g, nullptr);
        const double vf = solve_value(q, g.refined(), last ? &res : nullptr);
        res.trace.push_back((4.0 * vf - vc) / 3.0);
    }
    res.extrapolated = aitken_limit(res.trace);
    res.value = res.extrapolated;
    return res;
}

double lambda_ball_formula(const Dimension& dim, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("lambda formula needs alpha > 0");
    return alpha <= dim.critical() ? alpha * (dim.n - 2 - alpha) : dim.critical_coupling();
}

double mu_exterior_formula(const Dimension& dim, double alpha) {
    if (!(alpha > 0.0)) throw std::domain_error("mu formula needs alpha > 0");
    return alpha >= dim.critical() ? alpha * (dim.n - 2 - alpha) : dim.critical_coupling();
}

EigenResult epsilon_threshold(const Dimension& dim, const PowerLaw& density,
                              ThresholdVariant variant, int k, const StudyOptions& opts) {
    if (!(density.coef > 0.0))
        throw std::invalid_argument("threshold: density coefficient must be positive");
    RayleighProblem p{dim};
    p.weight = RadialPotential::power(dim, density);
    switch (variant) {
    case ThresholdVariant::Base:
        if (k != 0) throw std::invalid_argument("threshold: base variant has k = 0");
        if (!(density.power < -2.0))
            throw std::invalid_argument("threshold: tail must decay faster than r^{-2}");
        p.domain = RadialDomain::exterior(1.0, 2.0);
        p.alpha = dim.critical();
        break;
    case ThresholdVariant::LogRefined:
        if (k < 1 || k >= dim.n - 2)
            throw std::invalid_argument("threshold: log-refined variant needs 1 <= k < N-2");
        if (!(density.power < -2.0))
            throw std::invalid_argument("threshold: tail must decay faster than r^{-2}");
        p.domain = RadialDomain::exterior(1.0, 2.0);
        p.alpha = 0.5 * (dim.n - 2 + k);
        break;
    case ThresholdVariant::KelvinDual:
        if (k < 0 || k >= dim.n - 2)
            throw std::invalid_argument("threshold: dual variant needs 0 <= k < N-2");
        if (!(density.power > -2.0))
            throw std::invalid_argument("threshold: core must be milder than r^{-2}");
        p.domain = RadialDomain::ball(1.0);
        p.alpha = 0.5 * (dim.n - 2 - k);
        break;
    }
    EigenResult res = solve_with_study(p, opts);

    double bound = -std::numeric_limits<double>::infinity();
    if (variant == ThresholdVariant::Base)
        bound = dim.critical_coupling() / density.coef;
    else if (variant == ThresholdVariant::LogRefined)
        bound = mu_exterior_formula(dim, 0.5 * (dim.n - 2 + k)) / density.coef;
    if (res.value < bound * (1.0 - 1e-4) - 1e-12)
        throw std::runtime_error(
            "threshold fell below its theorem lower bound: discretization fault");
    return res;
}

ExistenceRecord minimizer_existence_condition(const RayleighProblem& p,
                                              const RadialGrid& grid,
                                              double inner_radius, double tol) {
    if (p.domain.kind != RadialDomain::Kind::Ball)
        throw std::invalid_argument("existence window is posed on a ball domain");
    if (!(inner_radius > 0.0) || !(inner_radius < p.domain.outer))
        throw std::invalid_argument("existence: inner ball must sit inside the domain");

    ExistenceRecord rec;
    rec.lambda_domain = solve_quotient(p, grid, 1).value;

    RayleighProblem q = p;
    q.domain = RadialDomain::ball(inner_radius);
    const double fraction =
        std::min(1e-2, std::max(grid.r.front() / inner_radius, 1e-12));
    const RadialGrid sub = make_grid(q.domain, static_cast<int>(grid.size()), fraction);

    bool empty_denominator = true;
    for (double r : sub.r)
        if (p.weight(r) > 0.0) {
            empty_denominator = false;
            break;
        }
    rec.lambda_ball = empty_denominator ? std::numeric_limits<double>::infinity()
                                        : solve_quotient(q, sub, 1).value;

    if (!(rec.lambda_domain > tol)) {
        rec.holds = false;
        rec.inconclusive = rec.lambda_domain > -tol;
        return rec;
    }
    if (std::isinf(rec.lambda_ball)) {
        rec.holds = true;
        return rec;
    }
    const double gap = rec.lambda_ball - rec.lambda_domain;
    rec.holds = gap > tol;
    rec.inconclusive = std::fabs(gap) <= tol;
    return rec;
}

} // namespace hardylab
