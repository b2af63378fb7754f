#include "hardylab/ground_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hardylab/operators.hpp"
#include "hardylab/special.hpp"

namespace hardylab {
namespace {

// Locate rr in the node array; returns an index i with r[i] <= rr <= r[i+1]
// after clamping rr into the covered range.
size_t bracket(const std::vector<double>& r, double& rr) {
    rr = std::clamp(rr, r.front(), r.back());
    auto it = std::upper_bound(r.begin(), r.end(), rr);
    size_t i = static_cast<size_t>(it - r.begin());
    if (i > 0) --i;
    if (i + 1 >= r.size()) i = r.size() - 2;
    return i;
}

} // namespace

double TabulatedProfile::eval(double rr) const {
    if (r.size() < 2) throw std::invalid_argument("profile needs at least two nodes");
    const size_t i = bracket(r, rr);
    const double x0 = std::log(r[i]), x1 = std::log(r[i + 1]);
    const double h = x1 - x0;
    const double t = (std::log(rr) - x0) / h;
    const double s0 = r[i] * slope[i];         // d value / d log r
    const double s1 = r[i + 1] * slope[i + 1];
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * value[i] + (t3 - 2 * t2 + t) * h * s0 +
           (-2 * t3 + 3 * t2) * value[i + 1] + (t3 - t2) * h * s1;
}

double TabulatedProfile::derivative(double rr) const {
    if (r.size() < 2) throw std::invalid_argument("profile needs at least two nodes");
    const size_t i = bracket(r, rr);
    const double x0 = std::log(r[i]), x1 = std::log(r[i + 1]);
    const double h = x1 - x0;
    const double t = (std::log(rr) - x0) / h;
    const double s0 = r[i] * slope[i];
    const double s1 = r[i + 1] * slope[i + 1];
    const double t2 = t * t;
    const double dv_dx = ((6 * t2 - 6 * t) * value[i] + (3 * t2 - 4 * t + 1) * h * s0 +
                          (-6 * t2 + 6 * t) * value[i + 1] + (3 * t2 - 2 * t) * h * s1) /
                         h;
    return dv_dx / rr;
}

double GroundState::eval(double r) const {
    if (!(r > 0.0)) throw std::domain_error("ground state defined for r > 0");
    if (r > match_radius && tail) {
        double inner_at_match = std::pow(match_radius, exponent);
        if (!log_powers.empty()) {
            const auto chain =
                iterlog::x_chain(static_cast<int>(log_powers.size()), match_radius / scale);
            for (size_t i = 0; i < log_powers.size(); ++i)
                inner_at_match *= std::pow(chain[i], log_powers[i]);
        }
        return inner_at_match * tail->eval(r);
    }
    double v = std::pow(r, exponent);
    if (!log_powers.empty()) {
        const auto chain = iterlog::x_chain(static_cast<int>(log_powers.size()), r / scale);
        for (size_t i = 0; i < log_powers.size(); ++i)
            v *= std::pow(chain[i], log_powers[i]);
    }
    return v;
}

double GroundState::log_derivative(double r) const {
    if (!(r > 0.0)) throw std::domain_error("ground state defined for r > 0");
    if (r > match_radius && tail) return tail->derivative(r) / tail->eval(r);
    double ld = exponent / r;
    if (!log_powers.empty()) {
        const auto chain = iterlog::x_chain(static_cast<int>(log_powers.size()), r / scale);
        double prod = 1.0;
        for (size_t i = 0; i < log_powers.size(); ++i) {
            prod *= chain[i];
            ld += log_powers[i] / r * prod;
        }
    }
    return ld;
}

std::vector<double> GroundState::sample(const std::vector<double>& radii) const {
    std::vector<double> out(radii.size());
    for (size_t j = 0; j < radii.size(); ++j) out[j] = eval(radii[j]);
    return out;
}

GroundState build_ground_state(const Dimension& dim, const RadialPotential& V,
                               std::optional<TabulatedProfile> outer_tail, double match_tol) {
    const double c = dim.critical();
    GroundState g;

    const auto attach_tail = [&](double junction) {
        if (!outer_tail)
            throw std::invalid_argument("ground state: this potential family needs an outer tail");
        g.match_radius = junction;
        g.tail = std::move(*outer_tail);
        const double tv = g.tail->eval(junction);
        const double tl = g.tail->derivative(junction) / tv;
        const double il = [&] {
            // inner log-derivative at the junction, where every X factor is 1
            double ld = g.exponent / junction;
            for (double a : g.log_powers) ld += a / junction;
            return ld;
        }();
        if (std::fabs(tv - 1.0) > match_tol ||
            std::fabs(tl - il) > match_tol * std::max(1.0, std::fabs(il)))
            throw std::runtime_error("ground state: tail does not match the inner law to C^1");
    };

    switch (V.kind) {
    case RadialPotential::Kind::InverseSquare:
        g.exponent = -exponent_from_lambda(dim, V.lambda);
        if (outer_tail)
            throw std::invalid_argument("ground state: pure power law takes no tail");
        break;
    case RadialPotential::Kind::CriticalInner:
        g.exponent = -c;
        attach_tail(1.0);
        break;
    case RadialPotential::Kind::IteratedLogInner:
        g.exponent = -c;
        g.log_powers.assign(static_cast<size_t>(V.k), -0.5);
        attach_tail(1.0);
        break;
    case RadialPotential::Kind::IteratedLogBounded:
        g.exponent = -c;
        g.log_powers.assign(static_cast<size_t>(V.k - 1), -0.5);
        g.log_powers.push_back(-beta_from_mu(V.mu));
        g.scale = V.scale;
        if (outer_tail)
            throw std::invalid_argument("ground state: bounded family takes no tail");
        break;
    case RadialPotential::Kind::CriticalOuter:
    case RadialPotential::Kind::Tabulated:
        throw std::invalid_argument("ground state: no closed inner law for this family");
    }
    return g;
}

double ground_state_residual(const Dimension& dim, const RadialGrid& grid,
                             const GroundState& phi, const RadialPotential& V) {
    const size_t n = grid.size();
    if (n < 3) throw std::invalid_argument("residual needs at least one interior node");
    const auto a = stiffness_edges(dim, grid);
    const auto pv = phi.sample(grid.r);
    const double area = dim.sphere_area();

    // Per-cell volume and midpoint data; the geometric midpoint never touches
    // branch switches pinned at grid nodes.
    std::vector<double> cell_vol(n - 1), mid(n - 1), vphi_mid(n - 1);
    for (size_t i = 0; i + 1 < n; ++i) {
        const double h = grid.r[i + 1] - grid.r[i];
        cell_vol[i] = area * 0.5 *
                      (std::pow(grid.r[i], dim.n - 1) + std::pow(grid.r[i + 1], dim.n - 1)) * h;
        mid[i] = std::sqrt(grid.r[i] * grid.r[i + 1]);
        vphi_mid[i] = V(mid[i]) * phi.eval(mid[i]);
    }

    double worst = 0.0;
    for (size_t j = 1; j + 1 < n; ++j) {
        const double left = a[j - 1] * (pv[j] - pv[j - 1]);
        const double right = a[j] * (pv[j] - pv[j + 1]);
        const double hat_left = (mid[j - 1] - grid.r[j - 1]) / (grid.r[j] - grid.r[j - 1]);
        const double hat_right = (grid.r[j + 1] - mid[j]) / (grid.r[j + 1] - grid.r[j]);
        const double pot =
            vphi_mid[j - 1] * hat_left * cell_vol[j - 1] + vphi_mid[j] * hat_right * cell_vol[j];
        const double res = left + right - pot;
        const double scale = std::fabs(left) + std::fabs(right) + std::fabs(pot);
        if (scale > 0.0) worst = std::max(worst, std::fabs(res) / scale);
    }
    return worst;
}

} // namespace hardylab
