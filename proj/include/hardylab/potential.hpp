#ifndef HARDYLAB_POTENTIAL_HPP
#define HARDYLAB_POTENTIAL_HPP

#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "hardylab/dimension.hpp"
#include "hardylab/special.hpp"

namespace hardylab {

// coef * r^power; the workhorse for subcritical tails f <= K r^{-2-sigma}
// (power < -2) and cores g <= K r^{-2+sigma} (power > -2).
struct PowerLaw {
    double coef = 1.0;
    double power = 0.0;

    double operator()(double r) const { return coef * std::pow(r, power); }
};

// Radial potentials V of the Schroedinger forms studied here.  Each carries
// enough structure to evaluate pointwise and to expose its subcritical
// margin (sigma, K) where one exists.
struct RadialPotential {
    enum class Kind {
        InverseSquare,      // lambda |x|^{-2} on the whole domain
        CriticalInner,      // ((N-2)/2)^2 |x|^{-2} inside |x|<1, eps*f outside
        CriticalOuter,      // eps*g inside |x|<1, ((N-2)/2)^2 |x|^{-2} outside
        IteratedLogInner,   // critical + (1/4) sum (X_1...X_i)^2 |x|^{-2} inside, eps*f outside
        IteratedLogBounded, // critical + (1/4) sum_{i<k} (X_1..X_i)^2 + mu (X_1..X_k)^2, all /|x|^2, on a ball of radius D
        Power,              // coef * r^power everywhere (e.g. tails f, cores g, |x|^{-2})
        Tabulated           // arbitrary samples with linear interpolation
    };

    Kind kind = Kind::InverseSquare;
    int n = 3;               // ambient dimension
    double lambda = 0.0;     // InverseSquare coupling
    double epsilon = 0.0;    // tail/core strength
    PowerLaw tail;           // f (CriticalInner/IteratedLogInner)
    PowerLaw core;           // g (CriticalOuter)
    int k = 0;               // iterated-log depth
    double mu = 0.25;        // coefficient of the deepest log factor
    double scale = 1.0;      // D for IteratedLogBounded
    std::vector<double> tab_r, tab_v;  // Tabulated samples

    static RadialPotential inverse_square(const Dimension& dim, double lambda) {
        RadialPotential v;
        v.kind = Kind::InverseSquare;
        v.n = dim.n;
        v.lambda = lambda;
        return v;
    }

    static RadialPotential critical_inner(const Dimension& dim, double eps, PowerLaw f) {
        if (!(f.power < -2.0) || !(f.coef > 0.0))
            throw std::invalid_argument("critical_inner: tail must be K r^{-2-sigma} with sigma > 0");
        RadialPotential v;
        v.kind = Kind::CriticalInner;
        v.n = dim.n;
        v.epsilon = eps;
        v.tail = f;
        return v;
    }

    static RadialPotential critical_outer(const Dimension& dim, double eps, PowerLaw g) {
        if (!(g.power > -2.0) || !(g.coef > 0.0))
            throw std::invalid_argument("critical_outer: core must be K r^{-2+sigma} with sigma > 0");
        RadialPotential v;
        v.kind = Kind::CriticalOuter;
        v.n = dim.n;
        v.epsilon = eps;
        v.core = g;
        return v;
    }

    static RadialPotential iterated_log_inner(const Dimension& dim, int k, double eps, PowerLaw f) {
        if (k < 1) throw std::invalid_argument("iterated_log_inner: k >= 1");
        if (!(f.power < -2.0) || !(f.coef > 0.0))
            throw std::invalid_argument("iterated_log_inner: tail must be K r^{-2-sigma}");
        RadialPotential v;
        v.kind = Kind::IteratedLogInner;
        v.n = dim.n;
        v.epsilon = eps;
        v.tail = f;
        v.k = k;
        return v;
    }

    static RadialPotential iterated_log_bounded(const Dimension& dim, int k, double mu, double D) {
        if (k < 1) throw std::invalid_argument("iterated_log_bounded: k >= 1");
        if (!(mu > 0.0) || mu > 0.25)
            throw std::invalid_argument("iterated_log_bounded: mu in (0, 1/4]");
        if (!(D > 0.0)) throw std::invalid_argument("iterated_log_bounded: D > 0");
        RadialPotential v;
        v.kind = Kind::IteratedLogBounded;
        v.n = dim.n;
        v.k = k;
        v.mu = mu;
        v.scale = D;
        return v;
    }

    static RadialPotential power(const Dimension& dim, PowerLaw p) {
        if (!(p.coef >= 0.0))
            throw std::invalid_argument("power: coefficient must be nonnegative");
        RadialPotential v;
        v.kind = Kind::Power;
        v.n = dim.n;
        v.tail = p;
        return v;
    }

    static RadialPotential tabulated(const Dimension& dim, std::vector<double> r,
                                     std::vector<double> values) {
        if (r.size() != values.size() || r.size() < 2)
            throw std::invalid_argument("tabulated: need matching sample arrays");
        RadialPotential v;
        v.kind = Kind::Tabulated;
        v.n = dim.n;
        v.tab_r = std::move(r);
        v.tab_v = std::move(values);
        return v;
    }

    double operator()(double r) const {
        const double cc = 0.25 * (n - 2) * (n - 2);
        switch (kind) {
            case Kind::InverseSquare:
                return lambda / (r * r);
            case Kind::CriticalInner:
                return r < 1.0 ? cc / (r * r) : epsilon * tail(r);
            case Kind::CriticalOuter:
                return r < 1.0 ? epsilon * core(r) : cc / (r * r);
            case Kind::IteratedLogInner: {
                if (r >= 1.0) return epsilon * tail(r);
                return (cc + log_sum(k, r, 1.0, 0.25)) / (r * r);
            }
            case Kind::IteratedLogBounded: {
                if (!(r < scale))
                    throw std::domain_error("iterated_log_bounded potential only defined for r < D");
                double s = 0.0, prod = 1.0;
                const auto chain = iterlog::x_chain(k, r / scale);
                for (int i = 0; i < k; ++i) {
                    prod *= chain[static_cast<size_t>(i)];
                    s += (i + 1 < k ? 0.25 : mu) * prod * prod;
                }
                return (cc + s) / (r * r);
            }
            case Kind::Power:
                return tail(r);
            case Kind::Tabulated: {
                if (r <= tab_r.front()) return tab_v.front();
                if (r >= tab_r.back()) return tab_v.back();
                size_t lo = 0, hi = tab_r.size() - 1;
                while (hi - lo > 1) {
                    const size_t mid = (lo + hi) / 2;
                    (tab_r[mid] <= r ? lo : hi) = mid;
                }
                const double f = (r - tab_r[lo]) / (tab_r[lo + 1] - tab_r[lo]);
                return (1.0 - f) * tab_v[lo] + f * tab_v[lo + 1];
            }
        }
        return 0.0;
    }

    // sup of r^2 V over (0, boundary]; all families here attain it at the
    // outer edge of the singular region, where every X factor equals 1.
    double inverse_square_envelope() const {
        const double cc = 0.25 * (n - 2) * (n - 2);
        switch (kind) {
            case Kind::InverseSquare: return lambda;
            case Kind::CriticalInner:
            case Kind::CriticalOuter: return cc;
            case Kind::IteratedLogInner: return cc + 0.25 * k;
            case Kind::IteratedLogBounded: return cc + 0.25 * (k - 1) + mu;
            case Kind::Power:
                // r^2 V = coef * r^{power+2} on (0,1]: bounded iff power >= -2
                return tail.power >= -2.0 ? tail.coef
                                          : std::numeric_limits<double>::infinity();
            case Kind::Tabulated: {
                double m = 0.0;
                for (size_t j = 0; j < tab_r.size(); ++j)
                    m = std::max(m, tab_r[j] * tab_r[j] * tab_v[j]);
                return m;
            }
        }
        return 0.0;
    }

  private:
    static double log_sum(int k, double r, double scale, double each) {
        double s = 0.0, prod = 1.0;
        const auto chain = iterlog::x_chain(k, r / scale);
        for (int i = 0; i < k; ++i) {
            prod *= chain[static_cast<size_t>(i)];
            s += each * prod * prod;
        }
        return s;
    }
};

} // namespace hardylab

#endif
