#ifndef HARDYLAB_DIMENSION_HPP
#define HARDYLAB_DIMENSION_HPP

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace hardylab {

// Ambient dimension N >= 3 together with the geometric constants that the
// radial reduction carries around: every integral of a radial function over
// R^N picks up the sphere area |S^{N-1}| = N * omega_N.
struct Dimension {
    int n;

    explicit Dimension(int n_) : n(n_) {
        if (n < 3) throw std::invalid_argument("dimension must be >= 3");
    }

    // (N-2)/2, the decay exponent separating square-integrable power laws
    // from the borderline ones.
    double critical() const { return 0.5 * (n - 2); }

    // ((N-2)/2)^2, the largest coupling of |x|^{-2} compatible with a
    // nonnegative energy form on the whole space.
    double critical_coupling() const {
        const double c = critical();
        return c * c;
    }

    // |S^{N-1}| = 2 pi^{N/2} / Gamma(N/2).
    double sphere_area() const {
        return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
    }

    double ball_volume() const { return sphere_area() / n; }
};

} // namespace hardylab

#endif
