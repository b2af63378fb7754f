#include "hardylab/special.hpp"

#include <cmath>
#include <stdexcept>

namespace hardylab {
namespace iterlog {
namespace {

void require_depth(int k) {
    if (k < 1) throw std::domain_error("iterated log depth must be >= 1");
}

// W_k = 1/X_k - 1 for the full chain; W_1 = -log t, W_{k+1} = log1p(W_k).
std::vector<double> w_chain(int k, double t) {
    require_depth(k);
    if (!(t > 0.0) || t > 1.0)
        throw std::domain_error("iterated log argument must lie in (0,1]");
    std::vector<double> w(static_cast<size_t>(k));
    w[0] = -std::log(t);
    for (int i = 1; i < k; ++i) w[i] = std::log1p(w[i - 1]);
    return w;
}

} // namespace

double x(int k, double t) {
    const auto w = w_chain(k, t);
    return 1.0 / (1.0 + w.back());
}

std::vector<double> x_chain(int k, double t) {
    auto w = w_chain(k, t);
    for (auto& wi : w) wi = 1.0 / (1.0 + wi);
    return w;
}

double x_pow_derivative(int k, double a, double r, double scale) {
    if (!(r > 0.0) || r > scale)
        throw std::domain_error("x_pow_derivative requires 0 < r <= scale");
    const auto c = x_chain(k, r / scale);
    double out = a / r;
    for (int i = 0; i + 1 < k; ++i) out *= c[static_cast<size_t>(i)];
    return out * std::pow(c[static_cast<size_t>(k - 1)], a + 1.0);
}

double y(int k, double r) {
    if (!(r >= 1.0)) throw std::domain_error("y requires r >= 1");
    return x(k, 1.0 / r);
}

double y_pow_derivative(int k, double a, double r, double scale) {
    if (!(r > scale))
        throw std::domain_error("y_pow_derivative requires r > scale");
    const auto c = x_chain(k, scale / r);
    double out = -a / r;
    for (int i = 0; i + 1 < k; ++i) out *= c[static_cast<size_t>(i)];
    return out * std::pow(c[static_cast<size_t>(k - 1)], a + 1.0);
}

double x_tilde(int k, double t) {
    require_depth(k);
    if (!(t > 0.0)) throw std::domain_error("x_tilde argument must be positive");
    return t >= 1.0 ? 1.0 : x(k, t);
}

double y_tilde(int k, double r) {
    require_depth(k);
    if (!(r > 0.0)) throw std::domain_error("y_tilde argument must be positive");
    return r <= 1.0 ? 1.0 : y(k, r);
}

} // namespace iterlog

double exponent_from_lambda(const Dimension& dim, double lambda) {
    const double b = static_cast<double>(dim.n - 2);
    const double disc = b * b - 4.0 * lambda;
    if (disc < 0.0)
        throw std::domain_error("exponent_from_lambda: lambda above ((N-2)/2)^2");
    return 2.0 * lambda / (b + std::sqrt(disc));
}

double beta_from_mu(double mu) {
    if (!(mu > 0.0) || mu > 0.25)
        throw std::domain_error("beta_from_mu requires mu in (0, 1/4]");
    return 0.5 * (1.0 + std::sqrt(1.0 - 4.0 * mu));
}

} // namespace hardylab
