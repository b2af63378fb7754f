#ifndef HARDYLAB_SPECIAL_HPP
#define HARDYLAB_SPECIAL_HPP

#include <vector>

#include "hardylab/dimension.hpp"

namespace hardylab {

// Iterated logarithm family on (0,1]:
//
//   X_1(t) = (1 - log t)^{-1},   X_{k+1}(t) = X_1(X_k(t)),
//
// together with the reflected variant Y_k(r) = X_k(1/r) on [1,oo) and the
// one-sided cutoffs X~_k (equal to 1 above t = 1) and Y~_k (equal to 1 below
// r = 1).  All values lie in (0,1], and X_k(1) = 1 exactly.
//
// The recursion is evaluated on W_k = 1/X_k - 1 >= 0, with W_1 = -log t and
// W_{k+1} = log1p(W_k); this keeps full relative precision for t near 1,
// where the naive composition would lose every significant digit of 1 - X_k.
namespace iterlog {

// X_k(t) for t in (0,1]; throws std::domain_error outside.
double x(int k, double t);

// {X_1(t), ..., X_k(t)} in one pass.
std::vector<double> x_chain(int k, double t);

// d/dr [ X_k(r/scale)^a ] = (a/r) X_1 ... X_{k-1} X_k^{a+1}  (arguments r/scale).
// Valid for 0 < r <= scale.
double x_pow_derivative(int k, double a, double r, double scale = 1.0);

// Y_k(r) = X_k(1/r) for r >= 1.
double y(int k, double r);

// d/dr [ Y_k(r/scale)^a ] = -(a/r) Y_1 ... Y_{k-1} Y_k^{a+1}.
// Valid strictly above the matching radius; throws at r = scale.
double y_pow_derivative(int k, double a, double r, double scale = 1.0);

// X~_k: equals X_k(t) on (0,1], constant 1 for t > 1.
double x_tilde(int k, double t);

// Y~_k: constant 1 on (0,1], equals Y_k(r) for r > 1.
double y_tilde(int k, double r);

} // namespace iterlog

// Smallest real root alpha of alpha (N-2-alpha) = lambda.  Real for
// lambda <= ((N-2)/2)^2; throws std::domain_error above.  Evaluated in the
// cancellation-free form 2 lambda / (N-2 + sqrt((N-2)^2 - 4 lambda)) so the
// round trip alpha -> lambda -> alpha holds to machine precision.
double exponent_from_lambda(const Dimension& dim, double lambda);

// Largest root beta of beta (1-beta) = mu for 0 < mu <= 1/4, i.e.
// beta = (1 + sqrt(1-4 mu))/2 in [1/2, 1).
double beta_from_mu(double mu);

} // namespace hardylab

#endif
