#ifndef HARDYLAB_TRIDIAG_HPP
#define HARDYLAB_TRIDIAG_HPP

#include <vector>

namespace hardylab {

// Symmetric tridiagonal pencil  T x = lambda M x  with diagonal mass.
// d: diagonal of T (size n), e: subdiagonal (size n-1), m: diagonal of M,
// m_j >= 0 with at least one positive entry.  Infinite eigenvalues from
// m_j = 0 rows are allowed; only finite ones are ever reported.
struct TridiagPencil {
    std::vector<double> d, e, m;

    size_t size() const { return d.size(); }
};

struct EigenPair {
    double value = 0.0;
    std::vector<double> vector;   // M-normalized when M is nonsingular
};

// Number of finite pencil eigenvalues strictly below s (Sylvester inertia of
// T - s M via an LDL^T sweep).
int count_below(const TridiagPencil& p, double s);

// Smallest finite eigenvalue by inertia bisection, polished together with
// its eigenvector by inverse iteration.  rel_tol controls the bisection
// width relative to max(1, |value|).
EigenPair smallest_eigenpair(const TridiagPencil& p, double rel_tol = 1e-12);

// All eigenpairs with value < cutoff, sorted increasingly, vectors
// M-orthonormal.  Neighbouring near-degenerate vectors are re-orthogonalized.
std::vector<EigenPair> eigenpairs_below(const TridiagPencil& p, double cutoff);

// Solve (T - shift M) x = b by tridiagonal LU with partial pivoting.
std::vector<double> shifted_solve(const TridiagPencil& p, double shift,
                                  const std::vector<double>& b);

} // namespace hardylab

#endif
