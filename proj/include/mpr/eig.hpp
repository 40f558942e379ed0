#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mpr/matrix.hpp"

namespace mpr {

// Eigenvalues in non-increasing order; eigenvectors matrix has the
// corresponding orthonormal eigenvectors as columns.
struct EigenDecomposition {
  std::vector<double> eigenvalues;
  Matrix eigenvectors;
};

// Jacobi sweeps did not reduce the off-diagonal mass below tolerance
// within the sweep cap. Carries the remaining off-diagonal Frobenius norm.
class EighError : public std::runtime_error {
 public:
  EighError(const std::string& what, double residual)
      : std::runtime_error(what), off_diag_residual(residual) {}
  double off_diag_residual;
};

// Cyclic Jacobi eigendecomposition of a symmetric matrix. Converges when
// the off-diagonal Frobenius norm drops below tol * max(1, ||A||_F).
// Throws std::invalid_argument on non-finite input, EighError when the
// sweep cap is exhausted.
EigenDecomposition eigh(const SymMatrix& a, int max_sweeps = 100, double tol = 1e-12);

struct LeadingVector {
  std::vector<double> v;  // unit norm, sign-normalized
  double value = 0.0;     // Rayleigh quotient / top eigenvalue
  bool degenerate = false;
};

// Top eigenvector, sign fixed so the largest-magnitude coordinate is
// positive (ties broken by lowest index). The zero matrix yields e_1 with
// the degenerate flag; an eigengap below 1e-12 also sets the flag.
LeadingVector leading_eigenvector(const SymMatrix& a);

// Spectral norm max|lambda_i| by power iteration with a fixed
// pseudo-random start vector; deterministic.
double operator_norm(const SymMatrix& a, int max_iters = 500, double tol = 1e-12);

}  // namespace mpr
