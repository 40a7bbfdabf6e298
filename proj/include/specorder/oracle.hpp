#pragma once

// Reference computations that share no code with the eigensolver. Used by
// the test suite and the acceptance checks.

#include <array>

#include "specorder/linalg.hpp"

namespace specorder::oracle {

/// det(λI - A) for a 3×3 matrix, expanded by cofactors.
double characteristic_polynomial(const linalg::SymMatrix& a, double lambda);

/// Ascending eigenvalues of a symmetric 3×3 matrix: the roots of the
/// characteristic polynomial, bracketed at the critical points of the cubic
/// and refined by bisection.
std::array<double, 3> cubic_eigenvalues(const linalg::SymMatrix& a);

struct SeriesResult {
  linalg::SymMatrix value;
  double remainder_bound = 0.0;  // bound on the entrywise truncation error
  int terms = 0;
};

/// scale·√(A + shift·I) from the binomial series about the centre of the
/// Gershgorin interval. Throws ValidationError if the series would not converge.
SeriesResult sqrt_shift_series(const linalg::SymMatrix& a, double shift, double scale);

}  // namespace specorder::oracle
