// Simultaneous polynomial root finding (Ehrlich-Aberth) with Newton-polygon
// initial radii, reversed-polynomial evaluation outside the unit disk, and a
// backward-stable per-root stopping rule.
#pragma once
#include <complex>
#include <vector>

namespace pbk {

struct RootResult {
  std::vector<std::complex<double>> roots;  // finite nonzero roots
  int zeros_at_origin = 0;     // multiplicity of the root z = 0
  int degree_deficiency = 0;   // formal degree minus actual degree
  int iterations = 0;
  double max_residual = 0;     // worst |p(z)| / sum|a_i||z|^i at acceptance
};

// Roots of sum_i coeffs[i] z^i.  The formal degree is coeffs.size()-1;
// exactly-zero leading coefficients become degree deficiency (roots at
// infinity in the projective reading), trailing zeros become roots at the
// origin.  Throws root_finding_error if some root fails the stopping rule
// within max_iter sweeps, input_error on an identically-zero polynomial.
RootResult polynomial_roots(const std::vector<std::complex<double>>& coeffs,
                            double tol = 1e-13, int max_iter = 500);

}  // namespace pbk
