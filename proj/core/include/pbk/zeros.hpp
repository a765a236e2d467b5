// Random sections, their zero divisors (forced pole zeros + free roots +
// the contribution at infinity, always k*p points with multiplicity), and
// the empirical radial distribution statistic.
#pragma once
#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pbk/rng.hpp"
#include "pbk/sections.hpp"

namespace pbk {

struct Divisor {
  std::vector<std::pair<ProjectivePoint, int>> points;
  int total = 0;  // always k*p
};

// Unit Gaussian coefficient vector in the orthonormal basis.
std::vector<std::complex<double>> random_section_coeffs(const SectionSpace& s,
                                                        Rng& rng);

// Zeros of the section with ONB coefficients g: the forced pole zeros at
// their thresholds, the roots of the free factor, and the deficiency at
// infinity.  Multiplicities always sum to exactly k*p.
Divisor zero_divisor(const SectionSpace& s,
                     const std::vector<std::complex<double>>& g);

void save_divisor(const Divisor& d, int k, int p, std::uint64_t seed,
                  const std::string& path);
// grid-free load; k/p/seed are returned through the out parameters
Divisor load_divisor(const std::string& path, int* k, int* p,
                     std::uint64_t* seed);

// Kolmogorov-Smirnov distance between the divisor's radial empirical
// distribution (t = log|z|, with multiplicity, axis points at -+inf) and a
// reference CDF in t.  The reference is evaluated at clamped arguments, so
// step functions with atoms at the axes work.
double radial_ks(const Divisor& d,
                 const std::function<double(double)>& cdf);

// u = 1/(1+|z|^2) values of the divisor with each pole's forced threshold
// multiplicity removed; what remains follows the non-atomic part of T_eq.
std::vector<double> nonforced_u_values(const SectionSpace& s,
                                       const Divisor& d);

// Kolmogorov-Smirnov distance of a u-sample against a CDF on [0,1];
// multiplicities enter as repeated values, ties are grouped.
double u_ks(std::vector<double> u, const std::function<double(double)>& cdf);

}  // namespace pbk
