// Constrained section spaces H^0_0(CP^1, O(kp)) with prescribed vanishing
// orders at a finite pole set, their discrete orthonormal bases, and the
// partial Bergman density built from them.
//
// Sections are represented in factored form  s = B * q  with
// B = prod_j f_j^{t_j} the canonical product of degree-one factors through
// the poles and q a free polynomial of degree <= m = kp - sum t_j.  All
// evaluation happens in log-magnitude + phase per chart, so no intermediate
// quantity overflows for any supported (k, p).
#pragma once
#include <complex>
#include <cstdint>
#include <vector>

#include "pbk/grid_field.hpp"
#include "pbk/weights.hpp"

namespace pbk {

struct SectionSpace {
  int k = 0, p = 0;
  PoleSet poles;
  std::vector<int> thresholds;  // parallel to poles
  int m = 0;                    // free-factor degree bound
  int dim = 0;                  // = m + 1
  WeightSpec weight;
  GridPtr grid;

  // Orthonormal-basis coefficients in the *scaled* factored-monomial basis
  // g_i / exp(scale_log[i]); column j is section j.  Row-major (m+1) rows.
  std::vector<std::complex<double>> onb;  // (m+1) x dim, row-major
  std::vector<double> scale_log;          // per-column log scale
  double min_cond = 0.0;                  // smallest diagonal conditioning ratio
  bool extended_precision = false;        // retry path was taken

  // Monomial coefficients of sum_j g_j * (ONB section j); throws
  // numeric_error if the unscaled coefficients are not representable.
  std::vector<std::complex<double>> monomial_coeffs(
      const std::vector<std::complex<double>>& g) const;
};

// Grid resolution floors for a (k,p) build.
int radial_floor(int k, int p);
int angular_floor(int k, int p);

// Build the discrete orthonormal basis.  Throws dimension_zero_error when
// dim == 0, ill_conditioned_error when even the extended-precision retry
// cannot resolve the basis, input_error when the grid is below the floor.
SectionSpace build_orthonormal_basis(int k, int p, const PoleSet& poles,
                                     const WeightSpec& weight, GridPtr grid);

// Normalized values s_j(x) of all basis sections at an arbitrary point,
// in the canonical chart of x.
std::vector<std::complex<double>> eval_basis(const SectionSpace& s,
                                             const ProjectivePoint& x);

// log |s(x)|_{h^p} for the section with free-factor monomial data given in
// the scaled basis; used internally and by tests for chart consistency.
double eval_log_norm(const SectionSpace& s, const ProjectivePoint& x,
                     const std::vector<std::complex<double>>& scaled_coeffs,
                     Chart force_chart, bool use_force);

struct BergmanField {
  GridPtr grid;
  GridField P;      // partial Bergman density against h^p
  GridField log_P;  // robust log of the same (finite at every node)
  int dim = 0;
  double trace = 0.0;      // integral of P
  double trace_gap = 0.0;  // |trace - dim|
};

BergmanField bergman_field(const SectionSpace& s);

// phi_p = phi + log(P_p) / (2p) as a grid field.
GridField bergman_potential(const SectionSpace& s, const BergmanField& bf);

// Max violation of |S(x)|^2 <= P(x) over random unit sections at sampled
// nodes, relative to P; also verifies the extremal section attains P.
struct VariationalReport {
  double max_violation = 0.0;   // positive excess, relative
  double extremal_gap = 0.0;    // | |S_x(x)|^2 - P(x) | / P(x), max
  int sections = 0, points = 0;
};
VariationalReport variational_check(const SectionSpace& s,
                                    const BergmanField& bf, int n_sections,
                                    int n_points, std::uint64_t seed);

// Structured-text export of the basis: header, pole table, per-column log
// scales, then dim rows of dim "re im" pairs (scaled-basis coefficients,
// lossless round trip).
void save_basis(const SectionSpace& s, const std::string& path);
SectionSpace load_basis(const std::string& path, GridPtr grid);

}  // namespace pbk
