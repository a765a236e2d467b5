// Two-chart geometry of the Riemann sphere: canonical points, chordal
// distance, Fubini-Study weight, pole sets with decimal vanishing rates
// and the integer multiplier thresholds they induce.
#pragma once
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "pbk/errors.hpp"

namespace pbk {

enum class Chart : std::uint8_t { Affine = 0, Infinity = 1 };

// A point of CP^1 stored in whichever of the two standard charts keeps the
// coordinate inside the closed unit disk; |coord| == 1 ties resolve to the
// affine chart.  w = 1/z on the overlap.
struct ProjectivePoint {
  Chart chart = Chart::Affine;
  std::complex<double> coord{0.0, 0.0};

  // canonicalizing constructors
  static ProjectivePoint from_affine(std::complex<double> z);
  static ProjectivePoint from_infinity_chart(std::complex<double> w);
  static ProjectivePoint infinity() { return {Chart::Infinity, {0.0, 0.0}}; }

  bool is_infinity() const {
    return chart == Chart::Infinity && coord == std::complex<double>(0.0, 0.0);
  }
  bool is_zero() const {
    return chart == Chart::Affine && coord == std::complex<double>(0.0, 0.0);
  }

  // u = 1/(1+|z|^2) in [0,1]; u(0) = 1, u(infinity) = 0.
  double u() const;
  // t = log|z|; -inf at 0, +inf at infinity.
  double log_abs_z() const;
  double theta() const;  // arg z (= -arg w in the infinity chart)
};

// Chordal distance sigma(x,y) = |z-y| / sqrt((1+|z|^2)(1+|y|^2)); range
// [0,1], 1 for antipodes.  Also the Fubini-Study norm of the canonical
// section of O(1) vanishing at y, so  dd^c log sigma_y = delta_y - omega_FS.
double chordal_sigma(const ProjectivePoint& x, const ProjectivePoint& y);

// Point at geodesic "longitude/latitude" (u, theta); u in (0,1].
ProjectivePoint point_from_u_theta(double u, double theta);

// fs_weight(x,k) = (k/2) log(1+|z|^2): potential of k*omega_FS in the
// affine chart.  +inf at the point at infinity.
double fs_weight(const ProjectivePoint& x, int k);

// One pole: location and decimal vanishing rate tau > 0.
struct Pole {
  ProjectivePoint point;
  double tau = 0.0;
};

// threshold t_{j,p}: tau*p when tau*p is an integer (within 1e-9 relative,
// so decimal rates behave as intended), otherwise floor(tau*p)+1.
int threshold(double tau, int p);

class PoleSet {
 public:
  PoleSet() = default;
  explicit PoleSet(std::vector<Pole> poles);

  const std::vector<Pole>& poles() const { return poles_; }
  std::size_t size() const { return poles_.size(); }
  bool empty() const { return poles_.empty(); }
  double total_tau() const;
  std::vector<int> thresholds(int p) const;
  int threshold_sum(int p) const;
  // index of the pole at 0 / at infinity, or -1
  int pole_at_zero() const;
  int pole_at_infinity() const;
  // true when every pole sits at 0 or infinity
  bool is_axial() const;

 private:
  std::vector<Pole> poles_;
};

// dim H^0_0 = max(0, k p + 1 - sum_j t_{j,p})
int dimension(int k, int p, const PoleSet& poles);

// bigness of the constrained class: sum tau_j < k (strict, 1e-12 guard)
bool is_big(int k, const PoleSet& poles);

std::string format_point(const ProjectivePoint& x);   // "re im" or "inf"
ProjectivePoint parse_point(const std::string& s);

}  // namespace pbk
