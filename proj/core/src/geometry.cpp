#include "pbk/geometry.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace pbk {

ProjectivePoint ProjectivePoint::from_affine(std::complex<double> z) {
  double a = std::abs(z);
  if (a <= 1.0) return {Chart::Affine, z};
  return {Chart::Infinity, 1.0 / z};
}

ProjectivePoint ProjectivePoint::from_infinity_chart(std::complex<double> w) {
  double a = std::abs(w);
  if (a < 1.0) return {Chart::Infinity, w};
  // |w| >= 1 lives in the affine chart; |w| == 1 ties go affine too.
  return {Chart::Affine, 1.0 / w};
}

double ProjectivePoint::u() const {
  double a2 = std::norm(coord);
  if (chart == Chart::Affine) return 1.0 / (1.0 + a2);
  return a2 / (1.0 + a2);
}

double ProjectivePoint::log_abs_z() const {
  double a = std::abs(coord);
  if (chart == Chart::Affine) return std::log(a);
  return -std::log(a);
}

double ProjectivePoint::theta() const {
  if (chart == Chart::Affine) return std::arg(coord);
  return coord == std::complex<double>(0.0, 0.0) ? 0.0 : -std::arg(coord);
}

double chordal_sigma(const ProjectivePoint& x, const ProjectivePoint& y) {
  const std::complex<double>&a = x.coord, &b = y.coord;
  double na = std::norm(a), nb = std::norm(b);
  double denom = std::sqrt((1.0 + na) * (1.0 + nb));
  if (x.chart == y.chart) {
    // same chart: sigma symmetric under z -> 1/z applied to both slots
    return std::abs(a - b) / denom;
  }
  // mixed charts: sigma(z, 1/w) = |z w - 1| / sqrt((1+|z|^2)(1+|w|^2))
  return std::abs(a * b - 1.0) / denom;
}

ProjectivePoint point_from_u_theta(double u, double theta) {
  if (u <= 0.0 || u > 1.0) throw input_error("point_from_u_theta: u outside (0,1]");
  double r2 = (1.0 - u) / u;
  double r = std::sqrt(r2);
  std::complex<double> dir = std::polar(1.0, theta);
  if (r <= 1.0) return {Chart::Affine, r * dir};
  return {Chart::Infinity, (1.0 / r) * std::conj(dir)};
}

double fs_weight(const ProjectivePoint& x, int k) {
  double a2 = std::norm(x.coord);
  if (x.chart == Chart::Affine) return 0.5 * k * std::log1p(a2);
  if (a2 == 0.0) return std::numeric_limits<double>::infinity();
  // (k/2) log(1+|w|^2) - k log|w|, the same global function near infinity
  return 0.5 * k * std::log1p(a2) - 0.5 * k * std::log(a2);
}

int threshold(double tau, int p) {
  if (!(tau > 0.0) || !std::isfinite(tau)) throw input_error("threshold: tau must be positive and finite");
  if (p <= 0) throw input_error("threshold: p must be positive");
  double tp = tau * static_cast<double>(p);
  double r = std::round(tp);
  if (std::fabs(tp - r) <= 1e-9 * std::max(1.0, std::fabs(tp)))
    return static_cast<int>(r);
  return static_cast<int>(std::floor(tp)) + 1;
}

PoleSet::PoleSet(std::vector<Pole> poles) : poles_(std::move(poles)) {
  for (std::size_t i = 0; i < poles_.size(); ++i) {
    if (!(poles_[i].tau > 0.0) || !std::isfinite(poles_[i].tau))
      throw input_error("PoleSet: vanishing rate must be positive and finite");
    for (std::size_t j = 0; j < i; ++j)
      if (chordal_sigma(poles_[i].point, poles_[j].point) < 1e-12)
        throw input_error("PoleSet: poles must be pairwise distinct");
  }
}

double PoleSet::total_tau() const {
  double s = 0.0;
  for (const auto& q : poles_) s += q.tau;
  return s;
}

std::vector<int> PoleSet::thresholds(int p) const {
  std::vector<int> t;
  t.reserve(poles_.size());
  for (const auto& q : poles_) t.push_back(threshold(q.tau, p));
  return t;
}

int PoleSet::threshold_sum(int p) const {
  int s = 0;
  for (const auto& q : poles_) s += threshold(q.tau, p);
  return s;
}

int PoleSet::pole_at_zero() const {
  for (std::size_t j = 0; j < poles_.size(); ++j)
    if (poles_[j].point.is_zero()) return static_cast<int>(j);
  return -1;
}

int PoleSet::pole_at_infinity() const {
  for (std::size_t j = 0; j < poles_.size(); ++j)
    if (poles_[j].point.is_infinity()) return static_cast<int>(j);
  return -1;
}

bool PoleSet::is_axial() const {
  for (const auto& q : poles_)
    if (!q.point.is_zero() && !q.point.is_infinity()) return false;
  return true;
}

int dimension(int k, int p, const PoleSet& poles) {
  if (k <= 0 || p <= 0) throw input_error("dimension: k and p must be positive");
  long d = static_cast<long>(k) * p + 1 - poles.threshold_sum(p);
  return d > 0 ? static_cast<int>(d) : 0;
}

bool is_big(int k, const PoleSet& poles) {
  if (k <= 0) throw input_error("is_big: k must be positive");
  return poles.total_tau() < static_cast<double>(k) - 1e-12;
}

std::string format_point(const ProjectivePoint& x) {
  if (x.is_infinity()) return "inf";
  std::complex<double> z;
  if (x.chart == Chart::Affine) {
    z = x.coord;
  } else {
    z = 1.0 / x.coord;
  }
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g %.17g", z.real(), z.imag());
  return buf;
}

ProjectivePoint parse_point(const std::string& s) {
  std::istringstream is(s);
  std::string first;
  is >> first;
  if (first == "inf" || first == "INF") return ProjectivePoint::infinity();
  double re = 0, im = 0;
  try {
    re = std::stod(first);
  } catch (...) {
    throw input_error("parse_point: bad coordinate '" + s + "'");
  }
  if (!(is >> im)) im = 0.0;
  return ProjectivePoint::from_affine({re, im});
}

}  // namespace pbk
