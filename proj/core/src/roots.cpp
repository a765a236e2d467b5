#include "pbk/roots.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pbk/errors.hpp"

namespace pbk {
namespace {

using cplx = std::complex<double>;

// p, p', and the scale S = sum |a_i| |z|^i in one pass
struct EvalOut {
  cplx p, dp;
  double scale;
};

EvalOut horner(const std::vector<cplx>& a, cplx z) {
  int n = static_cast<int>(a.size()) - 1;
  cplx p = a[n], dp = 0.0;
  double az = std::abs(z), s = std::abs(a[n]);
  for (int i = n - 1; i >= 0; --i) {
    dp = dp * z + p;
    p = p * z + a[i];
    s = s * az + std::abs(a[i]);
  }
  return {p, dp, s};
}

// Newton correction p/p' with the reversed polynomial when |z| > 1:
// p(z) = z^n q(1/z) with q the reversed coefficients, so
// p/p'(z) = z q(y) / (n q(y) - y q'(y)), y = 1/z.
cplx newton_correction(const std::vector<cplx>& a, const std::vector<cplx>& ar,
                       cplx z, double* rel_residual) {
  int n = static_cast<int>(a.size()) - 1;
  if (std::abs(z) <= 1.0) {
    EvalOut e = horner(a, z);
    *rel_residual = e.scale > 0 ? std::abs(e.p) / e.scale : 0.0;
    return e.dp != cplx(0.0) ? e.p / e.dp : cplx(0.0);
  }
  cplx y = 1.0 / z;
  EvalOut e = horner(ar, y);
  *rel_residual = e.scale > 0 ? std::abs(e.p) / e.scale : 0.0;
  cplx denom = double(n) * e.p - y * e.dp;
  return denom != cplx(0.0) ? z * e.p / denom : cplx(0.0);
}

// Newton-polygon (upper hull of (i, log|a_i|)) initial radii after Bini.
std::vector<cplx> initial_guesses(const std::vector<cplx>& a) {
  int n = static_cast<int>(a.size()) - 1;
  std::vector<double> ly(n + 1);
  const double neg = -1e300;
  for (int i = 0; i <= n; ++i) {
    double m = std::abs(a[i]);
    ly[i] = m > 0 ? std::log(m) : neg;
  }
  std::vector<int> hull;  // upper convex hull indices
  for (int i = 0; i <= n; ++i) {
    if (ly[i] == neg) continue;
    while (hull.size() >= 2) {
      int b = hull[hull.size() - 1], c = hull[hull.size() - 2];
      if ((ly[b] - ly[c]) * (i - c) >= (ly[i] - ly[c]) * (b - c)) break;
      hull.pop_back();
    }
    hull.push_back(i);
  }
  std::vector<cplx> z;
  z.reserve(n);
  const double golden = 0.3819660112501051;  // spreads angles between rings
  int ring = 0;
  for (std::size_t s = 0; s + 1 < hull.size(); ++s) {
    int k1 = hull[s], k2 = hull[s + 1];
    double r = std::exp((ly[k1] - ly[k2]) / (k2 - k1));
    int cnt = k2 - k1;
    for (int j = 0; j < cnt; ++j) {
      double ang =
          2.0 * M_PI * (double(j) / cnt + golden * ring) + 0.7 / (ring + 1);
      z.push_back(std::polar(r, ang));
    }
    ++ring;
  }
  return z;
}

}  // namespace

RootResult polynomial_roots(const std::vector<cplx>& coeffs, double tol,
                            int max_iter) {
  RootResult out;
  int hi = static_cast<int>(coeffs.size()) - 1;
  while (hi >= 0 && coeffs[hi] == cplx(0.0)) --hi;
  if (hi < 0) throw input_error("zero polynomial has no well-defined roots");
  out.degree_deficiency = static_cast<int>(coeffs.size()) - 1 - hi;
  int lo = 0;
  while (lo < hi && coeffs[lo] == cplx(0.0)) ++lo;
  out.zeros_at_origin = lo;
  int n = hi - lo;
  if (n == 0) return out;

  std::vector<cplx> a(coeffs.begin() + lo, coeffs.begin() + hi + 1);
  std::vector<cplx> ar(a.rbegin(), a.rend());
  if (n == 1) {
    out.roots.push_back(-a[0] / a[1]);
    double rr = 0;
    newton_correction(a, ar, out.roots[0], &rr);
    out.max_residual = rr;
    return out;
  }

  std::vector<cplx> z = initial_guesses(a);
  std::vector<char> frozen(n, 0);
  std::vector<double> res(n, 1.0);
  int it = 0;
  for (; it < max_iter; ++it) {
    int active = 0;
    for (int i = 0; i < n; ++i) {
      if (frozen[i]) continue;
      double rr = 0;
      cplx nc = newton_correction(a, ar, z[i], &rr);
      res[i] = rr;
      if (rr <= tol) {
        frozen[i] = 1;
        continue;
      }
      ++active;
      cplx sum = 0.0;
      bool collide = false;
      for (int j = 0; j < n; ++j) {
        if (j == i) continue;
        cplx d = z[i] - z[j];
        if (d == cplx(0.0)) {
          collide = true;
          break;
        }
        sum += 1.0 / d;
      }
      if (collide) {  // nudge duplicated guesses apart
        z[i] *= cplx(1.0 + 1e-6, 1e-6);
        continue;
      }
      cplx denom = 1.0 - nc * sum;
      cplx step = denom != cplx(0.0) ? nc / denom : nc;
      z[i] -= step;
    }
    if (active == 0) break;
  }
  out.iterations = it;
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    double rr = 0;
    newton_correction(a, ar, z[i], &rr);
    worst = std::max(worst, rr);
  }
  out.max_residual = worst;
  if (worst > 100.0 * tol) {
    std::ostringstream os;
    os << "root iteration left relative residual " << worst << " (tol " << tol
       << ") at degree " << n;
    throw root_finding_error(os.str());
  }
  out.roots = std::move(z);
  return out;
}

}  // namespace pbk
