#include "pbk/radial.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pbk/errors.hpp"

namespace pbk {

double psi0(double t) {
  return t > 0 ? t + 0.5 * std::log1p(std::exp(-2.0 * t))
               : 0.5 * std::log1p(std::exp(2.0 * t));
}

double psi0_prime(double t) { return 1.0 / (1.0 + std::exp(-2.0 * t)); }

double u_of_t(double t) { return 1.0 / (1.0 + std::exp(2.0 * t)); }

double t_of_u(double u) { return 0.5 * std::log((1.0 - u) / u); }

namespace {

// lower convex hull of (t_i, y_i), t ascending; returns vertex indices
std::vector<int> lower_hull(const std::vector<double>& t,
                            const std::vector<double>& y) {
  std::vector<int> h;
  int n = static_cast<int>(t.size());
  for (int i = 0; i < n; ++i) {
    while (h.size() >= 2) {
      int a = h[h.size() - 2], b = h[h.size() - 1];
      // keep b only if it bends upward: (y_b-y_a)/(t_b-t_a) <= (y_i-y_a)/(t_i-t_a)
      if ((y[b] - y[a]) * (t[i] - t[a]) <= (y[i] - y[a]) * (t[b] - t[a]))
        break;
      h.pop_back();
    }
    h.push_back(i);
  }
  return h;
}

}  // namespace

double RadialEnvelope::hull_at(double t) const {
  const std::vector<int>& h = hull_idx_;
  int nv = static_cast<int>(h.size());
  if (nv == 1) return g[h[0]];
  int lo = 0, hi = nv - 1;
  if (t <= tgrid[h[0]]) {
    lo = 0;
    hi = 1;
  } else if (t >= tgrid[h[nv - 1]]) {
    lo = nv - 2;
    hi = nv - 1;
  } else {
    while (hi - lo > 1) {
      int mid = (lo + hi) / 2;
      (tgrid[h[mid]] <= t ? lo : hi) = mid;
    }
  }
  double ta = tgrid[h[lo]], tb = tgrid[h[hi]];
  double s = (g[h[hi]] - g[h[lo]]) / (tb - ta);
  return g[h[lo]] + s * (t - ta);
}

double RadialEnvelope::ghat_at(double t) const {
  // slope clamp: cap lines take over outside their hull tangencies
  if (t <= ta_) return la_c_ + tau0 * t;
  if (t >= tb_) return lb_c_ + (k - tau_inf) * t;
  return hull_at(t);
}

double RadialEnvelope::phi_eq(double t) const { return ghat_at(t) - k * psi0(t); }

double RadialEnvelope::phi_eq_u(double u) const {
  if (!(u > 0.0) || !(u < 1.0))
    throw input_error("phi_eq_u requires u strictly inside (0,1)");
  return phi_eq(t_of_u(u));
}

double RadialEnvelope::cdf(double t) const {
  double h = 1e-6 * std::max(1.0, T);
  double s = (ghat_at(t + h) - ghat_at(t - h)) / (2.0 * h);
  // ghat' ranges over [tau0, k - tau_inf]; clamping kills FD roundoff jitter
  // at the plateaus without touching the interior
  s = std::min(static_cast<double>(k) - tau_inf, std::max(tau0, s));
  return s / k;
}

RadialEnvelope radial_envelope(int k, double tau0, double tau_inf,
                               const WeightSpec& phi, double T, int n) {
  if (k < 1) throw input_error("k must be >= 1");
  if (tau0 < 0 || tau_inf < 0) throw input_error("axis rates must be >= 0");
  if (!(T > 0) || n < 16) throw input_error("bad hull window");
  if (!phi.is_radial())
    throw input_error("radial envelope needs a radial weight");
  if (tau0 + tau_inf >= k - 1e-12) {
    std::ostringstream os;
    os << "axis rates " << tau0 << " + " << tau_inf
       << " exhaust the class (k = " << k << ")";
    throw not_big_error(os.str());
  }

  RadialEnvelope r;
  r.k = k;
  r.tau0 = tau0;
  r.tau_inf = tau_inf;
  r.T = T;
  r.n = n;
  r.tgrid.resize(n);
  r.g.resize(n);
  double dt = 2.0 * T / (n - 1);
  for (int i = 0; i < n; ++i) {
    double t = -T + i * dt;
    r.tgrid[i] = t;
    r.g[i] = k * psi0(t) + phi.eval_cyl(t, 0.0);
  }
  r.hull_idx_ = lower_hull(r.tgrid, r.g);

  double sa = tau0, sb = k - tau_inf;
  double ca = std::numeric_limits<double>::infinity();
  double cb = ca;
  int ia = 0, ib = 0;
  for (int i = 0; i < n; ++i) {
    double va = r.g[i] - sa * r.tgrid[i];
    if (va < ca) {
      ca = va;
      ia = i;  // leftmost tangency of the slope-tau0 line
    }
    double vb = r.g[i] - sb * r.tgrid[i];
    if (vb <= cb) {
      cb = vb;
      ib = i;  // rightmost tangency of the slope-(k - tau_inf) line
    }
  }
  r.la_c_ = ca;
  r.lb_c_ = cb;
  r.ta_ = r.tgrid[ia];
  r.tb_ = r.tgrid[ib];

  r.ghat.resize(n);
  for (int i = 0; i < n; ++i) r.ghat[i] = r.ghat_at(r.tgrid[i]);

  double gscale = 0;
  for (int i = 0; i < n; ++i) gscale = std::max(gscale, std::abs(r.g[i]));

  r.nu0 = (r.ghat[1] - r.ghat[0]) / dt;
  r.nu_inf = k - (r.ghat[n - 1] - r.ghat[n - 2]) / dt;
  r.node_mass.assign(n, 0.0);
  // mass sits where ghat bends: at hull vertices between the cap tangencies.
  // vertex slope differences telescope exactly, unlike per-node second
  // differences whose clamped roundoff noise biases the total.
  {
    const auto& h = r.hull_idx_;
    int a = static_cast<int>(std::lower_bound(h.begin(), h.end(), ia) - h.begin());
    int b = static_cast<int>(std::lower_bound(h.begin(), h.end(), ib) - h.begin());
    double prev = sa;  // slope entering the current vertex
    for (int j = a; j <= b; ++j) {
      double next = (j == b) ? sb
                             : (r.g[h[j + 1]] - r.g[h[j]]) /
                                   (r.tgrid[h[j + 1]] - r.tgrid[h[j]]);
      int node = h[j];
      if (node != 0 && node != n - 1)  // window-edge deficit is nu0/nu_inf's
        r.node_mass[node] = std::max(0.0, next - prev);
      prev = next;
    }
  }
  double ctol = 1e-9 * std::max(1.0, gscale);
  r.contact_left = r.tgrid[n - 1];
  r.contact_right = r.tgrid[0];
  for (int i = 0; i < n; ++i) {
    if (r.g[i] - r.ghat[i] <= ctol) {
      r.contact_left = std::min(r.contact_left, r.tgrid[i]);
      r.contact_right = std::max(r.contact_right, r.tgrid[i]);
    }
  }
  return r;
}

}  // namespace pbk
