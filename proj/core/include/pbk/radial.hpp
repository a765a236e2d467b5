// Closed-form machinery for S^1-invariant data: with every pole on the axis
// {0, infinity} and a radial weight, the equilibrium envelope reduces to a
// slope-constrained lower convex hull in the Legendre coordinate t = log|z|.
// Serves as the independent cross-check for the grid complementarity solver
// and as the predicted zero distribution in the speed studies.
#pragma once
#include <vector>

#include "pbk/weights.hpp"

namespace pbk {

// g(t) = k psi0(t) + phi(t), psi0 = (1/2) log(1+e^{2t}); the envelope is
// ghat = sup { lines below g with slope in [tau0, k - tau_inf] } and
// phi_eq = ghat - k psi0.  Curvature of ghat is the equilibrium measure:
// atoms of mass nu0 at 0 and nu_inf at infinity plus the hull's bend.
class RadialEnvelope {
 public:
  int k = 0;
  double tau0 = 0, tau_inf = 0;
  double T = 0;
  int n = 0;
  std::vector<double> tgrid, g, ghat;
  double nu0 = 0, nu_inf = 0;          // endpoint slopes = axis atom masses
  std::vector<double> node_mass;       // slope jumps at interior nodes
  double contact_left = 0, contact_right = 0;  // first/last t with ghat == g

  // cap line of slope tau0 left of its hull tangency, the free hull
  // between the tangencies, cap line of slope k - tau_inf to the right
  double ghat_at(double t) const;
  double phi_eq(double t) const;   // ghat(t) - k psi0(t)
  double phi_eq_u(double u) const;
  // normalized radial distribution: F(t) = ghat'(t+) / k, the equilibrium
  // mass of {log|z| <= t} including the axis atom at 0.
  double cdf(double t) const;

 private:
  friend RadialEnvelope radial_envelope(int, double, double,
                                        const WeightSpec&, double, int);
  double la_c_ = 0, lb_c_ = 0;  // intercepts of the cap tangent lines
  double ta_ = 0, tb_ = 0;      // their tangency points on the hull
  double hull_at(double t) const;
  std::vector<int> hull_idx_;  // free-hull vertices (indices into tgrid)
};

double psi0(double t);        // (1/2) log(1 + e^{2t}), overflow-safe
double psi0_prime(double t);  // 1 - u
double u_of_t(double t);      // 1/(1+e^{2t})
double t_of_u(double u);

// phi must be radial; tau0, tau_inf >= 0 with tau0 + tau_inf < k required
// for a nonempty envelope (not_big_error otherwise).
RadialEnvelope radial_envelope(int k, double tau0, double tau_inf,
                               const WeightSpec& phi, double T, int n);

}  // namespace pbk
