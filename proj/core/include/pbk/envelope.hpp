// Equilibrium envelopes with prescribed poles, solved as a linear
// complementarity problem on the log cylinder (t, theta) = (log|z|, arg z).
//
// The singular part  sum_j tau_j log sigma_{a_j}  is carried analytically
// (so pole masses are exact by construction) and the bounded remainder h
// solves an obstacle problem: h <= ob := phi - sum tau_j log sigma_j with
// cell curvature  Lap h + (k - sum tau) * (FS row mass) >= 0, one scalar
// unknown per polar cap closing the flux balance exactly.
#pragma once
#include <cstdint>
#include <functional>
#include <vector>

#include "pbk/grid_field.hpp"
#include "pbk/weights.hpp"

namespace pbk {

struct CylinderGrid {
  int nt = 0, ntheta = 0;
  double T = 0, ht = 0, htheta = 0;

  // nt = 0 picks the isotropic row count ceil(2T/htheta)
  static CylinderGrid make(int ntheta, double T, int nt = 0);
  int size() const { return nt * ntheta; }
  int idx(int i, int j) const { return i * ntheta + j; }
  double t_center(int i) const { return -T + (i + 0.5) * ht; }
  double theta(int j) const { return (j + 0.5) * htheta; }
  ProjectivePoint point(int i, int j) const;
};

struct EnvelopeProblem {
  int k = 0;
  PoleSet poles;
  WeightSpec weight;
  double k_residual = 0;  // k - sum tau
  CylinderGrid cyl;
  std::vector<double> ob;      // obstacle for h at cells (+inf on pole hits)
  double ob_bot = 0, ob_top = 0;
  std::vector<double> row_mass;  // exact FS mass of k_residual per row cell
  double cap_mass_bot = 0, cap_mass_top = 0;
  double ct = 0, ctheta = 0, diag = 0;  // flux coefficients

  double singular_part(const ProjectivePoint& x) const;  // sum tau log sigma
};

EnvelopeProblem make_envelope_problem(int k, const PoleSet& poles,
                                      const WeightSpec& weight, int ntheta,
                                      double T = 12.0, int nt = 0);

struct SolveOptions {
  double tol = 1e-10;        // complementarity residual, value units
  int max_sweeps = 400000;
  double omega = 0.0;        // 0: resolution-based choice
  bool cascade = true;       // coarse-to-fine initialization
  bool throw_on_stall = true;
};

struct EnvelopeResult {
  EnvelopeProblem prob;
  std::vector<double> h;
  double h_bot = 0, h_top = 0;
  int sweeps = 0;
  double residual = 0;   // max |min(ob - h, curv/diag)|
  double delta = 0;      // last sweep's max update
  double rho_hat = 0;    // observed contraction factor
  double value_err = 0;  // delta * rho / (1 - rho)
  bool converged = false;

  std::vector<std::uint8_t> contact;  // ob - h <= contact_tol
  double contact_tol = 0;
  std::vector<double> cell_mass;  // equilibrium measure, regular part
  double mass_bot = 0, mass_top = 0;
  double measure_total = 0;  // atoms + cells + caps; equals k up to roundoff

  // h extended across the caps, bilinear, theta-periodic
  double h_at(double t, double theta) const;
  double phi_eq_cyl(double t, double theta) const;  // singular + h
  // on the sphere, clamped by the obstacle: min(phi(x), singular + h)
  double phi_eq(const ProjectivePoint& x) const;
  // reduced envelope phi_eq - sum tau_j log sigma_j, i.e. h itself
  double phi_req(const ProjectivePoint& x) const;
};

// First and last row centers where at least half the angular cells touch
// the obstacle; {nan, nan} when there is no contact.
std::pair<double, double> contact_t_range(const EnvelopeResult& r);

EnvelopeResult solve_envelope(const EnvelopeProblem& prob,
                              const SolveOptions& opts = {});

GridField phi_eq_field(const EnvelopeResult& r, GridPtr grid);

// sup_x |phi_eq[phi + g] - phi_eq[phi]| for a bounded perturbation g must
// not exceed sup|g|; returns (sup difference, sup|g|, slack used).
struct StabilityReport {
  double sup_diff = 0, sup_g = 0, tolerance = 0;
  bool within = false;
};
StabilityReport envelope_stability_check(int k, const PoleSet& poles,
                                         const WeightSpec& phi,
                                         const WeightSpec& g, int ntheta,
                                         double T = 12.0);

// Empirical modulus of continuity of a function on the sphere against
// chordal distance: for each delta, max |f(x)-f(y)| / delta^nu over pairs at
// distance <= delta (adjacent-scale random pairs plus ladders toward the
// poles).  rho > 0 weights each pair by dist(pair, poles)^rho, the allowance
// of the singular Holder class.  Used for the Holder propagation diagnostic.
struct ModulusRow {
  double delta = 0, sup_diff = 0, ratio = 0;  // ratio = sup_diff / delta^nu
};
std::vector<ModulusRow> holder_modulus(
    const std::function<double(const ProjectivePoint&)>& f,
    const PoleSet& poles, double nu, const std::vector<double>& deltas,
    int pairs_per_delta, std::uint64_t seed, double rho = 0);

}  // namespace pbk
