#include "pbk/envelope.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "pbk/errors.hpp"
#include "pbk/radial.hpp"
#include "pbk/rng.hpp"

namespace pbk {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 6.283185307179586476925286766559;

}  // namespace

CylinderGrid CylinderGrid::make(int ntheta, double T, int nt) {
  if (ntheta < 8) throw input_error("cylinder needs ntheta >= 8");
  if (!(T > 1.0)) throw input_error("cylinder window T must exceed 1");
  CylinderGrid c;
  c.ntheta = ntheta;
  c.T = T;
  c.htheta = kTwoPi / ntheta;
  c.nt = nt > 0 ? nt : static_cast<int>(std::ceil(2.0 * T / c.htheta));
  if (c.nt < 8) throw input_error("cylinder needs nt >= 8");
  c.ht = 2.0 * T / c.nt;
  return c;
}

ProjectivePoint CylinderGrid::point(int i, int j) const {
  return point_from_u_theta(u_of_t(t_center(i)), theta(j));
}

double EnvelopeProblem::singular_part(const ProjectivePoint& x) const {
  double s = 0;
  for (const Pole& pl : poles.poles()) {
    double sig = chordal_sigma(x, pl.point);
    if (sig < 1e-300) return -kInf;
    s += pl.tau * std::log(sig);
  }
  return s;
}

EnvelopeProblem make_envelope_problem(int k, const PoleSet& poles,
                                      const WeightSpec& weight, int ntheta,
                                      double T, int nt) {
  if (k < 1) throw input_error("k must be >= 1");
  if (!is_big(k, poles)) {
    std::ostringstream os;
    os << "total vanishing rate " << poles.total_tau()
       << " exhausts the class (k = " << k << ")";
    throw not_big_error(os.str());
  }
  EnvelopeProblem pr;
  pr.k = k;
  pr.poles = poles;
  pr.weight = weight;
  pr.k_residual = k - poles.total_tau();
  pr.cyl = CylinderGrid::make(ntheta, T, nt);
  const CylinderGrid& c = pr.cyl;

  pr.ct = (1.0 / kTwoPi) * c.htheta / c.ht;
  pr.ctheta = (1.0 / kTwoPi) * c.ht / c.htheta;
  pr.diag = 2.0 * (pr.ct + pr.ctheta);

  pr.ob.resize(c.size());
  for (int i = 0; i < c.nt; ++i) {
    for (int j = 0; j < c.ntheta; ++j) {
      ProjectivePoint x = c.point(i, j);
      double sing = pr.singular_part(x);
      pr.ob[c.idx(i, j)] =
          std::isfinite(sing) ? weight.eval(x) - sing : kInf;
    }
  }
  {
    ProjectivePoint zero = ProjectivePoint::from_affine({0.0, 0.0});
    ProjectivePoint inf = ProjectivePoint::infinity();
    double sz = pr.singular_part(zero), si = pr.singular_part(inf);
    pr.ob_bot = std::isfinite(sz) ? weight.eval(zero) - sz : kInf;
    pr.ob_top = std::isfinite(si) ? weight.eval(inf) - si : kInf;
  }

  pr.row_mass.resize(c.nt);
  for (int i = 0; i < c.nt; ++i) {
    double lo = -T + i * c.ht, hi = lo + c.ht;
    pr.row_mass[i] = pr.k_residual * c.htheta *
                     (psi0_prime(hi) - psi0_prime(lo)) / kTwoPi;
  }
  pr.cap_mass_bot = pr.k_residual * psi0_prime(-T);
  pr.cap_mass_top = pr.k_residual * (1.0 - psi0_prime(T));
  return pr;
}

namespace {

struct SweepState {
  std::vector<double> h;
  double hb = 0, ht = 0;
};

// one projected SOR sweep; returns max |update|
double psor_sweep(const EnvelopeProblem& pr, SweepState& s, double omega) {
  const CylinderGrid& c = pr.cyl;
  const int nt = c.nt, na = c.ntheta;
  const double ct = pr.ct, cth = pr.ctheta, diag = pr.diag;
  double dmax = 0;

  {  // bottom cap
    double acc = 0;
    for (int j = 0; j < na; ++j) acc += s.h[j];
    double target = (ct * acc + pr.cap_mass_bot) / (ct * na);
    double nv = std::min(pr.ob_bot, s.hb + omega * (target - s.hb));
    dmax = std::max(dmax, std::abs(nv - s.hb));
    s.hb = nv;
  }
  for (int i = 0; i < nt; ++i) {
    double* row = &s.h[static_cast<std::size_t>(i) * na];
    const double* up = i + 1 < nt ? row + na : nullptr;
    const double* dn = i > 0 ? row - na : nullptr;
    const double dncap = s.hb, upcap = s.ht;
    const double bm = pr.row_mass[i];
    const double* obr = &pr.ob[static_cast<std::size_t>(i) * na];
    for (int j = 0; j < na; ++j) {
      double vup = up ? up[j] : upcap;
      double vdn = dn ? dn[j] : dncap;
      double vl = row[j == 0 ? na - 1 : j - 1];
      double vr = row[j + 1 == na ? 0 : j + 1];
      double target = (ct * (vup + vdn) + cth * (vl + vr) + bm) / diag;
      double nv = std::min(obr[j], row[j] + omega * (target - row[j]));
      double d = std::abs(nv - row[j]);
      if (d > dmax) dmax = d;
      row[j] = nv;
    }
  }
  {  // top cap
    double acc = 0;
    const double* row = &s.h[static_cast<std::size_t>(nt - 1) * na];
    for (int j = 0; j < na; ++j) acc += row[j];
    double target = (ct * acc + pr.cap_mass_top) / (ct * na);
    double nv = std::min(pr.ob_top, s.ht + omega * (target - s.ht));
    dmax = std::max(dmax, std::abs(nv - s.ht));
    s.ht = nv;
  }
  return dmax;
}

double cell_curv(const EnvelopeProblem& pr, const SweepState& s, int i,
                 int j) {
  const CylinderGrid& c = pr.cyl;
  const int nt = c.nt, na = c.ntheta;
  double h0 = s.h[c.idx(i, j)];
  double vup = i + 1 < nt ? s.h[c.idx(i + 1, j)] : s.ht;
  double vdn = i > 0 ? s.h[c.idx(i - 1, j)] : s.hb;
  double vl = s.h[c.idx(i, j == 0 ? na - 1 : j - 1)];
  double vr = s.h[c.idx(i, j + 1 == na ? 0 : j + 1)];
  return pr.ct * (vup + vdn - 2 * h0) + pr.ctheta * (vl + vr - 2 * h0) +
         pr.row_mass[i];
}

double residual_of(const EnvelopeProblem& pr, const SweepState& s) {
  const CylinderGrid& c = pr.cyl;
  double res = 0;
  for (int i = 0; i < c.nt; ++i)
    for (int j = 0; j < c.ntheta; ++j) {
      double gap = pr.ob[c.idx(i, j)] - s.h[c.idx(i, j)];
      double r = std::min(gap, cell_curv(pr, s, i, j) / pr.diag);
      res = std::max(res, std::abs(r));
    }
  const int na = c.ntheta;
  double accb = 0, acct = 0;
  for (int j = 0; j < na; ++j) {
    accb += s.h[j];
    acct += s.h[c.idx(c.nt - 1, j)];
  }
  double curvb = pr.ct * (accb - na * s.hb) + pr.cap_mass_bot;
  double curvt = pr.ct * (acct - na * s.ht) + pr.cap_mass_top;
  res = std::max(res, std::abs(std::min(pr.ob_bot - s.hb,
                                        curvb / (pr.ct * na))));
  res = std::max(res, std::abs(std::min(pr.ob_top - s.ht,
                                        curvt / (pr.ct * na))));
  return res;
}

void run_psor(const EnvelopeProblem& pr, SweepState& s,
              const SolveOptions& opts, EnvelopeResult& out) {
  const CylinderGrid& c = pr.cyl;
  double omega = opts.omega;
  if (!(omega > 0)) {
    // slowest Jacobi mode of the anisotropic five-point operator: constant
    // along one direction, slowest nonconstant along the other.  The grid is
    // far from isotropic (ct/ctheta = (htheta/ht)^2), so an omega tuned to
    // max(nt, ntheta) alone stalls the theta-constant modes by the full
    // anisotropy ratio.
    double st = pr.ct / (pr.ct + pr.ctheta) *
                (1.0 - std::cos(0.5 * kTwoPi / c.nt));
    double sa = pr.ctheta / (pr.ct + pr.ctheta) *
                (1.0 - std::cos(kTwoPi / c.ntheta));
    double mu = 1.0 - std::min(st, sa);
    omega = std::min(
        1.999, 2.0 / (1.0 + std::sqrt(std::max(0.0, 1.0 - mu * mu))));
  }
  const int check = 32;
  double prev_delta = kInf, delta = kInf, rho = 0;
  int sweep = 0;
  double res = kInf;
  while (sweep < opts.max_sweeps) {
    for (int s2 = 0; s2 < check; ++s2) {
      delta = psor_sweep(pr, s, omega);
      ++sweep;
    }
    res = residual_of(pr, s);
    if (std::isfinite(prev_delta) && prev_delta > 0 && delta > 0)
      rho = std::min(0.999999, std::pow(delta / prev_delta, 1.0 / check));
    prev_delta = delta;
    if (res <= opts.tol && delta <= opts.tol / 100.0) break;
  }
  out.sweeps += sweep;
  out.residual = res;
  out.delta = delta;
  out.rho_hat = rho;
  out.value_err = rho < 1.0 ? delta * rho / (1.0 - rho) : kInf;
  out.converged = res <= opts.tol && delta <= opts.tol / 100.0;
  if (!out.converged && opts.throw_on_stall) {
    std::ostringstream os;
    os << "complementarity solve stalled: residual " << res << " after "
       << sweep << " sweeps at " << c.nt << "x" << c.ntheta;
    throw no_convergence_error(os.str());
  }
}

}  // namespace

double EnvelopeResult::h_at(double t, double theta) const {
  const CylinderGrid& c = prob.cyl;
  if (t <= -c.T) return h_bot;
  if (t >= c.T) return h_top;
  double th = std::fmod(theta, kTwoPi);
  if (th < 0) th += kTwoPi;
  double js = th / c.htheta - 0.5;
  int j0 = static_cast<int>(std::floor(js));
  double fj = js - j0;
  int ja = (j0 % c.ntheta + c.ntheta) % c.ntheta;
  int jb = (ja + 1) % c.ntheta;
  auto row_val = [&](int i) {
    return (1.0 - fj) * h[c.idx(i, ja)] + fj * h[c.idx(i, jb)];
  };
  double tc0 = c.t_center(0), tcn = c.t_center(c.nt - 1);
  if (t <= tc0) {
    double a = (t + c.T) / (0.5 * c.ht);
    return (1.0 - a) * h_bot + a * row_val(0);
  }
  if (t >= tcn) {
    double a = (c.T - t) / (0.5 * c.ht);
    return (1.0 - a) * h_top + a * row_val(c.nt - 1);
  }
  double is = (t + c.T) / c.ht - 0.5;
  int i0 = static_cast<int>(std::floor(is));
  i0 = std::max(0, std::min(c.nt - 2, i0));
  double fi = is - i0;
  return (1.0 - fi) * row_val(i0) + fi * row_val(i0 + 1);
}

double EnvelopeResult::phi_eq_cyl(double t, double theta) const {
  // axis poles in closed form: log sigma = +-t - psi0(+-t); stays finite at
  // deep t where u(t) rounds to an axis point and chordal_sigma collapses
  double sing = 0;
  for (const Pole& pl : prob.poles.poles()) {
    if (pl.point.is_zero()) {
      sing += pl.tau * (t - psi0(t));
    } else if (pl.point.is_infinity()) {
      sing += pl.tau * (-t - psi0(-t));
    } else {
      ProjectivePoint x = point_from_u_theta(u_of_t(t), theta);
      sing += pl.tau * std::log(chordal_sigma(x, pl.point));
    }
  }
  return sing + h_at(t, theta);
}

double EnvelopeResult::phi_eq(const ProjectivePoint& x) const {
  double sing = prob.singular_part(x);
  if (!std::isfinite(sing)) return -kInf;
  double t = x.is_zero() ? -kInf : (x.is_infinity() ? kInf : x.log_abs_z());
  double v = sing + h_at(t, x.theta());
  return std::min(prob.weight.eval(x), v);
}

double EnvelopeResult::phi_req(const ProjectivePoint& x) const {
  double t = x.is_zero() ? -kInf : (x.is_infinity() ? kInf : x.log_abs_z());
  return h_at(t, x.theta());
}

EnvelopeResult solve_envelope(const EnvelopeProblem& prob,
                              const SolveOptions& opts) {
  EnvelopeResult out;
  out.prob = prob;
  const CylinderGrid& c = prob.cyl;
  SweepState s;
  s.h.resize(c.size());

  if (opts.cascade && c.ntheta > 48) {
    EnvelopeProblem coarse = make_envelope_problem(
        prob.k, prob.poles, prob.weight, c.ntheta / 2, c.T,
        std::max(8, c.nt / 2));
    SolveOptions copts = opts;
    copts.omega = 0.0;
    EnvelopeResult cr = solve_envelope(coarse, copts);
    for (int i = 0; i < c.nt; ++i)
      for (int j = 0; j < c.ntheta; ++j)
        s.h[c.idx(i, j)] = std::min(prob.ob[c.idx(i, j)],
                                    cr.h_at(c.t_center(i), c.theta(j)));
    s.hb = std::min(prob.ob_bot, cr.h_bot);
    s.ht = std::min(prob.ob_top, cr.h_top);
    out.sweeps = cr.sweeps;
  } else {
    for (int i = 0; i < c.size(); ++i) s.h[i] = std::min(prob.ob[i], 0.0);
    s.hb = std::min(prob.ob_bot, 0.0);
    s.ht = std::min(prob.ob_top, 0.0);
  }

  run_psor(prob, s, opts, out);

  out.h = std::move(s.h);
  out.h_bot = s.hb;
  out.h_top = s.ht;

  out.contact_tol = std::max(1e-8, 10.0 * (out.value_err + out.residual));
  out.contact.resize(c.size());
  out.cell_mass.resize(c.size());
  SweepState view{out.h, out.h_bot, out.h_top};
  double total = prob.poles.total_tau();
  for (int i = 0; i < c.nt; ++i)
    for (int j = 0; j < c.ntheta; ++j) {
      int id = c.idx(i, j);
      double gap = prob.ob[id] - out.h[id];
      out.contact[id] = gap <= out.contact_tol ? 1 : 0;
      out.cell_mass[id] = std::max(0.0, cell_curv(prob, view, i, j));
      total += out.cell_mass[id];
    }
  {
    const int na = c.ntheta;
    double accb = 0, acct = 0;
    for (int j = 0; j < na; ++j) {
      accb += out.h[j];
      acct += out.h[c.idx(c.nt - 1, j)];
    }
    out.mass_bot =
        std::max(0.0, prob.ct * (accb - na * out.h_bot) + prob.cap_mass_bot);
    out.mass_top =
        std::max(0.0, prob.ct * (acct - na * out.h_top) + prob.cap_mass_top);
    total += out.mass_bot + out.mass_top;
  }
  out.measure_total = total;
  return out;
}

std::pair<double, double> contact_t_range(const EnvelopeResult& r) {
  const CylinderGrid& c = r.prob.cyl;
  double nan = std::numeric_limits<double>::quiet_NaN();
  double lo = nan, hi = nan;
  for (int i = 0; i < c.nt; ++i) {
    int hits = 0;
    for (int j = 0; j < c.ntheta; ++j) hits += r.contact[c.idx(i, j)];
    if (2 * hits >= c.ntheta) {
      if (!std::isfinite(lo)) lo = c.t_center(i);
      hi = c.t_center(i);
    }
  }
  return {lo, hi};
}

GridField phi_eq_field(const EnvelopeResult& r, GridPtr grid) {
  return GridField::sample(grid, "phi_eq", [&](const SphereNode& nd) {
    return r.phi_eq(nd.point);
  });
}

StabilityReport envelope_stability_check(int k, const PoleSet& poles,
                                         const WeightSpec& phi,
                                         const WeightSpec& g, int ntheta,
                                         double T) {
  EnvelopeProblem pa = make_envelope_problem(k, poles, phi, ntheta, T);
  EnvelopeProblem pb = pa;
  const CylinderGrid& c = pa.cyl;
  double supg = 0;
  for (int i = 0; i < c.nt; ++i)
    for (int j = 0; j < c.ntheta; ++j) {
      double gv = g.eval(c.point(i, j));
      supg = std::max(supg, std::abs(gv));
      int id = c.idx(i, j);
      if (std::isfinite(pb.ob[id])) pb.ob[id] += gv;
    }
  double g0 = g.eval(ProjectivePoint::from_affine({0.0, 0.0}));
  double gi = g.eval(ProjectivePoint::infinity());
  supg = std::max({supg, std::abs(g0), std::abs(gi)});
  if (std::isfinite(pb.ob_bot)) pb.ob_bot += g0;
  if (std::isfinite(pb.ob_top)) pb.ob_top += gi;

  EnvelopeResult ra = solve_envelope(pa);
  EnvelopeResult rb = solve_envelope(pb);
  StabilityReport rep;
  rep.sup_g = supg;
  for (int i = 0; i < c.size(); ++i)
    rep.sup_diff = std::max(rep.sup_diff, std::abs(ra.h[i] - rb.h[i]));
  rep.sup_diff = std::max(rep.sup_diff, std::abs(ra.h_bot - rb.h_bot));
  rep.sup_diff = std::max(rep.sup_diff, std::abs(ra.h_top - rb.h_top));
  rep.tolerance =
      supg + 10.0 * (ra.value_err + rb.value_err + ra.residual + rb.residual) +
      2e-8;
  rep.within = rep.sup_diff <= rep.tolerance;
  return rep;
}

std::vector<ModulusRow> holder_modulus(
    const std::function<double(const ProjectivePoint&)>& f,
    const PoleSet& poles, double nu, const std::vector<double>& deltas,
    int pairs_per_delta, std::uint64_t seed, double rho) {
  std::vector<ModulusRow> rows;
  auto pole_dist = [&](const ProjectivePoint& x) {
    double d = 1.0;
    for (const Pole& pl : poles.poles())
      d = std::min(d, chordal_sigma(x, pl.point));
    return d;
  };
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    double delta = deltas[di];
    Rng rng(derive_seed(seed, 0x6d6fu, di));
    double sup = 0;
    auto consider = [&](const ProjectivePoint& x, const ProjectivePoint& y) {
      if (chordal_sigma(x, y) > delta) return;
      double d = std::abs(f(x) - f(y));
      if (rho > 0)  // damp pairs near the singular set
        d *= std::pow(std::max(pole_dist(x), pole_dist(y)), rho);
      if (std::isfinite(d)) sup = std::max(sup, d);
    };
    auto step_from = [&](const ProjectivePoint& x) {
      // tangent step of chordal size <= delta in a random direction
      double ang = rng.uniform(0.0, kTwoPi);
      double r = delta * std::sqrt(rng.uniform());
      std::complex<double> dz =
          std::polar(r * (1.0 + std::norm(x.coord)), ang);
      return x.chart == Chart::Affine
                 ? ProjectivePoint::from_affine(x.coord + dz)
                 : ProjectivePoint::from_infinity_chart(x.coord + dz);
    };
    for (int n = 0; n < pairs_per_delta; ++n) {
      ProjectivePoint x =
          point_from_u_theta(rng.uniform(), rng.uniform(0.0, kTwoPi));
      consider(x, step_from(x));
    }
    // ladders: pairs at every scale approaching each pole
    for (const Pole& pl : poles.poles()) {
      for (double s = 1.0; s >= delta; s *= 0.5) {
        for (int n = 0; n < 8; ++n) {
          double ang = rng.uniform(0.0, kTwoPi);
          std::complex<double> off =
              std::polar(s * (1.0 + std::norm(pl.point.coord)), ang);
          ProjectivePoint x =
              pl.point.chart == Chart::Affine
                  ? ProjectivePoint::from_affine(pl.point.coord + off)
                  : ProjectivePoint::from_infinity_chart(pl.point.coord + off);
          consider(x, step_from(x));
        }
      }
    }
    ModulusRow row;
    row.delta = delta;
    row.sup_diff = sup;
    row.ratio = sup / std::pow(delta, nu);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace pbk
