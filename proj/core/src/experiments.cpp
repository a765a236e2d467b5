#include "pbk/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "pbk/errors.hpp"
#include "pbk/quadrature.hpp"
#include "pbk/rng.hpp"

namespace pbk {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

// oracle resolution: hull-chord error ~ (2T/n)^2/16 stays below 1e-9
constexpr double kOracleT = 16.0;
constexpr int kOracleN = (1 << 18) + 1;

std::string fmtg(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double median_of(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

double quantile95(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  std::size_t r = static_cast<std::size_t>(
      std::ceil(0.95 * static_cast<double>(v.size())));
  r = std::min(v.size(), std::max<std::size_t>(1, r));
  return v[r - 1];
}

double log_p(int p) { return std::log(static_cast<double>(std::max(p, 2))); }

std::string trimmed(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("PBK_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return std::min(v, 256);
  }
  unsigned hc = std::thread::hardware_concurrency();
  return hc ? static_cast<int>(std::min(hc, 64u)) : 1;
}

void parallel_for(int n, const std::function<void(int)>& body) {
  int workers = std::min(thread_count(), n);
  if (workers <= 1) {
    for (int i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<int> next{0};
  std::mutex err_mu;
  std::exception_ptr err;
  auto run = [&] {
    for (;;) {
      int i = next.fetch_add(1);
      if (i >= n) return;
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lk(err_mu);
        if (!err) err = std::current_exception();
        return;
      }
    }
  };
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int t = 0; t < workers; ++t) pool.emplace_back(run);
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

void Scenario::validate() const {
  if (name.empty() || name.find_first_of(" \t\n") != std::string::npos)
    throw input_error("scenario name must be nonempty without whitespace");
  if (k < 1) throw input_error("k must be >= 1");
  const auto& pls = poles.poles();
  for (const Pole& pl : pls)
    if (!(pl.tau > 0)) throw input_error("pole rates must be positive");
  for (std::size_t i = 0; i < pls.size(); ++i)
    for (std::size_t j = i + 1; j < pls.size(); ++j)
      if (chordal_sigma(pls[i].point, pls[j].point) < 1e-9)
        throw input_error("poles must be pairwise distinct");
  if (p_list.empty()) throw input_error("p_list must be nonempty");
  for (std::size_t i = 0; i < p_list.size(); ++i) {
    if (p_list[i] < 1) throw input_error("p values must be >= 1");
    if (i && p_list[i] <= p_list[i - 1])
      throw input_error("p_list must be strictly increasing");
  }
  int pmax = p_list.back();
  if (grid_radial > 0 && grid_radial < radial_floor(k, pmax))
    throw input_error("grid_radial is below the floor for the largest p");
  if (grid_angular > 0 && grid_angular < angular_floor(k, pmax))
    throw input_error("grid_angular is below the floor for the largest p");
  if (env_ntheta < 8) throw input_error("env_ntheta must be >= 8");
  if (n_samples < 1) throw input_error("n_samples must be >= 1");
  if (!(tol_solver > 0 && tol_solver < 1))
    throw input_error("tol_solver must lie in (0,1)");
}

std::string Scenario::serialize() const {
  std::ostringstream os;
  os << "scenario " << name << "\n";
  os << "k " << k << "\n";
  for (const Pole& pl : poles.poles())
    os << "pole " << format_point(pl.point) << " " << fmtg(pl.tau) << "\n";
  os << "weight " << weight.serialize() << "\n";
  os << "grid " << grid_radial << " " << grid_angular << "\n";
  os << "envgrid " << env_ntheta << "\n";
  os << "plist";
  for (int p : p_list) os << " " << p;
  os << "\n";
  os << "samples " << n_samples << "\n";
  os << "seed " << seed << "\n";
  os << "tol " << fmtg(tol_solver) << "\n";
  return os.str();
}

Scenario Scenario::parse(const std::string& text) {
  Scenario sc;
  sc.p_list.clear();
  std::vector<Pole> pls;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    std::ostringstream os;
    os << "config line " << lineno << ": " << what;
    throw input_error(os.str());
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    std::string key;
    if (!(ls >> key)) continue;
    if (key == "scenario") {
      if (!(ls >> sc.name)) fail("missing scenario name");
    } else if (key == "k") {
      if (!(ls >> sc.k)) fail("bad k");
    } else if (key == "pole") {
      std::string first;
      if (!(ls >> first)) fail("empty pole");
      Pole pl;
      if (first == "inf") {
        pl.point = ProjectivePoint::infinity();
        if (!(ls >> pl.tau)) fail("bad pole rate");
      } else {
        double re = 0, im = 0;
        try {
          re = std::stod(first);
        } catch (const std::exception&) {
          fail("bad pole coordinate '" + first + "'");
        }
        if (!(ls >> im >> pl.tau)) fail("bad pole line");
        pl.point = ProjectivePoint::from_affine({re, im});
      }
      pls.push_back(pl);
    } else if (key == "weight") {
      std::string rest;
      std::getline(ls, rest);
      sc.weight = WeightSpec::parse(trimmed(rest));
    } else if (key == "grid") {
      if (!(ls >> sc.grid_radial >> sc.grid_angular)) fail("bad grid");
    } else if (key == "envgrid") {
      if (!(ls >> sc.env_ntheta)) fail("bad envgrid");
    } else if (key == "plist") {
      int p;
      while (ls >> p) sc.p_list.push_back(p);
    } else if (key == "samples") {
      if (!(ls >> sc.n_samples)) fail("bad samples");
    } else if (key == "seed") {
      if (!(ls >> sc.seed)) fail("bad seed");
    } else if (key == "tol") {
      if (!(ls >> sc.tol_solver)) fail("bad tol");
    } else {
      fail("unknown config key '" + key + "'");
    }
  }
  sc.poles = PoleSet(std::move(pls));
  return sc;
}

Scenario Scenario::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open config " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return parse(os.str());
}

void Scenario::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw input_error("cannot write config " + path);
  os << serialize();
  if (!os) throw input_error("short write on " + path);
}

double EnvRef::phi_eq(const ProjectivePoint& x) const {
  if (radial) {
    if (x.is_zero() && rad->tau0 > 0) return -kInf;
    if (x.is_infinity() && rad->tau_inf > 0) return -kInf;
    double t = x.is_zero() ? -50.0
                           : (x.is_infinity()
                                  ? 50.0
                                  : std::min(50.0, std::max(-50.0,
                                                            x.log_abs_z())));
    return rad->phi_eq(t);
  }
  return lcp->phi_eq(x);
}

double EnvRef::pair(const TestFunction& chi) const {
  return radial ? pair_equilibrium_radial(*rad, chi)
                : pair_equilibrium(*lcp, chi);
}

double EnvRef::nonforced_u_cdf(double u) const {
  if (u <= 0) return 0.0;
  if (u >= 1) return 1.0;
  if (radial) {
    double denom = rad->k - rad->tau0 - rad->tau_inf;
    double F = (rad->k * (1.0 - rad->cdf(t_of_u(u))) - rad->tau_inf) / denom;
    return std::min(1.0, std::max(0.0, F));
  }
  // cylinder: cumulative regular mass from the u = 0 cap down the rows
  const EnvelopeProblem& pr = lcp->prob;
  const CylinderGrid& c = pr.cyl;
  double denom = pr.k_residual;
  double cum = lcp->mass_top;
  double prev_u = u_of_t(c.T), prev_F = std::min(1.0, cum / denom);
  if (u <= prev_u) return prev_F * (u / prev_u);
  for (int i = c.nt - 1; i >= 0; --i) {
    double row = 0;
    for (int j = 0; j < c.ntheta; ++j) row += lcp->cell_mass[c.idx(i, j)];
    cum += row;
    double ui = u_of_t(c.t_center(i));
    double Fi = std::min(1.0, cum / denom);
    if (u <= ui) {
      double w = (u - prev_u) / (ui - prev_u);
      return prev_F + w * (Fi - prev_F);
    }
    prev_u = ui;
    prev_F = Fi;
  }
  double w = (u - prev_u) / (1.0 - prev_u);
  return prev_F + w * (1.0 - prev_F);
}

std::pair<double, double> EnvRef::free_boundary_r() const {
  if (radial) {
    if (rad->contact_left > rad->contact_right) return {kNan, kNan};
    return {std::exp(rad->contact_left), std::exp(rad->contact_right)};
  }
  auto [tl, th] = contact_t_range(*lcp);
  return {std::exp(tl), std::exp(th)};
}

EnvRef make_env_ref(int k, const PoleSet& poles, const WeightSpec& weight,
                    int ntheta, double tol) {
  if (!is_big(k, poles)) {
    std::ostringstream os;
    os << "total vanishing rate " << poles.total_tau()
       << " exhausts the class (k = " << k << ")";
    throw not_big_error(os.str());
  }
  EnvRef ref;
  if (poles.is_axial() && weight.is_radial()) {
    ref.radial = true;
    double tau0 = 0, tau_inf = 0;
    int iz = poles.pole_at_zero(), ii = poles.pole_at_infinity();
    if (iz >= 0) tau0 = poles.poles()[iz].tau;
    if (ii >= 0) tau_inf = poles.poles()[ii].tau;
    ref.rad = std::make_shared<RadialEnvelope>(
        radial_envelope(k, tau0, tau_inf, weight, kOracleT, kOracleN));
  } else {
    SolveOptions opts;
    opts.tol = tol;
    ref.lcp = std::make_shared<EnvelopeResult>(
        solve_envelope(make_envelope_problem(k, poles, weight, ntheta), opts));
  }
  return ref;
}

RateTable run_rate_study(const Scenario& sc) {
  sc.validate();
  EnvRef env =
      make_env_ref(sc.k, sc.poles, sc.weight, sc.env_ntheta, sc.tol_solver);
  RateTable out;
  out.rate_mode = sc.weight.kind() == WeightSpec::Kind::Zero ||
                  sc.weight.holder().has_value();
  const int np = static_cast<int>(sc.p_list.size());
  out.rows.assign(np, RateRow{});
  parallel_for(np, [&](int ip) {
    int p = sc.p_list[ip];
    GridPtr grid =
        SphereGrid::make(std::max(sc.grid_radial, radial_floor(sc.k, p)),
                         std::max(sc.grid_angular, angular_floor(sc.k, p)));
    SectionSpace space =
        build_orthonormal_basis(sc.k, p, sc.poles, sc.weight, grid);
    BergmanField bf = bergman_field(space);
    GridField phi_p = bergman_potential(space, bf);
    RateRow row;
    row.p = p;
    double sum = 0, comp = 0;
    const auto& nodes = grid->nodes();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      double e = phi_p[i] - env.phi_eq(nodes[i].point);
      if (!std::isfinite(e)) continue;
      double term = nodes[i].weight * std::abs(e) - comp;
      double t = sum + term;
      comp = (t - sum) - term;
      sum = t;
      bool away = true;
      for (const Pole& pl : sc.poles.poles())
        if (chordal_sigma(nodes[i].point, pl.point) < 0.1) away = false;
      if (away) row.sup_error_away = std::max(row.sup_error_away, std::abs(e));
    }
    row.l1_error = sum;
    row.c_hat = sum * p / log_p(p);
    out.rows[ip] = row;
  });
  const int nlo = (np + 1) / 2;
  if (out.rate_mode) {
    std::vector<double> lo;
    for (int i = 0; i < nlo; ++i) lo.push_back(out.rows[i].c_hat);
    out.lower_median = median_of(lo);
    for (int i = nlo; i < np; ++i)
      out.upper_max = std::max(out.upper_max, out.rows[i].c_hat);
    if (np > nlo) {
      out.trend_ratio = out.upper_max / std::max(out.lower_median, 1e-300);
      out.trend_ok = out.upper_max <= 1.5 * out.lower_median;
    } else {
      out.trend_ok = true;  // nothing above the midpoint to test
    }
  } else {
    out.trend_ok =
        np < 2 || out.rows.back().l1_error < out.rows.front().l1_error;
  }
  return out;
}

BignessTable run_bigness_study(int k, const PoleSet& poles,
                               const std::vector<int>& p_list) {
  if (k < 1) throw input_error("k must be >= 1");
  if (p_list.empty()) throw input_error("p_list must be nonempty");
  BignessTable out;
  out.big = is_big(k, poles);
  out.slope_limit = out.big ? k - poles.total_tau() : 0.0;
  for (int p : p_list) {
    if (p < 1) throw input_error("p values must be >= 1");
    BignessRow row;
    row.p = p;
    row.dim = dimension(k, p, poles);
    row.slope = static_cast<double>(row.dim) / p;
    out.rows.push_back(row);
  }
  const BignessRow& last = out.rows.back();
  out.slope_ok = out.big ? last.slope >= 0.95 * out.slope_limit
                         : last.dim <= 2;  // small class: dim stays O(1)
  return out;
}

BoundReport run_bound_diagnostics(const Scenario& sc) {
  sc.validate();
  EnvRef env =
      make_env_ref(sc.k, sc.poles, sc.weight, sc.env_ntheta, sc.tol_solver);
  // modulus of the weight at the sweep scales delta = 2^-1 .. 2^-20
  const int nd = 20;
  std::vector<double> deltas(nd), om(nd, 0.0);
  for (int i = 0; i < nd; ++i) deltas[i] = std::ldexp(1.0, -(i + 1));
  if (auto h = sc.weight.holder()) {
    for (int i = 0; i < nd; ++i) om[i] = h->c * std::pow(deltas[i], h->nu);
  } else if (sc.weight.kind() != WeightSpec::Kind::Zero) {
    std::vector<double> asc(deltas.rbegin(), deltas.rend());
    std::vector<double> m =
        modulus_of_continuity(sc.weight, asc, 4000, derive_seed(sc.seed, 0x6f6d));
    for (int i = 0; i < nd; ++i) om[i] = m[nd - 1 - i];
  }
  BoundReport out;
  const int np = static_cast<int>(sc.p_list.size());
  out.rows.assign(np, BoundRow{});
  parallel_for(np, [&](int ip) {
    int p = sc.p_list[ip];
    GridPtr grid =
        SphereGrid::make(std::max(sc.grid_radial, radial_floor(sc.k, p)),
                         std::max(sc.grid_angular, angular_floor(sc.k, p)));
    SectionSpace space =
        build_orthonormal_basis(sc.k, p, sc.poles, sc.weight, grid);
    BergmanField bf = bergman_field(space);
    GridField phi_p = bergman_potential(space, bf);
    double gap = -kInf, low = -kInf;
    const auto& nodes = grid->nodes();
    for (int i = 0; i < static_cast<int>(nodes.size()); ++i) {
      double pe = env.phi_eq(nodes[i].point);
      if (!std::isfinite(pe)) continue;
      gap = std::max(gap, phi_p[i] - pe);
      double sl = 0;
      for (const Pole& pl : sc.poles.poles())
        sl += std::log(chordal_sigma(nodes[i].point, pl.point));
      if (std::isfinite(sl))
        low = std::max(low, pe + sl / p - phi_p[i]);
    }
    BoundRow row;
    row.p = p;
    row.gap_max = gap;
    int best = 0;
    double bc = -1;
    for (int i = 0; i < nd; ++i) {
      double c = p * (gap - deltas[i] - om[i]) / (1.0 - std::log(deltas[i]));
      c = std::max(0.0, c);
      if (c > bc) {
        bc = c;
        best = i;
      }
    }
    row.c_upper = bc;
    row.delta_star = deltas[best];
    row.c_lower = std::max(0.0, p * low);
    out.rows[ip] = row;
  });
  double cu0 = out.rows.front().c_upper, cu1 = out.rows.back().c_upper;
  double cl0 = out.rows.front().c_lower, cl1 = out.rows.back().c_lower;
  out.upper_ratio = cu1 / std::max(cu0, 1e-12);
  out.lower_ratio = cl1 / std::max(cl0, 1e-12);
  out.upper_ok = cu1 <= 1.5 * cu0 + 1e-9;
  out.lower_ok = cl1 <= 1.5 * cl0 + 1e-9;
  out.delta_interior = true;
  for (const BoundRow& r : out.rows)
    if (r.delta_star >= deltas[0] || r.delta_star <= deltas[nd - 1])
      out.delta_interior = false;
  return out;
}

double SpeedReport::lambda(int p) { return 3.0 * log_p(p); }

SpeedReport run_speed_study(const Scenario& sc) {
  sc.validate();
  EnvRef env =
      make_env_ref(sc.k, sc.poles, sc.weight, sc.env_ntheta, sc.tol_solver);
  const auto& battery = test_battery();
  std::vector<double> eqv(battery.size()), c2n(battery.size());
  for (std::size_t b = 0; b < battery.size(); ++b) {
    eqv[b] = env.pair(battery[b]);
    c2n[b] = std::max({battery[b].c0, battery[b].c2, 1e-12});
  }
  auto F = [&](double u) { return env.nonforced_u_cdf(u); };

  SpeedReport out;
  const int pmax = sc.p_list.back();
  for (int p : sc.p_list) {
    GridPtr grid =
        SphereGrid::make(std::max(sc.grid_radial, radial_floor(sc.k, p)),
                         std::max(sc.grid_angular, angular_floor(sc.k, p)));
    SectionSpace space =
        build_orthonormal_basis(sc.k, p, sc.poles, sc.weight, grid);
    std::vector<SpeedSample> slot(sc.n_samples);
    std::vector<std::vector<double>> upool(p == pmax ? sc.n_samples : 0);
    parallel_for(sc.n_samples, [&](int j) {
      SpeedSample& s = slot[j];
      s.p = p;
      s.seed = derive_seed(sc.seed, static_cast<std::uint64_t>(p),
                           static_cast<std::uint64_t>(j));
      try {
        Rng rng(s.seed);
        auto g = random_section_coeffs(space, rng);
        Divisor d = zero_divisor(space, g);
        double D = 0;
        for (std::size_t b = 0; b < battery.size(); ++b)
          D = std::max(
              D, std::abs(pair_divisor(d.points, p, battery[b]) - eqv[b]) /
                     c2n[b]);
        s.D = D;
        std::vector<double> uu = nonforced_u_values(space, d);
        s.u_ks = u_ks(uu, F);
        if (p == pmax) upool[j] = std::move(uu);
      } catch (const numeric_error&) {
        s.failed = true;
      }
    });
    SpeedPerP agg;
    agg.p = p;
    std::vector<double> ds;
    double ks_sum = 0;
    int good = 0;
    for (const SpeedSample& s : slot) {
      if (s.failed) {
        ++agg.failures;
        continue;
      }
      ds.push_back(s.D);
      ks_sum += s.u_ks;
      ++good;
    }
    if (agg.failures * 100 > sc.n_samples) {
      std::ostringstream os;
      os << agg.failures << " of " << sc.n_samples
         << " samples failed at p = " << p;
      throw numeric_error(os.str());
    }
    agg.median_D = median_of(ds);
    agg.q95_D = quantile95(ds);
    agg.mean_u_ks = good ? ks_sum / good : 0.0;
    out.per_p.push_back(agg);
    out.samples.insert(out.samples.end(), slot.begin(), slot.end());
    if (p == pmax)
      for (auto& uu : upool)
        out.u_pool_top.insert(out.u_pool_top.end(), uu.begin(), uu.end());
  }
  std::sort(out.u_pool_top.begin(), out.u_pool_top.end());

  out.calib_p = sc.p_list.front();
  out.c_hat =
      out.per_p.front().q95_D * out.calib_p / SpeedReport::lambda(out.calib_p);
  for (SpeedSample& s : out.samples)
    if (!s.failed)
      s.exceed = s.D > out.c_hat * SpeedReport::lambda(s.p) / s.p ? 1 : 0;
  for (SpeedPerP& agg : out.per_p) {
    int cnt = 0, good = 0;
    for (const SpeedSample& s : out.samples)
      if (s.p == agg.p && !s.failed) {
        ++good;
        cnt += s.exceed;
      }
    agg.exceed_frac = good ? static_cast<double>(cnt) / good : 0.0;
  }
  const int np = static_cast<int>(out.per_p.size());
  out.median_noninc = true;
  for (int i = np / 2; i + 1 < np; ++i)
    if (out.per_p[i + 1].median_D > out.per_p[i].median_D * (1 + 1e-9))
      out.median_noninc = false;
  if (np >= 2 &&
      out.per_p.back().median_D >
          out.per_p[(np - 1) / 2].median_D * (1 + 1e-9))
    out.median_noninc = false;
  out.exceed_ok = out.per_p.back().exceed_frac <= 0.05 + 1e-12;
  return out;
}

ExpectationCheck expectation_check(const Scenario& sc, int p,
                                   const std::string& chi_name,
                                   int n_samples) {
  sc.validate();
  if (p < 1) throw input_error("p must be >= 1");
  if (n_samples < 2) throw input_error("need at least 2 samples");
  const TestFunction& chi = test_function(chi_name);
  GridPtr grid =
      SphereGrid::make(std::max(sc.grid_radial, radial_floor(sc.k, p)),
                       std::max(sc.grid_angular, angular_floor(sc.k, p)));
  SectionSpace space =
      build_orthonormal_basis(sc.k, p, sc.poles, sc.weight, grid);
  BergmanField bf = bergman_field(space);
  GridField phi_p = bergman_potential(space, bf);
  ExpectationCheck out;
  out.chi = chi_name;
  out.p = p;
  out.n = n_samples;
  out.fs_pair = pair_bergman(space, phi_p, chi);
  std::vector<double> vals(n_samples, kNan);
  parallel_for(n_samples, [&](int j) {
    std::uint64_t sd = derive_seed(sc.seed, 0x65787065ULL + p,
                                   static_cast<std::uint64_t>(j));
    try {
      Rng rng(sd);
      auto g = random_section_coeffs(space, rng);
      Divisor d = zero_divisor(space, g);
      vals[j] = pair_divisor(d.points, p, chi);
    } catch (const numeric_error&) {
    }
  });
  double sum = 0;
  int good = 0, bad = 0;
  for (double v : vals)
    if (std::isfinite(v)) {
      sum += v;
      ++good;
    } else {
      ++bad;
    }
  if (bad * 100 > n_samples || good < 2) {
    std::ostringstream os;
    os << bad << " of " << n_samples << " samples failed at p = " << p;
    throw numeric_error(os.str());
  }
  out.mean_div = sum / good;
  double var = 0;
  for (double v : vals)
    if (std::isfinite(v)) var += (v - out.mean_div) * (v - out.mean_div);
  var /= good - 1;
  out.se = std::sqrt(var / good);
  out.z = std::abs(out.mean_div - out.fs_pair) / std::max(out.se, 1e-300);
  out.ok = out.z <= 3.0;
  return out;
}

namespace {

std::string manifest_text(const Scenario& sc) {
  std::ostringstream os;
  os << "pbk-report 1\n";
  os << "version " << kVersion << "\n";
  os << "config-begin\n" << sc.serialize() << "config-end\n";
  os << "thresholds\n";
  for (int p : sc.p_list) {
    os << "p " << p << " dim " << dimension(sc.k, p, sc.poles);
    os << " t";
    for (int t : sc.poles.thresholds(p)) os << " " << t;
    os << "\n";
  }
  return os.str();
}

std::string rate_csv(const RateTable& t) {
  std::ostringstream os;
  os << "p,l1_error,sup_error_away,c_hat\n";
  for (const RateRow& r : t.rows)
    os << r.p << "," << fmtg(r.l1_error) << "," << fmtg(r.sup_error_away)
       << "," << fmtg(r.c_hat) << "\n";
  return os.str();
}

std::string bigness_csv(const BignessTable& t) {
  std::ostringstream os;
  os << "p,dim,slope,big\n";
  for (const BignessRow& r : t.rows)
    os << r.p << "," << r.dim << "," << fmtg(r.slope) << "," << (t.big ? 1 : 0)
       << "\n";
  return os.str();
}

std::string bounds_csv(const BoundReport& t) {
  std::ostringstream os;
  os << "p,gap_max,c_upper,delta_star,c_lower\n";
  for (const BoundRow& r : t.rows)
    os << r.p << "," << fmtg(r.gap_max) << "," << fmtg(r.c_upper) << ","
       << fmtg(r.delta_star) << "," << fmtg(r.c_lower) << "\n";
  return os.str();
}

std::string speed_csv(const SpeedReport& t) {
  std::ostringstream os;
  os << "p,seed,D,exceed\n";
  for (const SpeedSample& s : t.samples) {
    if (s.failed) continue;
    os << s.p << "," << s.seed << "," << fmtg(s.D) << "," << s.exceed << "\n";
  }
  return os.str();
}

std::string plot_rate(const RateTable& t) {
  std::vector<double> cs;
  for (const RateRow& r : t.rows) cs.push_back(r.c_hat);
  double cref = median_of(cs);
  std::ostringstream os;
  os << "# p l1_error ref_curve (ref constant " << fmtg(cref) << ")\n";
  for (const RateRow& r : t.rows)
    os << r.p << " " << fmtg(r.l1_error) << " "
       << fmtg(cref * log_p(r.p) / r.p) << "\n";
  return os.str();
}

std::string plot_cdf(const SpeedReport& sp, const EnvRef& env) {
  const std::vector<double>& u = sp.u_pool_top;  // sorted
  std::ostringstream os;
  os << "# u F_empirical F_reference (pooled non-forced roots, largest p)\n";
  double n = static_cast<double>(u.size());
  for (int i = 0; i <= 256; ++i) {
    double x = i / 256.0;
    double fe =
        n ? (std::upper_bound(u.begin(), u.end(), x) - u.begin()) / n : 0.0;
    os << fmtg(x) << " " << fmtg(fe) << " " << fmtg(env.nonforced_u_cdf(x))
       << "\n";
  }
  return os.str();
}

std::string plot_envelope(const EnvRef& env, const EnvelopeResult* lcp) {
  std::ostringstream os;
  os << "# t u phi_eq" << (lcp ? " phi_solver" : "") << "\n";
  os << "# engine " << (env.radial ? "radial" : "cylinder") << "\n";
  auto [rlo, rhi] = env.free_boundary_r();
  if (std::isfinite(rlo) && std::isfinite(rhi))
    os << "# free_boundary_r " << fmtg(rlo) << " " << fmtg(rhi) << "\n";
  for (int i = 0; i <= 480; ++i) {
    double t = -6.0 + 12.0 * i / 480.0;
    ProjectivePoint x = point_from_u_theta(u_of_t(t), 0.0);
    os << fmtg(t) << " " << fmtg(u_of_t(t)) << " " << fmtg(env.phi_eq(x));
    if (lcp) os << " " << fmtg(lcp->phi_eq(x));
    os << "\n";
  }
  return os.str();
}

}  // namespace

std::vector<std::string> emit_report(const Scenario& sc, const std::string& dir,
                                     const ReportInputs& in, bool force) {
  sc.validate();
  namespace fs = std::filesystem;
  fs::path root(dir);
  std::error_code ec;
  fs::create_directories(root, ec);
  if (ec) throw input_error("cannot create output directory " + dir);

  std::vector<std::pair<std::string, std::string>> files;
  files.emplace_back("manifest.txt", manifest_text(sc));
  if (in.rate) {
    files.emplace_back("rate.csv", rate_csv(*in.rate));
    files.emplace_back("plot_rate.dat", plot_rate(*in.rate));
  }
  if (in.bigness) files.emplace_back("bigness.csv", bigness_csv(*in.bigness));
  if (in.bounds) files.emplace_back("bounds.csv", bounds_csv(*in.bounds));
  if (in.speed) {
    files.emplace_back("speed.csv", speed_csv(*in.speed));
    if (in.env) files.emplace_back("plot_cdf.dat", plot_cdf(*in.speed, *in.env));
  }
  if (in.env)
    files.emplace_back("plot_envelope.dat",
                       plot_envelope(*in.env, in.lcp_profile));

  for (const auto& [name, text] : files) {
    (void)text;
    fs::path target = root / name;
    if (fs::exists(target) && !force)
      throw input_error("refusing to overwrite " + target.string() +
                        " (pass force)");
  }
  std::vector<std::string> written;
  for (const auto& [name, text] : files) {
    fs::path target = root / name;
    std::ofstream os(target, std::ios::binary);
    if (!os) throw input_error("cannot write " + target.string());
    os << text;
    os.close();
    if (!os) throw input_error("short write on " + target.string());
    written.push_back(target.string());
  }
  return written;
}

}  // namespace pbk
