// pbk: partial Bergman kernels, equilibrium envelopes, and random zeros on
// CP^1.  Every subcommand reads one scenario config (see `pbk help` text),
// runs deterministically from its seed, and writes artifacts only under
// --out.  Exit codes: 0 ok, 2 bad input / not-big validation, 3 numerical
// failure.  PBK_THREADS caps the worker count.
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pbk/errors.hpp"
#include "pbk/experiments.hpp"

using namespace pbk;

namespace {

struct Common {
  std::string config;
  std::uint64_t seed = 0;
  bool seed_set = false;
  std::string grid;
  std::string out;
  bool force = false;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("config", c.config, "scenario config file");
  auto* s = cmd->add_option("--seed", c.seed, "override the scenario seed");
  cmd->callback([&c, s] { c.seed_set = s->count() > 0; });
  cmd->add_option("--grid", c.grid,
                  "override the sphere grid, NRxNA (floors still apply)");
  cmd->add_option("--out", c.out, "artifact directory");
  cmd->add_flag("--force", c.force, "overwrite existing artifacts");
}

Scenario scenario_of(const Common& c) {
  Scenario sc = c.config.empty() ? Scenario{} : Scenario::load(c.config);
  if (c.seed_set) sc.seed = c.seed;
  if (!c.grid.empty()) {
    int nr = 0, na = 0;
    if (std::sscanf(c.grid.c_str(), "%dx%d", &nr, &na) != 2 || nr < 1 ||
        na < 1)
      throw input_error("--grid expects NRxNA, e.g. 128x256");
    sc.grid_radial = nr;
    sc.grid_angular = na;
  }
  if (sc.p_list.empty()) sc.p_list = {25, 50, 100};
  sc.validate();
  return sc;
}

void ensure_writable(const std::string& path, bool force) {
  if (!force && std::filesystem::exists(path))
    throw input_error("refusing to overwrite " + path + " (pass --force)");
}

void print_written(const std::vector<std::string>& files) {
  for (const std::string& f : files) std::printf("wrote %s\n", f.c_str());
}

int cmd_dim(const Common& c) {
  Scenario sc = scenario_of(c);
  BignessTable bt = run_bigness_study(sc.k, sc.poles, sc.p_list);
  for (const BignessRow& r : bt.rows) {
    std::printf("p %d dim %d slope %.6f t", r.p, r.dim, r.slope);
    for (int t : sc.poles.thresholds(r.p)) std::printf(" %d", t);
    std::printf("\n");
  }
  if (!c.out.empty()) {
    ReportInputs in;
    in.bigness = &bt;
    print_written(emit_report(sc, c.out, in, c.force));
  }
  return 0;
}

int cmd_big(const Common& c) {
  Scenario sc = scenario_of(c);
  BignessTable bt = run_bigness_study(sc.k, sc.poles, sc.p_list);
  std::printf("sum tau %.6f vs k %d: %s\n", sc.poles.total_tau(), sc.k,
              bt.big ? "big" : "not big");
  std::printf("slope at p=%d: %.6f (limit %.6f, %s)\n", bt.rows.back().p,
              bt.rows.back().slope, bt.slope_limit,
              bt.slope_ok ? "ok" : "off-trend");
  if (!c.out.empty()) {
    ReportInputs in;
    in.bigness = &bt;
    print_written(emit_report(sc, c.out, in, c.force));
  }
  return 0;
}

int cmd_bergman(const Common& c) {
  Scenario sc = scenario_of(c);
  for (int p : sc.p_list) {
    GridPtr grid =
        SphereGrid::make(std::max(sc.grid_radial, radial_floor(sc.k, p)),
                         std::max(sc.grid_angular, angular_floor(sc.k, p)));
    SectionSpace s =
        build_orthonormal_basis(sc.k, p, sc.poles, sc.weight, grid);
    BergmanField bf = bergman_field(s);
    GridField phi_p = bergman_potential(s, bf);
    std::printf("p %d dim %d trace %.12g trace_gap %.3g min_cond %.3g%s\n", p,
                s.dim, bf.trace, bf.trace_gap, s.min_cond,
                s.extended_precision ? " extended" : "");
    if (!c.out.empty()) {
      std::filesystem::create_directories(c.out);
      std::string base = c.out + "/p" + std::to_string(p);
      for (const char* suff : {"_basis.txt", "_P.txt", "_phi.txt"})
        ensure_writable(base + suff, c.force);
      save_basis(s, base + "_basis.txt");
      bf.P.save(base + "_P.txt");
      phi_p.save(base + "_phi.txt");
      std::printf("wrote %s_{basis,P,phi}.txt\n", base.c_str());
    }
  }
  return 0;
}

int cmd_envelope(const Common& c, bool with_lcp) {
  Scenario sc = scenario_of(c);
  EnvRef env =
      make_env_ref(sc.k, sc.poles, sc.weight, sc.env_ntheta, sc.tol_solver);
  std::printf("engine %s\n", env.radial ? "radial" : "cylinder");
  if (env.radial) {
    std::printf("atoms nu0 %.9f nu_inf %.9f\n", env.rad->nu0,
                env.rad->nu_inf);
  } else {
    std::printf("sweeps %d residual %.3g value_err %.3g mass %.9f\n",
                env.lcp->sweeps, env.lcp->residual, env.lcp->value_err,
                env.lcp->measure_total);
  }
  auto [rlo, rhi] = env.free_boundary_r();
  if (std::isfinite(rlo))
    std::printf("contact radii [%.6f, %.6f]\n", rlo, rhi);
  EnvelopeResult lcp;
  const EnvelopeResult* lcp_ptr = nullptr;
  if (with_lcp && env.radial) {
    SolveOptions opts;
    opts.tol = sc.tol_solver;
    lcp = solve_envelope(
        make_envelope_problem(sc.k, sc.poles, sc.weight, sc.env_ntheta));
    lcp_ptr = &lcp;
    double gap = 0;
    const CylinderGrid& cy = lcp.prob.cyl;
    for (int i = 0; i < cy.nt; ++i)
      for (int j = 0; j < cy.ntheta; ++j)
        gap = std::max(gap,
                       std::abs(lcp.phi_eq_cyl(cy.t_center(i), cy.theta(j)) -
                                env.rad->phi_eq(cy.t_center(i))));
    std::printf("solver vs oracle sup gap %.3e (grid %dx%d)\n", gap, cy.nt,
                cy.ntheta);
  }
  if (!c.out.empty()) {
    ReportInputs in;
    in.env = &env;
    in.lcp_profile = lcp_ptr;
    print_written(emit_report(sc, c.out, in, c.force));
  }
  return 0;
}

int cmd_rate(const Common& c) {
  Scenario sc = scenario_of(c);
  RateTable rt = run_rate_study(sc);
  for (const RateRow& r : rt.rows)
    std::printf("p %d l1 %.6e sup_away %.6e c_hat %.6f\n", r.p, r.l1_error,
                r.sup_error_away, r.c_hat);
  if (rt.rate_mode)
    std::printf("trend: upper max %.6f vs 1.5 x lower median %.6f -> %s\n",
                rt.upper_max, 1.5 * rt.lower_median,
                rt.trend_ok ? "bounded" : "NOT bounded");
  else
    std::printf("convergence-only mode: l1 %s\n",
                rt.trend_ok ? "decreasing" : "NOT decreasing");
  if (!c.out.empty()) {
    ReportInputs in;
    in.rate = &rt;
    print_written(emit_report(sc, c.out, in, c.force));
  }
  return 0;
}

int cmd_zeros(const Common& c) {
  Scenario sc = scenario_of(c);
  EnvRef env =
      make_env_ref(sc.k, sc.poles, sc.weight, sc.env_ntheta, sc.tol_solver);
  int p = sc.p_list.back();
  GridPtr grid =
      SphereGrid::make(std::max(sc.grid_radial, radial_floor(sc.k, p)),
                       std::max(sc.grid_angular, angular_floor(sc.k, p)));
  SectionSpace space =
      build_orthonormal_basis(sc.k, p, sc.poles, sc.weight, grid);
  if (!c.out.empty()) std::filesystem::create_directories(c.out);
  double ks_sum = 0;
  int good = 0, failed = 0;
  for (int j = 0; j < sc.n_samples; ++j) {
    std::uint64_t sd = derive_seed(sc.seed, static_cast<std::uint64_t>(p),
                                   static_cast<std::uint64_t>(j));
    try {
      Rng rng(sd);
      auto g = random_section_coeffs(space, rng);
      Divisor d = zero_divisor(space, g);
      ks_sum += u_ks(nonforced_u_values(space, d),
                     [&](double u) { return env.nonforced_u_cdf(u); });
      ++good;
      if (!c.out.empty()) {
        std::string path =
            c.out + "/divisor_p" + std::to_string(p) + "_s" +
            std::to_string(j) + ".txt";
        ensure_writable(path, c.force);
        save_divisor(d, sc.k, p, sd, path);
      }
    } catch (const numeric_error&) {
      ++failed;
    }
  }
  std::printf("p %d samples %d failed %d mean_u_ks %.4f\n", p, sc.n_samples,
              failed, good ? ks_sum / good : 0.0);
  if (!c.out.empty())
    std::printf("wrote %d divisors under %s\n", good, c.out.c_str());
  return 0;
}

int cmd_speed(const Common& c) {
  Scenario sc = scenario_of(c);
  SpeedReport sp = run_speed_study(sc);
  for (const SpeedPerP& a : sp.per_p)
    std::printf(
        "p %d median_D %.5f q95_D %.5f mean_u_ks %.4f exceed %.3f fail %d\n",
        a.p, a.median_D, a.q95_D, a.mean_u_ks, a.exceed_frac, a.failures);
  std::printf("c_hat %.5f (fit at p=%d), median %s, exceedance at p=%d %s\n",
              sp.c_hat, sp.calib_p,
              sp.median_noninc ? "nonincreasing" : "NOT nonincreasing",
              sp.per_p.back().p, sp.exceed_ok ? "<= 5%" : "> 5%");
  if (!c.out.empty()) {
    EnvRef env =
        make_env_ref(sc.k, sc.poles, sc.weight, sc.env_ntheta, sc.tol_solver);
    ReportInputs in;
    in.speed = &sp;
    in.env = &env;
    print_written(emit_report(sc, c.out, in, c.force));
  }
  return 0;
}

int cmd_report(const Common& c) {
  Scenario sc = scenario_of(c);
  if (c.out.empty()) throw input_error("report needs --out");
  std::printf("threads %d\n", thread_count());
  BignessTable bt = run_bigness_study(sc.k, sc.poles, sc.p_list);
  EnvRef env =
      make_env_ref(sc.k, sc.poles, sc.weight, sc.env_ntheta, sc.tol_solver);
  RateTable rt = run_rate_study(sc);
  BoundReport br = run_bound_diagnostics(sc);
  SpeedReport sp = run_speed_study(sc);
  ReportInputs in;
  in.bigness = &bt;
  in.rate = &rt;
  in.bounds = &br;
  in.speed = &sp;
  in.env = &env;
  print_written(emit_report(sc, c.out, in, c.force));
  std::printf("rate trend %s, bounds upper %s lower %s, exceedance %s\n",
              rt.trend_ok ? "ok" : "off", br.upper_ok ? "ok" : "off",
              br.lower_ok ? "ok" : "off", sp.exceed_ok ? "ok" : "off");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "partial Bergman kernels, equilibrium envelopes, and random zeros "
      "on CP^1 (config keys: scenario/k/pole/weight/grid/envgrid/plist/"
      "samples/seed/tol; PBK_THREADS caps workers)"};
  app.require_subcommand(1);
  Common c[8];
  bool with_lcp = false;
  add_common(app.add_subcommand("dim", "dimension table over the p list"),
             c[0]);
  add_common(app.add_subcommand("big", "bigness predicate and slope"), c[1]);
  add_common(app.add_subcommand(
                 "bergman", "orthonormal bases and Bergman densities per p"),
             c[2]);
  CLI::App* env_cmd = app.add_subcommand(
      "envelope", "equilibrium envelope (oracle or cylinder solver)");
  add_common(env_cmd, c[3]);
  env_cmd->add_flag("--lcp", with_lcp,
                    "also run the cylinder solver and print the oracle gap");
  add_common(app.add_subcommand("rate", "L1 rate study phi_p -> phi_eq"),
             c[4]);
  add_common(app.add_subcommand("zeros", "sample zero divisors at the "
                                         "largest p"),
             c[5]);
  add_common(app.add_subcommand("speed", "equidistribution speed experiment"),
             c[6]);
  add_common(app.add_subcommand("report", "full study + all artifacts"),
             c[7]);

  try {
    app.parse(argc, argv);
    if (app.got_subcommand("dim")) return cmd_dim(c[0]);
    if (app.got_subcommand("big")) return cmd_big(c[1]);
    if (app.got_subcommand("bergman")) return cmd_bergman(c[2]);
    if (app.got_subcommand("envelope")) return cmd_envelope(c[3], with_lcp);
    if (app.got_subcommand("rate")) return cmd_rate(c[4]);
    if (app.got_subcommand("zeros")) return cmd_zeros(c[5]);
    if (app.got_subcommand("speed")) return cmd_speed(c[6]);
    if (app.got_subcommand("report")) return cmd_report(c[7]);
    return 2;
  } catch (const CLI::ParseError& e) {
    int r = app.exit(e);
    return r == 0 ? 0 : 2;
  } catch (const input_error& e) {
    std::fprintf(stderr, "input error: %s\n", e.what());
    return 2;
  } catch (const not_big_error& e) {
    std::fprintf(stderr,
                 "validation: %s; the constrained class needs sum tau_j < k\n",
                 e.what());
    return 2;
  } catch (const numeric_error& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 3;
  }
}
