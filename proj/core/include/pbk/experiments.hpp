// Scenario configuration and the studies driven from it: the L^1 rate of
// phi_p -> phi_eq, the dimension/bigness slopes, the fitted constants of the
// two-sided kernel bounds, and the random-zero speed experiment.  Report
// emission is deterministic: (config, seed) -> byte-identical files.
#pragma once
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "pbk/envelope.hpp"
#include "pbk/pairing.hpp"
#include "pbk/radial.hpp"
#include "pbk/sections.hpp"
#include "pbk/zeros.hpp"

namespace pbk {

inline constexpr const char* kVersion = "0.3.0";

// Worker count: PBK_THREADS when set and positive, else the hardware count.
int thread_count();
// body(i) for i in [0,n), partitioned over threads; results must go into
// per-index slots.  The first exception thrown by any body is rethrown.
void parallel_for(int n, const std::function<void(int)>& body);

struct Scenario {
  std::string name = "run";
  int k = 1;
  PoleSet poles;
  WeightSpec weight;
  int grid_radial = 0, grid_angular = 0;  // 0: per-p resolution floors
  int env_ntheta = 256;                   // cylinder solver resolution
  std::vector<int> p_list;
  int n_samples = 200;
  std::uint64_t seed = 1;
  double tol_solver = 1e-10;

  // input_error on: empty/whitespace name, coincident poles, tau <= 0,
  // non-increasing p_list, explicit grid below the floor for max p.
  void validate() const;
  std::string serialize() const;  // line-oriented config, lossless %.17g
  static Scenario parse(const std::string& text);
  static Scenario load(const std::string& path);
  void save(const std::string& path) const;
};

// Equilibrium reference: the hull oracle when the data is radial (axial
// poles, radial weight), otherwise the cylinder solve.  The oracle grid is
// fine enough that its interpolation error stays below 1e-9.
struct EnvRef {
  bool radial = false;
  std::shared_ptr<RadialEnvelope> rad;
  std::shared_ptr<EnvelopeResult> lcp;

  double phi_eq(const ProjectivePoint& x) const;
  double pair(const TestFunction& chi) const;  // <T_eq, chi>
  // law of the non-forced zeros: P(u_root <= u) under the normalized
  // non-atomic part of T_eq
  double nonforced_u_cdf(double u) const;
  // contact-set radii (free boundary); {nan, nan} when there is no contact
  std::pair<double, double> free_boundary_r() const;
};
EnvRef make_env_ref(int k, const PoleSet& poles, const WeightSpec& weight,
                    int ntheta, double tol);

struct RateRow {
  int p = 0;
  double l1_error = 0;        // int |phi_p - phi_eq| d omega
  double sup_error_away = 0;  // sup over nodes with chordal pole dist >= 0.1
  double c_hat = 0;           // l1_error * p / log p
};
struct RateTable {
  std::vector<RateRow> rows;
  bool rate_mode = false;  // Hölder-declared weight: assert the log p/p shape
  double lower_median = 0, upper_max = 0, trend_ratio = 0;
  // rate mode: upper_max <= 1.5 * lower_median; else: l1 decreasing
  bool trend_ok = false;
};
RateTable run_rate_study(const Scenario& sc);

struct BignessRow {
  int p = 0;
  int dim = 0;
  double slope = 0;  // dim / p
};
struct BignessTable {
  bool big = false;
  double slope_limit = 0;  // max(0, k - sum tau)
  std::vector<BignessRow> rows;
  // big: final slope >= 0.95 * slope_limit; small: final dim stays O(1)
  bool slope_ok = false;
};
BignessTable run_bigness_study(int k, const PoleSet& poles,
                               const std::vector<int>& p_list);

struct BoundRow {
  int p = 0;
  double gap_max = 0;     // max (phi_p - phi_eq) over nodes
  double c_upper = 0;     // smallest C with gap <= (C/p)(1-log d)+d+Omega(d)
  double delta_star = 0;  // delta attaining the fit
  double c_lower = 0;     // smallest C' with phi_p >= phi_eq - C'/p + (1/p) sum log sigma_j
};
struct BoundReport {
  std::vector<BoundRow> rows;
  double upper_ratio = 0, lower_ratio = 0;  // largest p over smallest p
  bool upper_ok = false, lower_ok = false;  // ratio <= 1.5
  bool delta_interior = false;  // every delta_star strictly inside the sweep
};
BoundReport run_bound_diagnostics(const Scenario& sc);

struct SpeedSample {
  int p = 0;
  std::uint64_t seed = 0;
  double D = 0;     // max over battery |<(1/p)[s=0] - T_eq, chi>| / ||chi||_C2
  double u_ks = 0;  // KS of non-forced u-values against the T_eq law
  int exceed = 0;   // D > c_hat * lambda_p / p
  bool failed = false;
};
struct SpeedPerP {
  int p = 0;
  double median_D = 0, q95_D = 0, mean_u_ks = 0, exceed_frac = 0;
  int failures = 0;
};
struct SpeedReport {
  std::vector<SpeedSample> samples;  // (p, sample) lexicographic
  std::vector<SpeedPerP> per_p;
  int calib_p = 0;     // first p of the list
  double c_hat = 0;    // q95(D at calib_p) * calib_p / lambda(calib_p)
  bool median_noninc = false;  // median D nonincreasing past the midpoint
  bool exceed_ok = false;      // exceedance <= 5% at the largest p
  std::vector<double> u_pool_top;  // pooled non-forced u at the largest p

  static double lambda(int p);  // 3 log p
};
SpeedReport run_speed_study(const Scenario& sc);

// Monte-Carlo check of E<(1/p)[s=0], chi> = <(1/p)gamma_p, chi>.
struct ExpectationCheck {
  std::string chi;
  int p = 0, n = 0;
  double mean_div = 0;  // sample average of the divisor pairing
  double se = 0;        // its standard error
  double fs_pair = 0;   // Bergman-side pairing
  double z = 0;         // |mean_div - fs_pair| / se
  bool ok = false;      // z <= 3
};
ExpectationCheck expectation_check(const Scenario& sc, int p,
                                   const std::string& chi_name, int n_samples);

// Report writer.  Emits manifest.txt plus a CSV/plot file per supplied
// study; refuses to touch existing files unless force is set.  Returns the
// paths written.
struct ReportInputs {
  const RateTable* rate = nullptr;
  const BignessTable* bigness = nullptr;
  const BoundReport* bounds = nullptr;
  const SpeedReport* speed = nullptr;
  const EnvRef* env = nullptr;
  const EnvelopeResult* lcp_profile = nullptr;  // optional solver-vs-oracle column
};
std::vector<std::string> emit_report(const Scenario& sc, const std::string& dir,
                                     const ReportInputs& in, bool force);

}  // namespace pbk
