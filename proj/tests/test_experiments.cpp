#include <cmath>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "pbk/experiments.hpp"

using namespace pbk;
namespace fs = std::filesystem;

namespace {
Scenario half_pole_scenario() {
  Scenario sc;
  sc.name = "halfpole";
  sc.k = 1;
  sc.poles = PoleSet({{ProjectivePoint::from_affine({0.0, 0.0}), 0.5}});
  sc.p_list = {5, 10};
  sc.n_samples = 8;
  sc.env_ntheta = 64;
  sc.seed = 4;
  return sc;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in), {});
}
}  // namespace

TEST_CASE("scenario serialization round trips") {
  Scenario sc;
  sc.name = "roundtrip";
  sc.k = 2;
  sc.poles = PoleSet({{ProjectivePoint::from_affine({0.3, -0.125}), 0.35},
                      {ProjectivePoint::infinity(), 0.4}});
  sc.weight = WeightSpec::preset("holder", {{"nu", "0.5"}, {"c", "0.3"}, {"center", "0 0"}});
  sc.grid_radial = 300;
  sc.grid_angular = 300;
  sc.env_ntheta = 96;
  sc.p_list = {10, 20, 40};
  sc.n_samples = 33;
  sc.seed = 123456789012345ULL;
  sc.tol_solver = 2.5e-9;
  sc.validate();

  auto text = sc.serialize();
  auto back = Scenario::parse(text);
  CHECK(back.serialize() == text);
  CHECK(back.k == 2);
  CHECK(back.poles.size() == 2);
  CHECK(back.p_list == sc.p_list);
  CHECK(back.seed == sc.seed);

  fs::path p = "scenario_roundtrip.cfg";
  sc.save(p.string());
  auto loaded = Scenario::load(p.string());
  CHECK(loaded.serialize() == text);
  fs::remove(p);
}

TEST_CASE("scenario validation rejects bad input") {
  auto sc = half_pole_scenario();
  sc.p_list = {10, 10};
  CHECK_THROWS_AS(sc.validate(), input_error);
  sc = half_pole_scenario();
  sc.name = "two words";
  CHECK_THROWS_AS(sc.validate(), input_error);
  sc = half_pole_scenario();
  sc.grid_radial = 4;  // below the floor at p = 10
  CHECK_THROWS_AS(sc.validate(), input_error);
  sc = half_pole_scenario();
  sc.n_samples = 0;
  CHECK_THROWS_AS(sc.validate(), input_error);

  CHECK_THROWS_AS(Scenario::parse("nonsense_key 3\n"), input_error);
  CHECK_THROWS_AS(Scenario::load("definitely_missing.cfg"), input_error);
}

TEST_CASE("bigness study slopes") {
  PoleSet half({{ProjectivePoint::from_affine({0.0, 0.0}), 0.5}});
  auto big = run_bigness_study(1, half, {25, 50, 100, 200, 400});
  CHECK(big.big);
  CHECK(big.slope_limit == doctest::Approx(0.5));
  CHECK(big.slope_ok);
  CHECK(big.rows.back().dim == dimension(1, 400, half));
  CHECK(big.rows.back().slope == doctest::Approx(big.rows.back().dim / 400.0));

  PoleSet fat({{ProjectivePoint::from_affine({0.0, 0.0}), 0.6},
               {ProjectivePoint::from_affine({1.0, 0.0}), 0.6}});
  auto small = run_bigness_study(1, fat, {25, 50, 100, 200, 400});
  CHECK_FALSE(small.big);
  CHECK(small.slope_limit == doctest::Approx(0.0));
  CHECK(small.slope_ok);  // dimension stays 0
  CHECK(small.rows.back().dim == 0);
}

TEST_CASE("env ref picks the radial oracle for axial data") {
  PoleSet half({{ProjectivePoint::from_affine({0.0, 0.0}), 0.5}});
  auto ref = make_env_ref(1, half, WeightSpec{}, 64, 1e-10);
  CHECK(ref.radial);
  REQUIRE(ref.rad != nullptr);
  // non-forced u law F(u) = min(2u, 1)
  CHECK(ref.nonforced_u_cdf(0.25) == doctest::Approx(0.5).epsilon(2e-3));
  CHECK(ref.nonforced_u_cdf(0.75) == doctest::Approx(1.0).epsilon(1e-6));
  auto [rlo, rhi] = ref.free_boundary_r();
  CHECK(rlo == doctest::Approx(1.0).epsilon(2e-3));
  CHECK(rhi > 100.0);  // contact reaches the outer cutoff
  CHECK(ref.pair(test_function("x3")) == doctest::Approx(-0.25).epsilon(1e-4));

  PoleSet off({{ProjectivePoint::from_affine({0.5, 0.0}), 0.3}});
  auto ref2 = make_env_ref(1, off, WeightSpec{}, 64, 1e-8);
  CHECK_FALSE(ref2.radial);
  REQUIRE(ref2.lcp != nullptr);

  PoleSet fat({{ProjectivePoint::from_affine({0.0, 0.0}), 1.5}});
  CHECK_THROWS_AS(make_env_ref(1, fat, WeightSpec{}, 64, 1e-8), not_big_error);
}

TEST_CASE("symmetric rate study reproduces the closed form") {
  Scenario sc;
  sc.name = "sym";
  sc.p_list = {5, 10};
  sc.env_ntheta = 64;
  auto t = run_rate_study(sc);
  REQUIRE(t.rows.size() == 2);
  for (const auto& r : t.rows) {
    double exact = std::log(r.p + 1.0) / (2.0 * r.p);
    CHECK(std::abs(r.l1_error - exact) < 1e-8);
  }
  CHECK(t.rows[1].l1_error < t.rows[0].l1_error);
  CHECK(t.trend_ok);
}

TEST_CASE("speed study is deterministic") {
  auto sc = half_pole_scenario();
  auto a = run_speed_study(sc);
  auto b = run_speed_study(sc);
  REQUIRE(a.samples.size() == b.samples.size());
  REQUIRE(a.samples.size() == 16);
  for (std::size_t i = 0; i < a.samples.size(); ++i) {
    CHECK(a.samples[i].D == b.samples[i].D);
    CHECK(a.samples[i].u_ks == b.samples[i].u_ks);
  }
  CHECK(a.c_hat == b.c_hat);
  CHECK(a.calib_p == 5);
  for (const auto& s : a.samples) {
    CHECK_FALSE(s.failed);
    CHECK(s.D >= 0.0);
    CHECK(s.u_ks >= 0.0);
    CHECK(s.u_ks <= 1.0);
  }
  CHECK(a.u_pool_top.size() == 8 * 5);  // (p - threshold) per sample at p = 10
}

TEST_CASE("expectation identity at small p") {
  auto sc = half_pole_scenario();
  auto e = expectation_check(sc, 10, "x3", 300);
  CHECK(e.n == 300);
  CHECK(e.se > 0.0);
  CHECK(e.ok);
}

TEST_CASE("report emission is deterministic and guards overwrite") {
  auto sc = half_pole_scenario();
  auto rate = run_rate_study(sc);
  auto bigness = run_bigness_study(sc.k, sc.poles, sc.p_list);
  auto ref = make_env_ref(sc.k, sc.poles, sc.weight, sc.env_ntheta, sc.tol_solver);
  ReportInputs in;
  in.rate = &rate;
  in.bigness = &bigness;
  in.env = &ref;

  fs::path da = "report_a", db = "report_b";
  fs::remove_all(da);
  fs::remove_all(db);
  auto pa = emit_report(sc, da.string(), in, false);
  auto pb = emit_report(sc, db.string(), in, false);
  REQUIRE(pa.size() == pb.size());
  REQUIRE(pa.size() >= 4);  // manifest, rate csv, rate plot, bigness, envelope
  for (std::size_t i = 0; i < pa.size(); ++i) {
    CAPTURE(pa[i]);
    CHECK(slurp(pa[i]) == slurp(pb[i]));
  }
  // manifest carries the config; a fresh parse agrees
  auto manifest = slurp(da / "manifest.txt");
  CHECK(manifest.find("pbk-report 1") == 0);
  auto cb = manifest.find("config-begin\n");
  auto ce = manifest.find("config-end");
  REQUIRE(cb != std::string::npos);
  auto cfg = manifest.substr(cb + 13, ce - cb - 13);
  CHECK(Scenario::parse(cfg).serialize() == sc.serialize());

  CHECK_THROWS_AS(emit_report(sc, da.string(), in, false), input_error);
  auto pc = emit_report(sc, da.string(), in, true);  // force overwrites
  CHECK(pc.size() == pa.size());
  fs::remove_all(da);
  fs::remove_all(db);
}

TEST_CASE("thread count respects the environment") {
  CHECK(thread_count() >= 1);
  int n = 0;
  std::vector<int> hits(64, 0);
  parallel_for(64, [&](int i) { hits[static_cast<std::size_t>(i)] = i + 1; });
  for (int i = 0; i < 64; ++i) n += hits[static_cast<std::size_t>(i)] == i + 1;
  CHECK(n == 64);
  CHECK_THROWS_AS(parallel_for(4, [](int) { throw input_error("boom"); }),
                  input_error);
}
