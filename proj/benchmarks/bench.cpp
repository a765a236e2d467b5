// Microbenchmarks for the hot paths: grid construction, orthonormal basis
// builds, envelope solves, and high-degree root finding.
#include <benchmark/benchmark.h>

#include "pbk/envelope.hpp"
#include "pbk/radial.hpp"
#include "pbk/roots.hpp"
#include "pbk/sections.hpp"
#include "pbk/zeros.hpp"

using namespace pbk;

static void BM_SphereGrid(benchmark::State& state) {
  int nr = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto g = SphereGrid::make(nr, 2 * nr);
    benchmark::DoNotOptimize(g->nodes().data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_SphereGrid)->Arg(64)->Arg(256)->Arg(1024)->Complexity();

static void BM_BasisBuild(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  PoleSet poles({{ProjectivePoint::from_affine({0.0, 0.0}), 0.5}});
  auto grid = SphereGrid::make(radial_floor(1, p), angular_floor(1, p));
  for (auto _ : state) {
    auto s = build_orthonormal_basis(1, p, poles, WeightSpec{}, grid);
    benchmark::DoNotOptimize(s.onb.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_BasisBuild)->Arg(25)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_BergmanField(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  PoleSet poles({{ProjectivePoint::from_affine({0.0, 0.0}), 0.5}});
  auto grid = SphereGrid::make(radial_floor(1, p), angular_floor(1, p));
  auto s = build_orthonormal_basis(1, p, poles, WeightSpec{}, grid);
  for (auto _ : state) {
    auto bf = bergman_field(s);
    benchmark::DoNotOptimize(bf.P.values().data());
  }
}
BENCHMARK(BM_BergmanField)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

static void BM_RadialEnvelope(benchmark::State& state) {
  int n = static_cast<int>(state.range(0));
  for (auto _ : state) {
    auto r = radial_envelope(1, 0.4, 0.3, WeightSpec{}, 16.0, n);
    benchmark::DoNotOptimize(r.ghat.data());
  }
}
BENCHMARK(BM_RadialEnvelope)->Arg(4097)->Arg(65537)->Arg((1 << 18) + 1)->Unit(benchmark::kMillisecond);

static void BM_EnvelopeSolve(benchmark::State& state) {
  int ntheta = static_cast<int>(state.range(0));
  PoleSet poles({{ProjectivePoint::from_affine({0.0, 0.0}), 0.5}});
  for (auto _ : state) {
    auto prob = make_envelope_problem(1, poles, WeightSpec{}, ntheta, 12.0, ntheta / 2);
    SolveOptions opt;
    opt.tol = 1e-8;
    auto res = solve_envelope(prob, opt);
    benchmark::DoNotOptimize(res.h.data());
  }
}
BENCHMARK(BM_EnvelopeSolve)->Arg(64)->Arg(128)->Arg(256)->Unit(benchmark::kMillisecond);

static void BM_PolynomialRoots(benchmark::State& state) {
  int deg = static_cast<int>(state.range(0));
  Rng rng(11);
  std::vector<std::complex<double>> a(static_cast<std::size_t>(deg + 1));
  for (auto& c : a) c = rng.cgaussian();
  for (auto _ : state) {
    auto r = polynomial_roots(a);
    benchmark::DoNotOptimize(r.roots.data());
  }
  state.SetComplexityN(state.range(0));
}
BENCHMARK(BM_PolynomialRoots)->Arg(50)->Arg(100)->Arg(200)->Unit(benchmark::kMillisecond)->Complexity();

static void BM_ZeroDivisor(benchmark::State& state) {
  int p = static_cast<int>(state.range(0));
  PoleSet poles({{ProjectivePoint::from_affine({0.0, 0.0}), 0.5}});
  auto grid = SphereGrid::make(radial_floor(1, p), angular_floor(1, p));
  auto s = build_orthonormal_basis(1, p, poles, WeightSpec{}, grid);
  Rng rng(23);
  for (auto _ : state) {
    auto d = zero_divisor(s, random_section_coeffs(s, rng));
    benchmark::DoNotOptimize(d.points.data());
  }
}
BENCHMARK(BM_ZeroDivisor)->Arg(50)->Arg(100)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
