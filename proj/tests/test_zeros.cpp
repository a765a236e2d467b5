#include <cmath>
#include <complex>
#include <cstdio>

#include "doctest.h"
#include "pbk/zeros.hpp"

using namespace pbk;

namespace {
SectionSpace half_pole_space(int p) {
  PoleSet poles({{ProjectivePoint::from_affine({0.0, 0.0}), 0.5}});
  return build_orthonormal_basis(
      1, p, poles, WeightSpec{},
      SphereGrid::make(radial_floor(1, p), angular_floor(1, p)));
}
}  // namespace

TEST_CASE("random coefficients are deterministic and normalized") {
  auto s = half_pole_space(8);
  Rng r1(99), r2(99);
  auto a = random_section_coeffs(s, r1);
  auto b = random_section_coeffs(s, r2);
  REQUIRE(a.size() == static_cast<std::size_t>(s.dim));
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);

  // coefficients live on the unit sphere: sum |c_i|^2 == 1 for every draw
  Rng r3(5);
  for (int i = 0; i < 50; ++i) {
    auto c = random_section_coeffs(s, r3);
    double n2 = 0;
    for (auto v : c) n2 += std::norm(v);
    CHECK(n2 == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_CASE("zero divisor counts k p points with multiplicity") {
  auto s = half_pole_space(9);  // threshold 5 forced at the origin
  Rng rng(12);
  for (int rep = 0; rep < 5; ++rep) {
    auto g = random_section_coeffs(s, rng);
    auto d = zero_divisor(s, g);
    CHECK(d.total == 9);
    int sum = 0, at0 = 0;
    for (const auto& [pt, m] : d.points) {
      sum += m;
      if (pt.is_zero()) at0 += m;
    }
    CHECK(sum == 9);
    CHECK(at0 >= 5);
  }
}

TEST_CASE("first symmetric basis section vanishes only at infinity") {
  auto grid = SphereGrid::make(radial_floor(1, 6), angular_floor(1, 6));
  auto s = build_orthonormal_basis(1, 6, PoleSet{}, WeightSpec{}, grid);
  std::vector<std::complex<double>> g(static_cast<std::size_t>(s.dim), 0.0);
  g[0] = 1.0;  // constant section: QR of the graded basis is triangular
  auto d = zero_divisor(s, g);
  REQUIRE(d.points.size() == 1);
  CHECK(d.points[0].first.is_infinity());
  CHECK(d.points[0].second == 6);
}

TEST_CASE("divisor scale invariance") {
  auto s = half_pole_space(11);
  Rng rng(77);
  auto g = random_section_coeffs(s, rng);
  auto d1 = zero_divisor(s, g);
  for (auto& c : g) c *= std::complex<double>(0.0, 3.7e8);
  auto d2 = zero_divisor(s, g);
  REQUIRE(d1.points.size() == d2.points.size());
  for (std::size_t i = 0; i < d1.points.size(); ++i) {
    CHECK(chordal_sigma(d1.points[i].first, d2.points[i].first) < 1e-9);
    CHECK(d1.points[i].second == d2.points[i].second);
  }
}

TEST_CASE("divisor save/load round trip") {
  auto s = half_pole_space(7);
  Rng rng(31);
  auto d = zero_divisor(s, random_section_coeffs(s, rng));
  std::string path = "divisor_roundtrip.txt";
  save_divisor(d, 1, 7, 31, path);
  int k = 0, p = 0;
  std::uint64_t seed = 0;
  auto r = load_divisor(path, &k, &p, &seed);
  CHECK(k == 1);
  CHECK(p == 7);
  CHECK(seed == 31);
  CHECK(r.total == d.total);
  REQUIRE(r.points.size() == d.points.size());
  for (std::size_t i = 0; i < d.points.size(); ++i) {
    CHECK(chordal_sigma(r.points[i].first, d.points[i].first) < 1e-13);
    CHECK(r.points[i].second == d.points[i].second);
  }
  std::remove(path.c_str());
}

TEST_CASE("radial and u statistics") {
  // hand case: atoms at t = -1, +1 against a uniform cdf on [-2, 2]
  Divisor d;
  d.points = {{ProjectivePoint::from_affine({std::exp(-1.0), 0.0}), 1},
              {ProjectivePoint::from_affine({std::exp(1.0), 0.0}), 1}};
  d.total = 2;
  auto cdf = [](double t) { return std::min(1.0, std::max(0.0, (t + 2.0) / 4.0)); };
  CHECK(radial_ks(d, cdf) == doctest::Approx(0.25).epsilon(1e-12));

  CHECK(u_ks({0.25, 0.75}, [](double u) { return u; }) ==
        doctest::Approx(0.25).epsilon(1e-12));
  CHECK(u_ks({}, [](double u) { return u; }) == 0.0);
  // ties grouped: three copies of one value
  CHECK(u_ks({0.5, 0.5, 0.5}, [](double u) { return u; }) ==
        doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("forced zeros drop out of the non-forced u sample") {
  auto s = half_pole_space(9);  // threshold 5, dim 5, free degree m = 4
  Rng rng(8);
  auto g = random_section_coeffs(s, rng);
  auto d = zero_divisor(s, g);
  auto u = nonforced_u_values(s, d);
  // free roots + deficiency-at-infinity entries = p - threshold = 4
  CHECK(u.size() == 4);
  for (double v : u) {
    CHECK(v >= 0.0);
    CHECK(v < 1.0 - 1e-12);  // none left at the origin atom
  }
}
