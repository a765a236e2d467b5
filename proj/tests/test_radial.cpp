#include <cmath>

#include "doctest.h"
#include "pbk/radial.hpp"

using namespace pbk;

namespace {
constexpr double kT = 16.0;
constexpr int kN = (1 << 18) + 1;
}  // namespace

TEST_CASE("psi0 helpers") {
  CHECK(psi0(0.0) == doctest::Approx(0.5 * std::log(2.0)).epsilon(1e-15));
  CHECK(psi0(-40.0) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(psi0(40.0) == doctest::Approx(40.0).epsilon(1e-15));
  CHECK(psi0_prime(0.0) == doctest::Approx(0.5));
  CHECK(u_of_t(0.0) == doctest::Approx(0.5));
  CHECK(t_of_u(u_of_t(1.3)) == doctest::Approx(1.3).epsilon(1e-12));
  // u -> 1 at the origin end (t -> -inf)
  CHECK(u_of_t(-30.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("tau = 1/2 pole at the origin: closed form") {
  // phi_eq = (1/2) log(2|z|/(1+|z|^2)) inside |z| <= 1, zero outside
  auto r = radial_envelope(1, 0.5, 0.0, WeightSpec{}, kT, kN);
  double worst = 0;
  for (int i = 0; i <= 3000; ++i) {
    double t = -8.0 + 16.0 * i / 3000.0;
    double exact = t <= 0.0 ? 0.5 * (std::log(2.0) + t) - psi0(t) : 0.0;
    worst = std::max(worst, std::abs(r.phi_eq(t) - exact));
  }
  CHECK(worst < 5e-9);
  CHECK(r.nu0 == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(r.nu_inf == doctest::Approx(0.0).epsilon(1e-9));
  // contact starts at the free boundary t* = (1/2) log(tau/(1-tau)) = 0
  CHECK(std::abs(r.contact_left) < 1e-3);

  // non-forced radial distribution in u: F(u) = min(2u, 1) after removing
  // the forced atom and renormalizing by the residual mass 1 - tau
  double worst_u = 0;
  for (int i = 1; i < 200; ++i) {
    double u = i / 200.0;
    double F = (1.0 - r.cdf(t_of_u(u))) / 0.5;
    worst_u = std::max(worst_u, std::abs(F - std::min(2.0 * u, 1.0)));
  }
  CHECK(worst_u < 2e-4);

  // total equilibrium mass = k
  double mass = r.nu0 + r.nu_inf;
  for (double m : r.node_mass) mass += m;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("free boundary radius sqrt(tau/(1-tau))") {
  for (double tau : {0.25, 0.5, 0.75}) {
    auto r = radial_envelope(1, tau, 0.0, WeightSpec{}, kT, kN);
    double tstar = 0.5 * std::log(tau / (1.0 - tau));
    CHECK(std::abs(r.contact_left - tstar) < 1e-3);
    CHECK(r.nu0 == doctest::Approx(tau).epsilon(1e-9));
  }
}

TEST_CASE("symmetric envelope is trivial") {
  auto r = radial_envelope(1, 0.0, 0.0, WeightSpec{}, kT, kN);
  double worst = 0;
  for (int i = 0; i <= 500; ++i)
    worst = std::max(worst, std::abs(r.phi_eq(-6.0 + 12.0 * i / 500.0)));
  CHECK(worst < 1e-8);
  CHECK(std::abs(r.nu0) < 1e-9);
  CHECK(std::abs(r.nu_inf) < 1e-9);
}

TEST_CASE("two axial poles tau = 0.4: contact annulus") {
  auto r = radial_envelope(1, 0.4, 0.4, WeightSpec{}, kT, kN);
  // band where the residual FS mass (1 - 2 tau) lives: u in [0.4, 0.6],
  // i.e. |t| <= (1/2) log(3/2)
  double tc = 0.5 * std::log(1.5);
  CHECK(std::abs(r.contact_left + tc) < 5e-4);
  CHECK(std::abs(r.contact_right - tc) < 5e-4);
  CHECK(r.nu0 == doctest::Approx(0.4).epsilon(1e-8));
  CHECK(r.nu_inf == doctest::Approx(0.4).epsilon(1e-8));
  double mass = r.nu0 + r.nu_inf;
  for (double m : r.node_mass) mass += m;
  CHECK(mass == doctest::Approx(1.0).epsilon(1e-5));
  // cdf has the two plateaus
  CHECK(r.cdf(-1.0) == doctest::Approx(0.4).epsilon(1e-6));
  CHECK(r.cdf(1.0) == doctest::Approx(0.6).epsilon(1e-6));
}

TEST_CASE("cdf is monotone with correct limits") {
  auto r = radial_envelope(2, 0.5, 0.3, WeightSpec{}, kT, kN);
  double prev = -1;
  for (int i = 0; i <= 300; ++i) {
    double c = r.cdf(-10.0 + 20.0 * i / 300.0);
    CHECK(c >= prev - 1e-9);  // slack covers FD jitter across hull vertices
    prev = c;
  }
  CHECK(r.cdf(-14.0) == doctest::Approx(0.5 / 2.0).epsilon(1e-6));
  CHECK(r.cdf(14.0) == doctest::Approx((2.0 - 0.3) / 2.0).epsilon(1e-6));
}

TEST_CASE("phi_eq_u domain and guards") {
  auto r = radial_envelope(1, 0.5, 0.0, WeightSpec{}, kT, kN);
  CHECK(r.phi_eq_u(0.5) == doctest::Approx(r.phi_eq(0.0)).epsilon(1e-12));
  CHECK_THROWS_AS(r.phi_eq_u(0.0), input_error);
  CHECK_THROWS_AS(r.phi_eq_u(1.5), input_error);

  CHECK_THROWS_AS(radial_envelope(1, 0.6, 0.5, WeightSpec{}, kT, kN), not_big_error);
  CHECK_THROWS_AS(radial_envelope(1, 0.5, 0.0, WeightSpec{}, -1.0, kN), input_error);
  CHECK_THROWS_AS(radial_envelope(1, 0.5, 0.0, WeightSpec{}, kT, 4), input_error);
  auto w = WeightSpec::preset("bump", {{"c", "0.2"}, {"s", "0.4"}, {"center", "0.5 0.1"}});
  CHECK_THROWS_AS(radial_envelope(1, 0.2, 0.0, w, kT, 4097), input_error);  // not radial
}

TEST_CASE("radial weight shifts the envelope") {
  // adding a constant to phi shifts phi_eq by the same constant
  auto r0 = radial_envelope(1, 0.3, 0.0, WeightSpec{}, kT, 65537);
  auto rc = radial_envelope(1, 0.3, 0.0,
                            WeightSpec::radial_table(-1.0, 1.0, {0.7, 0.7, 0.7}), kT, 65537);
  for (double t : {-3.0, -0.5, 0.0, 1.0, 4.0})
    CHECK(rc.phi_eq(t) - r0.phi_eq(t) == doctest::Approx(0.7).epsilon(1e-9));
}
