// Battery of C^2 test functions on the sphere with closed-form dd^c
// densities against omega_FS, and the pairings used throughout: against the
// equilibrium measure (solver and radial forms), against the normalized
// expected-zero current of a section space, and against concrete divisors.
#pragma once
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "pbk/envelope.hpp"
#include "pbk/radial.hpp"
#include "pbk/sections.hpp"

namespace pbk {

struct TestFunction {
  std::string name;
  std::function<double(const ProjectivePoint&)> eval;
  // dd^c chi = density * omega_FS, density continuous
  std::function<double(const ProjectivePoint&)> density;
  double c0 = 0;  // sup |chi|
  double c2 = 0;  // sup |density|
};

// one, x1, x2, x3, x3sq, cos2 (ambient coordinates, their squares, and a
// non-zonal harmonic); densities are exact.
const std::vector<TestFunction>& test_battery();
const TestFunction& test_function(const std::string& name);

// <T_eq, chi>: pole atoms + cylinder cell masses + cap masses.
double pair_equilibrium(const EnvelopeResult& r, const TestFunction& chi);

// Radial-oracle version: axis atoms + hull node masses paired with the
// angular average of chi.
double pair_equilibrium_radial(const RadialEnvelope& r,
                               const TestFunction& chi);

// <(1/p) gamma_p, chi> = k * int chi d omega + int phi_p * density d omega;
// equals the expectation of <(1/p)[s=0], chi> over Gaussian sections.
double pair_bergman(const SectionSpace& s, const GridField& phi_p,
                    const TestFunction& chi);

// (1/p) sum mult * chi(point) over a divisor.
double pair_divisor(const std::vector<std::pair<ProjectivePoint, int>>& div,
                    int p, const TestFunction& chi);

}  // namespace pbk
