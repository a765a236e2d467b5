#include "pbk/pairing.hpp"

#include <cmath>

#include "pbk/errors.hpp"

namespace pbk {
namespace {

// For zonal chi = f(u):  density = d/du [ 2u(1-u) f'(u) ].
// For chi = g(u) cos 2theta:  density = ((a g')' - 4 g / a) ... computed
// explicitly below for g = u(1-u), giving -12 u(1-u) cos 2theta.

std::vector<TestFunction> make_battery() {
  std::vector<TestFunction> b;

  b.push_back({"one", [](const ProjectivePoint&) { return 1.0; },
               [](const ProjectivePoint&) { return 0.0; }, 1.0, 0.0});

  auto x1 = [](const ProjectivePoint& x) {
    // Re(1/w)/(1+|1/w|^2) reduces to the same expression in w
    return 2.0 * x.coord.real() / (1.0 + std::norm(x.coord));
  };
  auto x2 = [](const ProjectivePoint& x) {
    double s = x.chart == Chart::Affine ? 1.0 : -1.0;
    return s * 2.0 * x.coord.imag() / (1.0 + std::norm(x.coord));
  };
  auto x3 = [](const ProjectivePoint& x) { return 1.0 - 2.0 * x.u(); };

  b.push_back({"x1", x1,
               [x1](const ProjectivePoint& x) { return -4.0 * x1(x); }, 1.0,
               4.0});
  b.push_back({"x2", x2,
               [x2](const ProjectivePoint& x) { return -4.0 * x2(x); }, 1.0,
               4.0});
  b.push_back({"x3", x3,
               [x3](const ProjectivePoint& x) { return -4.0 * x3(x); }, 1.0,
               4.0});

  // chi = x3^2 = (1-2u)^2:  density = -8 (1 - 6u + 6u^2)
  b.push_back({"x3sq",
               [](const ProjectivePoint& x) {
                 double v = 1.0 - 2.0 * x.u();
                 return v * v;
               },
               [](const ProjectivePoint& x) {
                 double u = x.u();
                 return -8.0 * (1.0 - 6.0 * u + 6.0 * u * u);
               },
               1.0, 8.0});

  // chi = u(1-u) cos 2theta:  density = -12 u(1-u) cos 2theta
  b.push_back({"cos2",
               [](const ProjectivePoint& x) {
                 double u = x.u();
                 return u * (1.0 - u) * std::cos(2.0 * x.theta());
               },
               [](const ProjectivePoint& x) {
                 double u = x.u();
                 return -12.0 * u * (1.0 - u) * std::cos(2.0 * x.theta());
               },
               0.25, 3.0});
  return b;
}

}  // namespace

const std::vector<TestFunction>& test_battery() {
  static const std::vector<TestFunction> b = make_battery();
  return b;
}

const TestFunction& test_function(const std::string& name) {
  for (const TestFunction& f : test_battery())
    if (f.name == name) return f;
  throw input_error("unknown test function: " + name);
}

double pair_equilibrium(const EnvelopeResult& r, const TestFunction& chi) {
  double acc = 0, comp = 0;
  auto add = [&](double v) {  // Kahan
    double y = v - comp, t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  };
  for (const Pole& pl : r.prob.poles.poles()) add(pl.tau * chi.eval(pl.point));
  const CylinderGrid& c = r.prob.cyl;
  for (int i = 0; i < c.nt; ++i)
    for (int j = 0; j < c.ntheta; ++j) {
      double m = r.cell_mass[c.idx(i, j)];
      if (m != 0.0) add(m * chi.eval(c.point(i, j)));
    }
  add(r.mass_bot * chi.eval(ProjectivePoint::from_affine({0.0, 0.0})));
  add(r.mass_top * chi.eval(ProjectivePoint::infinity()));
  return acc;
}

double pair_equilibrium_radial(const RadialEnvelope& r,
                               const TestFunction& chi) {
  const int n_ang = 64;
  auto avg = [&](double t) {
    double u = u_of_t(t), s = 0;
    for (int a = 0; a < n_ang; ++a)
      s += chi.eval(point_from_u_theta(u, (a + 0.5) * 2.0 * M_PI / n_ang));
    return s / n_ang;
  };
  double acc = r.nu0 * chi.eval(ProjectivePoint::from_affine({0.0, 0.0})) +
               r.nu_inf * chi.eval(ProjectivePoint::infinity());
  for (int i = 1; i + 1 < r.n; ++i)
    if (r.node_mass[i] != 0.0) acc += r.node_mass[i] * avg(r.tgrid[i]);
  return acc;
}

double pair_bergman(const SectionSpace& s, const GridField& phi_p,
                    const TestFunction& chi) {
  const SphereGrid& g = *s.grid;
  if (phi_p.grid().get() != &g)
    throw input_error("phi_p lives on a different grid");
  double acc = 0, comp = 0;
  auto add = [&](double v) {
    double y = v - comp, t = acc + y;
    comp = (t - acc) - y;
    acc = t;
  };
  for (int i = 0; i < g.size(); ++i) {
    const SphereNode& nd = g.nodes()[i];
    add(nd.weight *
        (s.k * chi.eval(nd.point) + phi_p[i] * chi.density(nd.point)));
  }
  return acc;
}

double pair_divisor(const std::vector<std::pair<ProjectivePoint, int>>& div,
                    int p, const TestFunction& chi) {
  double acc = 0;
  for (const auto& [pt, mult] : div) acc += mult * chi.eval(pt);
  return acc / p;
}

}  // namespace pbk
