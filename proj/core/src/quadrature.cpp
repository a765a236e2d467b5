#include "pbk/quadrature.hpp"

#include <cmath>

namespace pbk {

// Newton on the Legendre recurrence; standard and ~1e-15 accurate.
void gauss_legendre_01(int n, std::vector<double>& nodes,
                       std::vector<double>& weights) {
  if (n < 1) throw input_error("gauss_legendre_01: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  const double pi = 3.14159265358979323846;
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));  // Tricomi initial guess
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int j = 0; j < n; ++j) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
      }
      pp = n * (x * p0 - p1) / (x * x - 1.0);
      double dx = p0 / pp;
      x -= dx;
      if (std::fabs(dx) < 1e-15) {
        // one clean-up iteration after convergence
        double q0 = 1.0, q1 = 0.0;
        for (int j = 0; j < n; ++j) {
          double q2 = q1;
          q1 = q0;
          q0 = ((2.0 * j + 1.0) * x * q1 - j * q2) / (j + 1.0);
        }
        pp = n * (x * q0 - q1) / (x * x - 1.0);
        x -= q0 / pp;
        break;
      }
    }
    // map [-1,1] -> [0,1]; total weight 2 -> 1
    double w = 1.0 / ((1.0 - x * x) * pp * pp);
    nodes[i] = 0.5 * (1.0 - x);           // ascending in u
    nodes[n - 1 - i] = 0.5 * (1.0 + x);
    weights[i] = w;
    weights[n - 1 - i] = w;
  }
}

std::shared_ptr<const SphereGrid> SphereGrid::make(int n_radial, int n_angular) {
  if (n_radial < 2 || n_angular < 2)
    throw input_error("SphereGrid: resolution must be at least 2x2");
  auto g = std::shared_ptr<SphereGrid>(new SphereGrid());
  g->n_radial_ = n_radial;
  g->n_angular_ = n_angular;
  gauss_legendre_01(n_radial, g->u_nodes_, g->u_weights_);
  g->nodes_.reserve(static_cast<std::size_t>(n_radial) * n_angular);
  const double dtheta = 2.0 * 3.14159265358979323846 / n_angular;
  for (int i = 0; i < n_radial; ++i) {
    double u = g->u_nodes_[i];
    double wu = g->u_weights_[i] / n_angular;
    double t = 0.5 * std::log((1.0 - u) / u);
    for (int a = 0; a < n_angular; ++a) {
      SphereNode nd;
      nd.u = u;
      nd.theta = a * dtheta;
      nd.weight = wu;
      nd.t = t;
      nd.point = point_from_u_theta(u, nd.theta);
      g->nodes_.push_back(nd);
    }
  }
  return g;
}

std::string SphereGrid::id() const {
  return "gl-u" + std::to_string(n_radial_) + "x" + std::to_string(n_angular_);
}

}  // namespace pbk
