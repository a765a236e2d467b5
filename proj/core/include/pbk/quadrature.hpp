// Sphere quadrature: tensor grid Gauss-Legendre in u = 1/(1+|z|^2) times
// uniform angles.  omega_FS pushes forward to (1/2pi) du dtheta, so the
// normalized weights sum to 1 and polynomial moments in u integrate
// exactly up to degree 2*n_radial - 1.
#pragma once
#include <memory>
#include <string>
#include <vector>

#include "pbk/geometry.hpp"

namespace pbk {

// Gauss-Legendre nodes/weights on (0,1), weights summing to 1.
void gauss_legendre_01(int n, std::vector<double>& nodes,
                       std::vector<double>& weights);

struct SphereNode {
  double u = 0, theta = 0, weight = 0;
  ProjectivePoint point;
  double t = 0;  // log|z|
};

class SphereGrid {
 public:
  static std::shared_ptr<const SphereGrid> make(int n_radial, int n_angular);

  int n_radial() const { return n_radial_; }
  int n_angular() const { return n_angular_; }
  int size() const { return static_cast<int>(nodes_.size()); }
  const std::vector<SphereNode>& nodes() const { return nodes_; }
  const SphereNode& node(int ir, int ia) const {
    return nodes_[static_cast<std::size_t>(ir) * n_angular_ + ia];
  }
  const std::vector<double>& u_nodes() const { return u_nodes_; }
  // identifier used in file headers; determines the grid completely
  std::string id() const;

 private:
  SphereGrid() = default;
  int n_radial_ = 0, n_angular_ = 0;
  std::vector<double> u_nodes_, u_weights_;
  std::vector<SphereNode> nodes_;
};

using GridPtr = std::shared_ptr<const SphereGrid>;

}  // namespace pbk
