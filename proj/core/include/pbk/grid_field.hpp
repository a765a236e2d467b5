// Scalar field sampled on a SphereGrid, with quadrature helpers and the
// columnar text format "u theta weight value" (>= 15 significant digits).
#pragma once
#include <functional>
#include <string>
#include <vector>

#include "pbk/quadrature.hpp"

namespace pbk {

class GridField {
 public:
  GridField() = default;
  GridField(GridPtr grid, std::string name);
  GridField(GridPtr grid, std::string name, std::vector<double> values);
  static GridField sample(GridPtr grid, std::string name,
                          const std::function<double(const SphereNode&)>& f);

  const GridPtr& grid() const { return grid_; }
  const std::string& name() const { return name_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }
  double operator[](int i) const { return values_[i]; }
  double& operator[](int i) { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  double integrate() const;              // sum w * value (compensated)
  double integrate_abs() const;          // sum w * |value|
  double sup() const;                    // max value
  double sup_abs() const;
  void check_finite() const;             // throws numeric_error on NaN/inf

  void save(const std::string& path) const;
  // load against an expected grid; node mismatch is an input_error
  static GridField load(const std::string& path, GridPtr grid);

 private:
  GridPtr grid_;
  std::string name_;
  std::vector<double> values_;
};

// Kahan-compensated weighted sum over arbitrary vectors.
double compensated_dot(const std::vector<double>& w,
                       const std::vector<double>& v);

}  // namespace pbk
