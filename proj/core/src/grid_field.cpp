#include "pbk/grid_field.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>

#include "pbk/errors.hpp"

namespace pbk {

GridField::GridField(GridPtr grid, std::string name)
    : grid_(std::move(grid)), name_(std::move(name)) {
  values_.assign(grid_->size(), 0.0);
}

GridField::GridField(GridPtr grid, std::string name, std::vector<double> values)
    : grid_(std::move(grid)), name_(std::move(name)), values_(std::move(values)) {
  if (static_cast<int>(values_.size()) != grid_->size())
    throw input_error("GridField: value count does not match grid");
}

GridField GridField::sample(GridPtr grid, std::string name,
                            const std::function<double(const SphereNode&)>& f) {
  GridField out(grid, std::move(name));
  const auto& nodes = out.grid_->nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) out.values_[i] = f(nodes[i]);
  return out;
}

double compensated_dot(const std::vector<double>& w,
                       const std::vector<double>& v) {
  double s = 0.0, c = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    double y = w[i] * v[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double GridField::integrate() const {
  double s = 0.0, c = 0.0;
  const auto& nodes = grid_->nodes();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double y = nodes[i].weight * values_[i] - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double GridField::integrate_abs() const {
  double s = 0.0, c = 0.0;
  const auto& nodes = grid_->nodes();
  for (std::size_t i = 0; i < values_.size(); ++i) {
    double y = nodes[i].weight * std::fabs(values_[i]) - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

double GridField::sup() const {
  double m = -std::numeric_limits<double>::infinity();
  for (double v : values_) m = std::max(m, v);
  return m;
}

double GridField::sup_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::fabs(v));
  return m;
}

void GridField::check_finite() const {
  for (double v : values_)
    if (!std::isfinite(v))
      throw numeric_error("GridField '" + name_ + "': non-finite value");
}

void GridField::save(const std::string& path) const {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw input_error("GridField::save: cannot open " + path);
  std::fprintf(f, "u theta weight value\n");
  const auto& nodes = grid_->nodes();
  for (std::size_t i = 0; i < values_.size(); ++i)
    std::fprintf(f, "%.17g %.17g %.17g %.17g\n", nodes[i].u, nodes[i].theta,
                 nodes[i].weight, values_[i]);
  std::fclose(f);
}

GridField GridField::load(const std::string& path, GridPtr grid) {
  std::ifstream in(path);
  if (!in) throw input_error("GridField::load: cannot open " + path);
  std::string header;
  std::getline(in, header);
  if (header != "u theta weight value")
    throw input_error("GridField::load: bad header in " + path);
  GridField out(grid, path);
  const auto& nodes = grid->nodes();
  for (int i = 0; i < grid->size(); ++i) {
    double u, th, w, v;
    if (!(in >> u >> th >> w >> v))
      throw input_error("GridField::load: short file " + path);
    if (std::fabs(u - nodes[i].u) > 1e-12 ||
        std::fabs(th - nodes[i].theta) > 1e-12 ||
        std::fabs(w - nodes[i].weight) > 1e-15)
      throw input_error("GridField::load: node mismatch in " + path);
    out.values_[i] = v;
  }
  return out;
}

}  // namespace pbk
