// Continuous background weights phi: evaluation rules on the sphere with
// optional declared Hölder regularity, named presets, and a Monte-Carlo
// modulus-of-continuity estimator.
#pragma once
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pbk/grid_field.hpp"

namespace pbk {

// Declared modulus omega(d) <= c * d^nu used by diagnostics; nu = 1 is
// Lipschitz.
struct HolderDecl {
  double nu = 1.0;
  double c = 0.0;
};

class WeightSpec {
 public:
  enum class Kind { Zero, RadialTabulated, GridTabulated, NamedPreset };

  WeightSpec() = default;  // same as zero()
  static WeightSpec zero();
  // preset names: "holder" (nu,c,center), "loglog" (c,center),
  // "zonal" (a), "bump" (c,s,center)
  static WeightSpec preset(const std::string& name,
                           const std::map<std::string, std::string>& params);
  // radial table of phi(t) on a uniform t-grid, linear interpolation,
  // constant extrapolation
  static WeightSpec radial_table(double t0, double dt, std::vector<double> v);
  static WeightSpec grid_table(GridField f);

  Kind kind() const { return kind_; }
  double eval(const ProjectivePoint& x) const;
  double eval_cyl(double t, double theta) const;  // point at log|z| = t, arg = theta
  bool is_radial() const;
  std::optional<HolderDecl> holder() const { return holder_; }
  double sup_abs_estimate() const;  // coarse bound used for reporting

  // single-line config serialization ("zero", "preset holder nu=...", ...)
  std::string serialize() const;
  static WeightSpec parse(const std::string& line);

 private:
  Kind kind_ = Kind::Zero;
  // preset data
  std::string preset_name_;
  std::map<std::string, std::string> params_;
  double pa_ = 0, pb_ = 0;  // numeric params: holder(nu=pa,c=pb), etc.
  ProjectivePoint center_;
  // radial table
  double t0_ = 0, dt_ = 0;
  std::vector<double> tab_;
  // grid table
  GridField gridtab_;
  std::optional<HolderDecl> holder_;
};

// Monte-Carlo modulus of continuity: for each delta in deltas, the max of
// |phi(x)-phi(y)| over n_pairs random pairs with chordal distance < delta;
// cumulative max makes the output nondecreasing.
std::vector<double> modulus_of_continuity(const WeightSpec& w,
                                          const std::vector<double>& deltas,
                                          int n_pairs, std::uint64_t seed);

// Checks a declared Hölder modulus on random pairs with 5% slack.
bool holder_consistent(const WeightSpec& w, int n_pairs, std::uint64_t seed);

}  // namespace pbk
