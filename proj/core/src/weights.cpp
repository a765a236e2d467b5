#include "pbk/weights.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "pbk/rng.hpp"

namespace pbk {

WeightSpec WeightSpec::zero() {
  WeightSpec w;
  w.kind_ = Kind::Zero;
  w.holder_ = HolderDecl{1.0, 0.0};
  return w;
}

static double get_param(const std::map<std::string, std::string>& m,
                        const std::string& key, double dflt,
                        bool required = false) {
  auto it = m.find(key);
  if (it == m.end()) {
    if (required) throw input_error("weight preset: missing parameter " + key);
    return dflt;
  }
  try {
    return std::stod(it->second);
  } catch (...) {
    throw input_error("weight preset: bad numeric parameter " + key);
  }
}

WeightSpec WeightSpec::preset(const std::string& name,
                              const std::map<std::string, std::string>& params) {
  WeightSpec w;
  w.kind_ = Kind::NamedPreset;
  w.preset_name_ = name;
  w.params_ = params;
  // canonicalize whitespace inside values to commas so serialize() stays
  // one key=value token per parameter
  for (auto& [pk, pv] : w.params_)
    for (auto& ch : pv)
      if (ch == ' ' || ch == '\t') ch = ',';
  auto center = [&params]() {
    auto it = params.find("center");
    if (it == params.end()) return ProjectivePoint{};
    std::string s = it->second;
    for (auto& ch : s)
      if (ch == ',') ch = ' ';
    return parse_point(s);
  };
  if (name == "holder") {
    w.pa_ = get_param(params, "nu", 0.5, true);
    w.pb_ = get_param(params, "c", 1.0, true);
    if (!(w.pa_ > 0.0 && w.pa_ <= 1.0)) throw input_error("holder preset: nu in (0,1]");
    w.center_ = center();
    w.holder_ = HolderDecl{w.pa_, std::fabs(w.pb_)};
  } else if (name == "loglog") {
    // c / log(e + 1/sigma): continuous but not Hölder at the center
    w.pb_ = get_param(params, "c", 1.0, true);
    w.center_ = center();
    w.holder_ = std::nullopt;
  } else if (name == "zonal") {
    // a * x3 = a * (2u - 1); smooth
    w.pa_ = get_param(params, "a", 1.0, true);
    w.holder_ = HolderDecl{1.0, 4.0 * std::fabs(w.pa_)};
  } else if (name == "bump") {
    // c * exp(-(sigma/s)^2); smooth
    w.pa_ = get_param(params, "s", 0.25);
    w.pb_ = get_param(params, "c", 1.0, true);
    if (!(w.pa_ > 0)) throw input_error("bump preset: s must be positive");
    w.center_ = center();
    w.holder_ = HolderDecl{1.0, 2.0 * std::fabs(w.pb_) / w.pa_};
  } else {
    throw input_error("unknown weight preset '" + name + "'");
  }
  return w;
}

WeightSpec WeightSpec::radial_table(double t0, double dt, std::vector<double> v) {
  if (v.size() < 2 || !(dt > 0)) throw input_error("radial_table: need >= 2 samples, dt > 0");
  WeightSpec w;
  w.kind_ = Kind::RadialTabulated;
  w.t0_ = t0;
  w.dt_ = dt;
  w.tab_ = std::move(v);
  w.holder_ = std::nullopt;
  return w;
}

WeightSpec WeightSpec::grid_table(GridField f) {
  WeightSpec w;
  w.kind_ = Kind::GridTabulated;
  f.check_finite();
  w.gridtab_ = std::move(f);
  w.holder_ = std::nullopt;
  return w;
}

double WeightSpec::eval(const ProjectivePoint& x) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::NamedPreset: {
      if (preset_name_ == "holder")
        return pb_ * std::pow(chordal_sigma(x, center_), pa_);
      if (preset_name_ == "loglog") {
        double s = chordal_sigma(x, center_);
        if (s == 0.0) return 0.0;
        return pb_ / std::log(2.718281828459045 + 1.0 / s);
      }
      if (preset_name_ == "zonal") return pa_ * (2.0 * x.u() - 1.0);
      // bump
      double s = chordal_sigma(x, center_) / pa_;
      return pb_ * std::exp(-s * s);
    }
    case Kind::RadialTabulated: {
      double t = x.log_abs_z();
      double s = (t - t0_) / dt_;
      if (s <= 0.0) return tab_.front();
      if (s >= static_cast<double>(tab_.size() - 1)) return tab_.back();
      int i = static_cast<int>(s);
      double f = s - i;
      return tab_[i] * (1.0 - f) + tab_[i + 1] * f;
    }
    case Kind::GridTabulated: {
      // bilinear in (u, theta) on the tabulation grid
      const auto& g = *gridtab_.grid();
      const auto& un = g.u_nodes();
      double u = x.u(), th = x.theta();
      const double twopi = 6.283185307179586;
      if (th < 0) th += twopi;
      double a = th / (twopi / g.n_angular());
      int ia = static_cast<int>(a) % g.n_angular();
      double fa = a - std::floor(a);
      int ia1 = (ia + 1) % g.n_angular();
      // locate u cell (u_nodes ascending)
      int lo = 0, hi = g.n_radial() - 1;
      if (u <= un.front()) {
        lo = hi = 0;
      } else if (u >= un.back()) {
        lo = hi = g.n_radial() - 1;
      } else {
        while (hi - lo > 1) {
          int mid = (lo + hi) / 2;
          (un[mid] <= u ? lo : hi) = mid;
        }
      }
      double fu = (hi == lo) ? 0.0 : (u - un[lo]) / (un[hi] - un[lo]);
      auto val = [&](int ir, int iaa) {
        return gridtab_[ir * g.n_angular() + iaa];
      };
      double v0 = val(lo, ia) * (1 - fa) + val(lo, ia1) * fa;
      double v1 = val(hi, ia) * (1 - fa) + val(hi, ia1) * fa;
      return v0 * (1 - fu) + v1 * fu;
    }
  }
  return 0.0;
}

double WeightSpec::eval_cyl(double t, double theta) const {
  double u = 1.0 / (1.0 + std::exp(2.0 * t));
  if (u <= 0.0) u = 1e-300;
  return eval(point_from_u_theta(u, theta));
}

bool WeightSpec::is_radial() const {
  switch (kind_) {
    case Kind::Zero:
    case Kind::RadialTabulated:
      return true;
    case Kind::NamedPreset:
      if (preset_name_ == "zonal") return true;
      // centered presets are radial when centered on the axis 0/infinity
      return center_.is_zero() || center_.is_infinity();
    case Kind::GridTabulated:
      return false;
  }
  return false;
}

double WeightSpec::sup_abs_estimate() const {
  double m = 0.0;
  for (int i = 0; i < 64; ++i)
    for (int a = 0; a < 16; ++a) {
      double u = (i + 0.5) / 64.0;
      m = std::max(m, std::fabs(eval(point_from_u_theta(u, a * 0.392699081698724))));
    }
  return m;
}

std::string WeightSpec::serialize() const {
  char buf[128];
  switch (kind_) {
    case Kind::Zero:
      return "zero";
    case Kind::NamedPreset: {
      std::string s = "preset " + preset_name_;
      for (const auto& [k, v] : params_) s += " " + k + "=" + v;
      return s;
    }
    case Kind::RadialTabulated: {
      std::snprintf(buf, sizeof buf, "radial %.17g %.17g %zu", t0_, dt_,
                    tab_.size());
      std::string s = buf;
      for (double v : tab_) {
        std::snprintf(buf, sizeof buf, " %.17g", v);
        s += buf;
      }
      return s;
    }
    case Kind::GridTabulated:
      throw input_error("WeightSpec: grid-tabulated weights serialize via their field file");
  }
  return "zero";
}

WeightSpec WeightSpec::parse(const std::string& line) {
  std::istringstream is(line);
  std::string kind;
  is >> kind;
  if (kind == "zero" || kind.empty()) return zero();
  if (kind == "preset") {
    std::string name;
    is >> name;
    std::map<std::string, std::string> params;
    std::string kv;
    while (is >> kv) {
      auto eq = kv.find('=');
      if (eq == std::string::npos)
        throw input_error("weight preset: expected key=value, got '" + kv + "'");
      params[kv.substr(0, eq)] = kv.substr(eq + 1);
    }
    return preset(name, params);
  }
  if (kind == "radial") {
    double t0, dt;
    std::size_t n;
    if (!(is >> t0 >> dt >> n)) throw input_error("weight radial: bad header");
    std::vector<double> v(n);
    for (auto& x : v)
      if (!(is >> x)) throw input_error("weight radial: short table");
    return radial_table(t0, dt, std::move(v));
  }
  throw input_error("unknown weight kind '" + kind + "'");
}

// uniform point on the sphere: u uniform in (0,1), theta uniform
static ProjectivePoint random_point(Rng& rng) {
  double u = 0.0;
  while (u <= 0.0 || u >= 1.0) u = rng.uniform();
  return point_from_u_theta(u, rng.uniform(0.0, 6.283185307179586));
}

// nearby point at chordal distance <= delta (rejection from small caps)
static ProjectivePoint nearby_point(const ProjectivePoint& x, double delta,
                                    Rng& rng) {
  for (int tries = 0; tries < 200; ++tries) {
    // perturb in the canonical chart; chordal distance <= euclidean there
    std::complex<double> d = std::polar(delta * rng.uniform(), rng.uniform(0.0, 6.283185307179586));
    ProjectivePoint y = (x.chart == Chart::Affine)
                            ? ProjectivePoint::from_affine(x.coord + d)
                            : ProjectivePoint::from_infinity_chart(x.coord + d);
    if (chordal_sigma(x, y) < delta) return y;
  }
  return x;
}

std::vector<double> modulus_of_continuity(const WeightSpec& w,
                                          const std::vector<double>& deltas,
                                          int n_pairs, std::uint64_t seed) {
  std::vector<double> out;
  out.reserve(deltas.size());
  double running = 0.0;
  for (std::size_t di = 0; di < deltas.size(); ++di) {
    Rng rng(derive_seed(seed, di));
    double m = 0.0;
    for (int i = 0; i < n_pairs; ++i) {
      ProjectivePoint x = random_point(rng);
      ProjectivePoint y = nearby_point(x, deltas[di], rng);
      m = std::max(m, std::fabs(w.eval(x) - w.eval(y)));
    }
    running = std::max(running, m);  // cumulative max: nondecreasing in delta
    out.push_back(running);
  }
  return out;
}

bool holder_consistent(const WeightSpec& w, int n_pairs, std::uint64_t seed) {
  auto decl = w.holder();
  if (!decl) return true;
  Rng rng(seed);
  for (int i = 0; i < n_pairs; ++i) {
    ProjectivePoint x = random_point(rng);
    ProjectivePoint y = (i % 2 == 0) ? random_point(rng)
                                     : nearby_point(x, 0.05, rng);
    double d = chordal_sigma(x, y);
    if (d < 1e-12) continue;
    double gap = std::fabs(w.eval(x) - w.eval(y));
    if (gap > 1.05 * (decl->c * std::pow(d, decl->nu)) + 1e-12) return false;
  }
  return true;
}

}  // namespace pbk
