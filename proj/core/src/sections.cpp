#include "pbk/sections.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pbk/errors.hpp"
#include "pbk/rng.hpp"
#include "pbk/tsqr.hpp"
#include "pbk/xreal.hpp"

namespace pbk {
namespace {

// exp(-45) ~ 3e-20: entries below this never move a double Gram entry.
constexpr double kLiveCutoff = -45.0;
constexpr double kScaleMargin = 2.0;
// below this diagonal ratio the double accumulation is rerun in extended
// precision; below the accept threshold even that cannot certify an ONB
// whose coefficients survive the trip back to double.
constexpr double kRetryCond = 1e-9;
constexpr double kAcceptCond = 1e-7;
constexpr double kLogFloor = -1e4;  // stand-in for log 0 at exact zeros
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-point evaluation of the factored basis g_i = z^i * prod_j f_j^{t_j}:
// in either chart log|g_i| and arg g_i are affine in i, so a point is fully
// described by four numbers.  only_col >= 0 flags the two axis points where
// a single column survives (avoids 0 * inf).
struct RowForm {
  double A = 0, dA = 0, B = 0, dB = 0;
  int only_col = -1;
};

struct EvalCtx {
  int k = 0, p = 0, m = 0;
  const PoleSet* poles = nullptr;
  const std::vector<int>* th = nullptr;
  const WeightSpec* wt = nullptr;
};

EvalCtx ctx_of(const SectionSpace& s) {
  return EvalCtx{s.k, s.p, s.m, &s.poles, &s.thresholds, &s.weight};
}

// Degree-one factor through pole j, in the representative matching `chart`:
// affine pole a:  (z - a)   <->  (1 - a w)
// infinity-chart pole b:  (b z - 1)  <->  (b - w)
// The w-representative of g_i is w^(m-i) * prod f~^t, i.e. the exponent of
// w decreases with i, which keeps both charts affine in i.
RowForm row_form(const EvalCtx& c, Chart chart, std::complex<double> coord) {
  double lmag = 0, ph = 0;
  const auto& ps = c.poles->poles();
  for (std::size_t j = 0; j < ps.size(); ++j) {
    int t = (*c.th)[j];
    if (t == 0) continue;
    std::complex<double> f;
    if (chart == Chart::Affine)
      f = (ps[j].point.chart == Chart::Affine)
              ? coord - ps[j].point.coord
              : ps[j].point.coord * coord - 1.0;
    else
      f = (ps[j].point.chart == Chart::Affine)
              ? 1.0 - ps[j].point.coord * coord
              : ps[j].point.coord - coord;
    lmag += t * std::log(std::abs(f));
    ph += t * std::arg(f);
  }
  ProjectivePoint x{chart, coord};  // non-canonical coords evaluate fine
  double base =
      -0.5 * double(c.k) * double(c.p) * std::log1p(std::norm(coord)) -
      double(c.p) * c.wt->eval(x);
  RowForm r;
  double rr = std::abs(coord);
  if (chart == Chart::Affine) {
    if (rr == 0.0) {
      r.only_col = 0;
      r.A = base + lmag;
      r.B = ph;
    } else {
      r.A = base + lmag;
      r.dA = std::log(rr);
      r.B = ph;
      r.dB = std::arg(coord);
    }
  } else {
    if (rr == 0.0) {
      r.only_col = c.m;
      r.A = base + lmag;
      r.B = ph;
    } else {
      double lw = std::log(rr), aw = std::arg(coord);
      r.A = base + lmag + c.m * lw;
      r.dA = -lw;
      r.B = ph + c.m * aw;
      r.dB = -aw;
    }
  }
  return r;
}

// Scaled log-magnitudes and phases of all columns at one point; entries not
// covered (other than only_col) are set to -inf.
void scaled_row(const EvalCtx& c, const std::vector<double>& scale,
                const RowForm& rf, std::vector<double>& lm,
                std::vector<double>& ph) {
  int cols = c.m + 1;
  if (rf.only_col >= 0) {
    std::fill(lm.begin(), lm.end(), kNegInf);
    std::fill(ph.begin(), ph.end(), 0.0);
    lm[rf.only_col] = rf.A - scale[rf.only_col];
    ph[rf.only_col] = rf.B;
    return;
  }
  for (int i = 0; i < cols; ++i) {
    lm[i] = rf.A + i * rf.dA - scale[i];
    ph[i] = rf.B + i * rf.dB;
  }
}

std::vector<double> column_scales(const EvalCtx& c, const SphereGrid& g) {
  int cols = c.m + 1;
  std::vector<double> s(cols, kNegInf);
  int stride = std::max(1, g.size() / 8192);
  for (int idx = 0; idx < g.size(); idx += stride) {
    const SphereNode& nd = g.nodes()[idx];
    RowForm rf = row_form(c, nd.point.chart, nd.point.coord);
    if (rf.only_col >= 0) {
      s[rf.only_col] = std::max(s[rf.only_col], rf.A);
      continue;
    }
    for (int i = 0; i < cols; ++i) s[i] = std::max(s[i], rf.A + i * rf.dA);
  }
  for (double& v : s) v = std::isfinite(v) ? v + kScaleMargin : 0.0;
  return s;
}

template <class T>
struct QrOut {
  std::vector<cx<T>> R;
  std::vector<double> colnorm;
  double min_cond = 0;
};

// One streaming pass over the grid.  Entries are evaluated in double (their
// relative error is benign); the orthogonalization accumulates in T.
template <class T>
QrOut<T> accumulate_qr(const EvalCtx& c, const SphereGrid& g,
                       const std::vector<double>& scale) {
  int cols = c.m + 1;
  StreamingQR<T> qr(cols, 4096);
  std::vector<cx<T>> row(cols);
  std::vector<double> cn2(cols, 0.0);
  for (const SphereNode& nd : g.nodes()) {
    RowForm rf = row_form(c, nd.point.chart, nd.point.coord);
    double sw = std::sqrt(nd.weight);
    std::fill(row.begin(), row.end(), cx<T>(T(0), T(0)));
    auto put = [&](int i, double logm, double phase) {
      if (!(logm >= kLiveCutoff)) return;
      double v = std::exp(logm) * sw;
      row[i] = cx<T>(T(v * std::cos(phase)), T(v * std::sin(phase)));
      cn2[i] += v * v;
    };
    if (rf.only_col >= 0) {
      put(rf.only_col, rf.A - scale[rf.only_col], rf.B);
    } else {
      for (int i = 0; i < cols; ++i)
        put(i, rf.A + i * rf.dA - scale[i], rf.B + i * rf.dB);
    }
    qr.push_row(row.data());
  }
  qr.finalize();
  QrOut<T> out;
  out.R = qr.triangle();
  out.colnorm.resize(cols);
  double mc = std::numeric_limits<double>::infinity();
  for (int i = 0; i < cols; ++i) {
    out.colnorm[i] = std::sqrt(cn2[i]);
    double dii =
        static_cast<double>(cx_abs(out.R[std::size_t(i) * cols + i]));
    double ratio = out.colnorm[i] > 0 ? dii / out.colnorm[i] : 0.0;
    mc = std::min(mc, ratio);
  }
  out.min_cond = mc;
  return out;
}

template <class T>
std::vector<std::complex<double>> to_std_complex(const std::vector<cx<T>>& v) {
  std::vector<std::complex<double>> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i)
    out[i] = {static_cast<double>(v[i].re), static_cast<double>(v[i].im)};
  return out;
}

// Shared per-point kernel: scaled section values times exp(-M), where M is
// the per-point shift making the largest live column O(1).  Returns M
// (-inf when every section vanishes identically at the point).
double section_row(const SectionSpace& s, const std::vector<double>& lm,
                   const std::vector<double>& ph,
                   std::vector<std::complex<double>>& srow) {
  int dim = s.dim;
  double M = kNegInf;
  for (int i = 0; i < dim; ++i) M = std::max(M, lm[i]);
  std::fill(srow.begin(), srow.end(), std::complex<double>(0.0, 0.0));
  if (!std::isfinite(M)) return M;
  for (int i = 0; i < dim; ++i) {
    double rel = lm[i] - M;
    if (!(rel >= kLiveCutoff)) continue;
    double v = std::exp(rel);
    std::complex<double> val(v * std::cos(ph[i]), v * std::sin(ph[i]));
    const std::complex<double>* r = &s.onb[std::size_t(i) * dim];
    for (int j = i; j < dim; ++j) srow[j] += val * r[j];  // onb upper triangular
  }
  return M;
}

}  // namespace

// Gram integrands of degree-kp sections are u-polynomials of degree <= kp
// with angular harmonics |m| <= kp, so these floors keep the quadrature exact.
int radial_floor(int k, int p) { return (k * p) / 2 + 16; }
int angular_floor(int k, int p) { return k * p + 16; }

SectionSpace build_orthonormal_basis(int k, int p, const PoleSet& poles,
                                     const WeightSpec& weight, GridPtr grid) {
  if (k < 1) throw input_error("curvature multiple k must be >= 1");
  if (p < 1) throw input_error("power p must be >= 1");
  if (!grid) throw input_error("grid required");
  if (grid->n_radial() < radial_floor(k, p) ||
      grid->n_angular() < angular_floor(k, p)) {
    std::ostringstream os;
    os << "grid " << grid->id() << " below resolution floor "
       << radial_floor(k, p) << "x" << angular_floor(k, p) << " for k=" << k
       << " p=" << p;
    throw input_error(os.str());
  }
  int d = dimension(k, p, poles);
  if (d <= 0) {
    std::ostringstream os;
    os << "constrained space is zero: k=" << k << " p=" << p
       << " threshold sum " << poles.threshold_sum(p) << " >= " << k * p + 1;
    throw dimension_zero_error(os.str());
  }

  SectionSpace s;
  s.k = k;
  s.p = p;
  s.poles = poles;
  s.thresholds = poles.thresholds(p);
  s.dim = d;
  s.m = d - 1;
  s.weight = weight;
  s.grid = grid;

  EvalCtx c = ctx_of(s);
  s.scale_log = column_scales(c, *grid);
  auto qd = accumulate_qr<double>(c, *grid, s.scale_log);
  s.min_cond = qd.min_cond;
  if (qd.min_cond >= kRetryCond) {
    s.onb = to_std_complex(invert_upper<double>(qd.R, d));
  } else {
    auto qx = accumulate_qr<xreal>(c, *grid, s.scale_log);
    s.extended_precision = true;
    s.min_cond = qx.min_cond;
    if (qx.min_cond < kAcceptCond) {
      std::ostringstream os;
      os << "basis numerically dependent: min diag ratio " << qx.min_cond
         << " (double pass " << qd.min_cond << "), below " << kAcceptCond;
      throw ill_conditioned_error(os.str());
    }
    s.onb = to_std_complex(invert_upper<xreal>(qx.R, d));
  }
  for (const auto& v : s.onb)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
      throw numeric_error("non-finite orthonormal basis coefficient");
  return s;
}

std::vector<std::complex<double>> SectionSpace::monomial_coeffs(
    const std::vector<std::complex<double>>& g) const {
  if (static_cast<int>(g.size()) != dim)
    throw input_error("coefficient vector length mismatch");
  std::vector<std::complex<double>> out(dim);
  for (int i = 0; i < dim; ++i) {
    std::complex<double> acc(0.0, 0.0);
    for (int j = i; j < dim; ++j) acc += onb[std::size_t(i) * dim + j] * g[j];
    double a = std::abs(acc);
    if (a == 0.0) {
      out[i] = 0.0;
      continue;
    }
    double lg = std::log(a) - scale_log[i];
    if (lg > 700.0)
      throw numeric_error("monomial coefficient overflows double");
    if (lg < -745.0) {
      out[i] = 0.0;
      continue;
    }
    out[i] = (acc / a) * std::exp(lg);
  }
  return out;
}

std::vector<std::complex<double>> eval_basis(const SectionSpace& s,
                                             const ProjectivePoint& x) {
  EvalCtx c = ctx_of(s);
  RowForm rf = row_form(c, x.chart, x.coord);
  std::vector<std::complex<double>> out(s.dim, {0.0, 0.0});
  auto add = [&](int i, double logm, double phase) {
    if (!(logm > -745.0)) return;
    double v = std::exp(logm);
    std::complex<double> val(v * std::cos(phase), v * std::sin(phase));
    for (int j = i; j < s.dim; ++j)
      out[j] += val * s.onb[std::size_t(i) * s.dim + j];
  };
  if (rf.only_col >= 0) {
    add(rf.only_col, rf.A - s.scale_log[rf.only_col], rf.B);
  } else {
    for (int i = 0; i < s.dim; ++i)
      add(i, rf.A + i * rf.dA - s.scale_log[i], rf.B + i * rf.dB);
  }
  return out;
}

double eval_log_norm(const SectionSpace& s, const ProjectivePoint& x,
                     const std::vector<std::complex<double>>& scaled_coeffs,
                     Chart force_chart, bool use_force) {
  if (static_cast<int>(scaled_coeffs.size()) != s.dim)
    throw input_error("scaled coefficient vector length mismatch");
  Chart chart = use_force ? force_chart : x.chart;
  std::complex<double> coord = x.coord;
  if (chart != x.chart) {
    if (x.coord == std::complex<double>(0.0, 0.0))
      throw input_error("axis point has no representative in the far chart");
    coord = 1.0 / x.coord;
  }
  EvalCtx c = ctx_of(s);
  RowForm rf = row_form(c, chart, coord);
  std::vector<double> lm(s.dim), ph(s.dim);
  scaled_row(c, s.scale_log, rf, lm, ph);
  double M = kNegInf;
  for (int i = 0; i < s.dim; ++i) M = std::max(M, lm[i]);
  if (!std::isfinite(M)) return kNegInf;
  std::complex<double> acc(0.0, 0.0);
  for (int i = 0; i < s.dim; ++i) {
    double rel = lm[i] - M;
    if (!(rel >= 2 * kLiveCutoff)) continue;
    double v = std::exp(rel);
    acc += std::complex<double>(v * std::cos(ph[i]), v * std::sin(ph[i])) *
           scaled_coeffs[i];
  }
  double a = std::abs(acc);
  return a > 0 ? M + std::log(a) : kNegInf;
}

BergmanField bergman_field(const SectionSpace& s) {
  const SphereGrid& g = *s.grid;
  EvalCtx c = ctx_of(s);
  int dim = s.dim;
  std::vector<double> P(g.size()), LP(g.size());
  std::vector<double> lm(dim), ph(dim);
  std::vector<std::complex<double>> srow(dim);
  for (int idx = 0; idx < g.size(); ++idx) {
    const SphereNode& nd = g.nodes()[idx];
    RowForm rf = row_form(c, nd.point.chart, nd.point.coord);
    scaled_row(c, s.scale_log, rf, lm, ph);
    double M = section_row(s, lm, ph, srow);
    if (!std::isfinite(M)) {  // a pole sits exactly on this node
      P[idx] = 0.0;
      LP[idx] = kLogFloor;
      continue;
    }
    double ps = 0.0;
    for (int j = 0; j < dim; ++j) ps += std::norm(srow[j]);
    LP[idx] = 2.0 * M + (ps > 0 ? std::log(ps) : kLogFloor);
    P[idx] = std::exp(LP[idx]);
  }
  BergmanField bf;
  bf.grid = s.grid;
  bf.P = GridField(s.grid, "bergman_density", std::move(P));
  bf.log_P = GridField(s.grid, "log_bergman_density", std::move(LP));
  bf.dim = dim;
  bf.P.check_finite();
  bf.trace = bf.P.integrate();
  bf.trace_gap = std::abs(bf.trace - dim);
  return bf;
}

GridField bergman_potential(const SectionSpace& s, const BergmanField& bf) {
  const SphereGrid& g = *s.grid;
  std::vector<double> v(g.size());
  for (int i = 0; i < g.size(); ++i)
    v[i] = s.weight.eval(g.nodes()[i].point) +
           std::max(bf.log_P[i], kLogFloor) / (2.0 * s.p);
  return GridField(s.grid, "phi_p", std::move(v));
}

VariationalReport variational_check(const SectionSpace& s,
                                    const BergmanField& bf, int n_sections,
                                    int n_points, std::uint64_t seed) {
  const SphereGrid& g = *s.grid;
  EvalCtx c = ctx_of(s);
  int dim = s.dim;
  VariationalReport rep;
  rep.sections = n_sections;

  Rng rng(derive_seed(seed, 0x7661u, 0));
  std::vector<std::vector<std::complex<double>>> secs(n_sections);
  for (auto& gvec : secs) {
    gvec.resize(dim);
    double n2 = 0;
    for (auto& z : gvec) {
      z = rng.cgaussian();
      n2 += std::norm(z);
    }
    double inv = 1.0 / std::sqrt(n2);
    for (auto& z : gvec) z *= inv;
  }

  std::vector<double> lm(dim), ph(dim);
  std::vector<std::complex<double>> srow(dim), hstar(dim);
  int stride = std::max(1, g.size() / std::max(1, n_points));
  for (int idx = stride / 2; idx < g.size(); idx += stride) {
    const SphereNode& nd = g.nodes()[idx];
    RowForm rf = row_form(c, nd.point.chart, nd.point.coord);
    scaled_row(c, s.scale_log, rf, lm, ph);
    double M = section_row(s, lm, ph, srow);
    if (!std::isfinite(M)) continue;
    double ps = 0.0;
    for (int j = 0; j < dim; ++j) ps += std::norm(srow[j]);
    if (!(ps > 0)) continue;
    ++rep.points;
    for (const auto& gvec : secs) {
      std::complex<double> acc(0.0, 0.0);
      for (int j = 0; j < dim; ++j) acc += srow[j] * gvec[j];
      rep.max_violation =
          std::max(rep.max_violation, std::norm(acc) / ps - 1.0);
    }
    // extremal section: coefficients conj(srow)/|srow|; evaluate through the
    // coefficient route and compare with the stored density.
    double inv = 1.0 / std::sqrt(ps);
    for (int i = 0; i < dim; ++i) {
      std::complex<double> acc(0.0, 0.0);
      for (int j = i; j < dim; ++j)
        acc += s.onb[std::size_t(i) * dim + j] * conj(srow[j]);
      hstar[i] = acc * inv;
    }
    double lnorm = eval_log_norm(s, nd.point, hstar, Chart::Affine, false);
    rep.extremal_gap =
        std::max(rep.extremal_gap, std::abs(2.0 * lnorm - bf.log_P[idx]));
  }
  return rep;
}

void save_basis(const SectionSpace& s, const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw input_error("cannot open " + path + " for writing");
  std::fprintf(f, "pbk-onb 1\n");
  std::fprintf(f, "k %d p %d dim %d m %d mincond %.17g extended %d\n", s.k,
               s.p, s.dim, s.m, s.min_cond, s.extended_precision ? 1 : 0);
  std::fprintf(f, "grid %s\n", s.grid->id().c_str());
  std::fprintf(f, "weight %s\n", s.weight.serialize().c_str());
  std::fprintf(f, "poles %d\n", static_cast<int>(s.poles.size()));
  for (std::size_t j = 0; j < s.poles.size(); ++j)
    std::fprintf(f, "%s %.17g %d\n",
                 format_point(s.poles.poles()[j].point).c_str(),
                 s.poles.poles()[j].tau, s.thresholds[j]);
  std::fprintf(f, "scale %d\n", s.dim);
  for (int i = 0; i < s.dim; ++i)
    std::fprintf(f, "%.17g%c", s.scale_log[i], i + 1 == s.dim ? '\n' : ' ');
  std::fprintf(f, "onb %d\n", s.dim);
  for (int i = 0; i < s.dim; ++i) {
    for (int j = 0; j < s.dim; ++j) {
      const auto& z = s.onb[std::size_t(i) * s.dim + j];
      std::fprintf(f, "%.17g %.17g%c", z.real(), z.imag(),
                   j + 1 == s.dim ? '\n' : ' ');
    }
  }
  std::fclose(f);
}

SectionSpace load_basis(const std::string& path, GridPtr grid) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "pbk-onb" || version != 1)
    throw input_error(path + ": not a basis file");
  SectionSpace s;
  int ext = 0;
  in >> tag >> s.k >> tag >> s.p >> tag >> s.dim >> tag >> s.m >> tag >>
      s.min_cond >> tag >> ext;
  s.extended_precision = ext != 0;
  if (s.k < 1 || s.p < 1 || s.dim < 1 || s.m != s.dim - 1)
    throw input_error(path + ": inconsistent header");
  std::string grid_id;
  in >> tag >> grid_id;
  if (!grid || grid->id() != grid_id)
    throw input_error(path + ": expects grid " + grid_id);
  s.grid = grid;
  in >> tag;  // "weight"
  std::string rest;
  std::getline(in, rest);
  if (!rest.empty() && rest.front() == ' ') rest.erase(0, 1);
  s.weight = WeightSpec::parse(rest);
  int npoles = 0;
  in >> tag >> npoles;
  if (npoles < 0 || npoles > 4096) throw input_error(path + ": bad pole count");
  std::vector<Pole> poles;
  s.thresholds.clear();
  for (int j = 0; j < npoles; ++j) {
    std::string first;
    in >> first;
    ProjectivePoint pt;
    if (first == "inf") {
      pt = ProjectivePoint::infinity();
    } else {
      std::string second;
      in >> second;
      pt = parse_point(first + " " + second);
    }
    double tau = 0;
    int t = 0;
    in >> tau >> t;
    poles.push_back({pt, tau});
    s.thresholds.push_back(t);
  }
  s.poles = PoleSet(std::move(poles));
  if (s.poles.thresholds(s.p) != s.thresholds)
    throw input_error(path + ": thresholds do not match rates");
  int count = 0;
  in >> tag >> count;
  if (tag != "scale" || count != s.dim)
    throw input_error(path + ": bad scale block");
  s.scale_log.resize(s.dim);
  for (auto& v : s.scale_log) in >> v;
  in >> tag >> count;
  if (tag != "onb" || count != s.dim)
    throw input_error(path + ": bad coefficient block");
  s.onb.resize(std::size_t(s.dim) * s.dim);
  for (auto& z : s.onb) {
    double re = 0, im = 0;
    in >> re >> im;
    z = {re, im};
  }
  if (!in) throw input_error(path + ": truncated basis file");
  if (dimension(s.k, s.p, s.poles) != s.dim)
    throw input_error(path + ": dimension does not match pole data");
  return s;
}

}  // namespace pbk
