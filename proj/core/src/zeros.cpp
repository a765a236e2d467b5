#include "pbk/zeros.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "pbk/errors.hpp"
#include "pbk/roots.hpp"

namespace pbk {

std::vector<std::complex<double>> random_section_coeffs(const SectionSpace& s,
                                                        Rng& rng) {
  std::vector<std::complex<double>> g(s.dim);
  double n2 = 0;
  for (auto& z : g) {
    z = rng.cgaussian();
    n2 += std::norm(z);
  }
  double inv = 1.0 / std::sqrt(n2);
  for (auto& z : g) z *= inv;
  return g;
}

Divisor zero_divisor(const SectionSpace& s,
                     const std::vector<std::complex<double>>& g) {
  RootResult rr = polynomial_roots(s.monomial_coeffs(g));
  Divisor d;
  int at_zero = rr.zeros_at_origin;
  int at_inf = rr.degree_deficiency;
  for (std::size_t j = 0; j < s.poles.size(); ++j) {
    int t = s.thresholds[j];
    if (t == 0) continue;
    const ProjectivePoint& pt = s.poles.poles()[j].point;
    if (pt.is_zero())
      at_zero += t;
    else if (pt.is_infinity())
      at_inf += t;
    else
      d.points.push_back({pt, t});
  }
  for (const auto& z : rr.roots)
    d.points.push_back({ProjectivePoint::from_affine(z), 1});
  if (at_zero > 0)
    d.points.push_back({ProjectivePoint::from_affine({0.0, 0.0}), at_zero});
  if (at_inf > 0) d.points.push_back({ProjectivePoint::infinity(), at_inf});
  d.total = 0;
  for (const auto& [pt, m] : d.points) d.total += m;
  if (d.total != s.k * s.p) {
    std::ostringstream os;
    os << "divisor bookkeeping lost points: " << d.total << " of "
       << s.k * s.p;
    throw numeric_error(os.str());
  }
  return d;
}

void save_divisor(const Divisor& d, int k, int p, std::uint64_t seed,
                  const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw input_error("cannot open " + path + " for writing");
  std::fprintf(f, "pbk-divisor 1\n");
  std::fprintf(f, "k %d p %d seed %llu points %d total %d\n", k, p,
               static_cast<unsigned long long>(seed),
               static_cast<int>(d.points.size()), d.total);
  for (const auto& [pt, m] : d.points) {
    if (pt.is_infinity())
      std::fprintf(f, "INF %d\n", m);
    else if (pt.chart == Chart::Affine)
      std::fprintf(f, "%.17g %.17g %d\n", pt.coord.real(), pt.coord.imag(),
                   m);
    else {  // store the affine coordinate 1/w of a far point
      std::complex<double> z = 1.0 / pt.coord;
      std::fprintf(f, "%.17g %.17g %d\n", z.real(), z.imag(), m);
    }
  }
  std::fclose(f);
}

Divisor load_divisor(const std::string& path, int* k, int* p,
                     std::uint64_t* seed) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open " + path);
  std::string tag;
  int version = 0;
  in >> tag >> version;
  if (tag != "pbk-divisor" || version != 1)
    throw input_error(path + ": not a divisor file");
  int kk = 0, pp = 0, npts = 0, total = 0;
  unsigned long long sd = 0;
  in >> tag >> kk >> tag >> pp >> tag >> sd >> tag >> npts >> tag >> total;
  if (kk < 1 || pp < 1 || npts < 0)
    throw input_error(path + ": inconsistent header");
  Divisor d;
  for (int i = 0; i < npts; ++i) {
    std::string first;
    in >> first;
    int m = 0;
    if (first == "INF") {
      in >> m;
      d.points.push_back({ProjectivePoint::infinity(), m});
    } else {
      double re = std::stod(first), im = 0;
      in >> im >> m;
      d.points.push_back({ProjectivePoint::from_affine({re, im}), m});
    }
    if (m < 1) throw input_error(path + ": bad multiplicity");
    d.total += m;
  }
  if (!in || d.total != total)
    throw input_error(path + ": truncated or inconsistent divisor");
  if (k) *k = kk;
  if (p) *p = pp;
  if (seed) *seed = sd;
  return d;
}

double radial_ks(const Divisor& d,
                 const std::function<double(double)>& cdf) {
  if (d.total <= 0) throw input_error("empty divisor");
  const double big = 40.0;  // beyond any cylinder window; cdf must saturate
  std::vector<std::pair<double, int>> ts;
  for (const auto& [pt, m] : d.points) {
    double t;
    if (pt.is_zero())
      t = -big;
    else if (pt.is_infinity())
      t = big;
    else
      t = std::min(big, std::max(-big, pt.log_abs_z()));
    ts.push_back({t, m});
  }
  std::sort(ts.begin(), ts.end());
  double ks = 0;
  int seen = 0;
  const double n = d.total;
  for (std::size_t i = 0; i < ts.size();) {
    std::size_t j = i;
    int batch = 0;
    while (j < ts.size() && ts[j].first == ts[i].first) batch += ts[j++].second;
    double F = cdf(ts[i].first);
    ks = std::max(ks, std::abs(seen / n - F));
    seen += batch;
    ks = std::max(ks, std::abs(seen / n - F));
    i = j;
  }
  return ks;
}

std::vector<double> nonforced_u_values(const SectionSpace& s,
                                       const Divisor& d) {
  std::vector<double> out;
  for (const auto& [pt, m] : d.points) {
    int forced = 0;
    for (std::size_t j = 0; j < s.poles.size(); ++j)
      if (chordal_sigma(pt, s.poles.poles()[j].point) < 1e-12)
        forced = s.thresholds[j];
    for (int c = forced; c < m; ++c) out.push_back(pt.u());
  }
  return out;
}

double u_ks(std::vector<double> u, const std::function<double(double)>& cdf) {
  if (u.empty()) return 0.0;
  std::sort(u.begin(), u.end());
  double ks = 0;
  const double n = static_cast<double>(u.size());
  for (std::size_t i = 0; i < u.size();) {
    std::size_t j = i;
    while (j < u.size() && u[j] == u[i]) ++j;
    double F = cdf(u[i]);
    ks = std::max(ks, std::abs(i / n - F));
    ks = std::max(ks, std::abs(j / n - F));
    i = j;
  }
  return ks;
}

}  // namespace pbk
