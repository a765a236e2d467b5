// Extended-precision scalar (quad mantissa >= 2x double) for the
// ill-conditioned retry path, plus a minimal complex type usable with
// either scalar.  With no __float128 support the shim degrades to
// long double.
#pragma once
#include <cmath>

#ifdef PBK_HAVE_FLOAT128
#include <quadmath.h>
#endif

namespace pbk {

#ifdef PBK_HAVE_FLOAT128

struct xreal {
  __float128 v = 0;
  xreal() = default;
  xreal(int i) : v(i) {}  // disambiguates T(0) in templated code
  xreal(double d) : v(d) {}
  xreal(__float128 q) : v(q) {}
  explicit operator double() const { return static_cast<double>(v); }
  xreal operator-() const { return xreal(-v); }
  xreal& operator+=(xreal o) { v += o.v; return *this; }
  xreal& operator-=(xreal o) { v -= o.v; return *this; }
  xreal& operator*=(xreal o) { v *= o.v; return *this; }
  xreal& operator/=(xreal o) { v /= o.v; return *this; }
  friend xreal operator+(xreal a, xreal b) { return xreal(a.v + b.v); }
  friend xreal operator-(xreal a, xreal b) { return xreal(a.v - b.v); }
  friend xreal operator*(xreal a, xreal b) { return xreal(a.v * b.v); }
  friend xreal operator/(xreal a, xreal b) { return xreal(a.v / b.v); }
  friend bool operator<(xreal a, xreal b) { return a.v < b.v; }
  friend bool operator>(xreal a, xreal b) { return a.v > b.v; }
  friend bool operator<=(xreal a, xreal b) { return a.v <= b.v; }
  friend bool operator>=(xreal a, xreal b) { return a.v >= b.v; }
  friend bool operator==(xreal a, xreal b) { return a.v == b.v; }
  friend xreal sqrt(xreal a) { return xreal(sqrtq(a.v)); }
  friend xreal exp(xreal a) { return xreal(expq(a.v)); }
  friend xreal log(xreal a) { return xreal(logq(a.v)); }
  friend xreal log1p(xreal a) { return xreal(log1pq(a.v)); }
  friend xreal sin(xreal a) { return xreal(sinq(a.v)); }
  friend xreal cos(xreal a) { return xreal(cosq(a.v)); }
  friend xreal atan2(xreal a, xreal b) { return xreal(atan2q(a.v, b.v)); }
  friend xreal fabs(xreal a) { return xreal(fabsq(a.v)); }
};

#else

using xreal = long double;

#endif

// Minimal complex value type; avoids std::complex so the same code path
// instantiates for double and xreal.
template <class T>
struct cx {
  T re{}, im{};
  cx() = default;
  cx(T r, T i) : re(r), im(i) {}
  explicit cx(T r) : re(r), im(T(0)) {}
  cx operator-() const { return {-re, -im}; }
  friend cx operator+(cx a, cx b) { return {a.re + b.re, a.im + b.im}; }
  friend cx operator-(cx a, cx b) { return {a.re - b.re, a.im - b.im}; }
  friend cx operator*(cx a, cx b) {
    return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
  }
  friend cx operator*(T s, cx a) { return {s * a.re, s * a.im}; }
  friend cx operator*(cx a, T s) { return {a.re * s, a.im * s}; }
  cx& operator+=(cx o) { re += o.re; im += o.im; return *this; }
  cx& operator-=(cx o) { re -= o.re; im -= o.im; return *this; }
  friend cx conj(cx a) { return {a.re, -a.im}; }
  friend T abs2(cx a) { return a.re * a.re + a.im * a.im; }
  friend cx operator/(cx a, cx b) {
    T d = abs2(b);
    cx n = a * conj(b);
    return {n.re / d, n.im / d};
  }
  friend cx operator/(cx a, T s) { return {a.re / s, a.im / s}; }
};

template <class T>
T cx_abs(cx<T> a) {
  using std::sqrt;
  return sqrt(abs2(a));
}

}  // namespace pbk
