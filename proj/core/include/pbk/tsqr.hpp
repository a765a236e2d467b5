// Streaming tall-skinny QR: rows arrive in blocks, only the n x n upper
// factor R is kept, so the full evaluation matrix is never stored.  The
// scalar type is a template parameter so the ill-conditioned retry can run
// the identical algorithm in extended precision.
#pragma once
#include <vector>

#include "pbk/xreal.hpp"

namespace pbk {

template <class T>
class StreamingQR {
 public:
  explicit StreamingQR(int n, int block_rows = 2048)
      : n_(n), cap_(n + block_rows), rows_(n), a_(static_cast<std::size_t>(cap_) * n) {
    for (auto& v : a_) v = cx<T>(T(0), T(0));
  }

  int n() const { return n_; }

  // append one row of length n
  void push_row(const cx<T>* row) {
    cx<T>* dst = &a_[static_cast<std::size_t>(rows_) * n_];
    for (int j = 0; j < n_; ++j) dst[j] = row[j];
    ++rows_;
    if (rows_ == cap_) compress();
  }

  // reduce the buffer back to an n x n triangle
  void finalize() { compress(); }

  // R with nonnegative real diagonal (row phases normalized); row-major n x n
  std::vector<cx<T>> triangle() const {
    std::vector<cx<T>> r(static_cast<std::size_t>(n_) * n_);
    for (int i = 0; i < n_; ++i) {
      cx<T> d = a_[static_cast<std::size_t>(i) * n_ + i];
      T ad = cx_abs(d);
      cx<T> ph = (ad > T(0)) ? cx<T>(d.re / ad, -d.im / ad) : cx<T>(T(1), T(0));
      for (int j = 0; j < n_; ++j)
        r[static_cast<std::size_t>(i) * n_ + j] =
            (j < i) ? cx<T>(T(0), T(0))
                    : ph * a_[static_cast<std::size_t>(i) * n_ + j];
    }
    return r;
  }

 private:
  // Householder QR of the current rows_ x n_ buffer in place; afterwards
  // the triangle occupies the leading n_ rows and rows_ = n_.
  void compress() {
    using std::sqrt;
    const int m = rows_;
    if (m <= n_) return;
    for (int kcol = 0; kcol < n_; ++kcol) {
      cx<T>* colk = &a_[0];
      // norm of the active column segment
      T s2 = T(0);
      for (int i = kcol; i < m; ++i)
        s2 += abs2(colk[static_cast<std::size_t>(i) * n_ + kcol]);
      T nrm = sqrt(s2);
      if (!(nrm > T(0))) continue;
      cx<T>& akk = colk[static_cast<std::size_t>(kcol) * n_ + kcol];
      T aa = cx_abs(akk);
      cx<T> phase = (aa > T(0)) ? cx<T>(akk.re / aa, akk.im / aa) : cx<T>(T(1), T(0));
      cx<T> alpha = cx<T>(-nrm, T(0)) * phase;  // reflected diagonal
      // v = x - alpha e1, beta = 2 / |v|^2
      cx<T> v0 = akk - alpha;
      T v0n = abs2(v0);
      T vnorm2 = s2 - aa * aa + v0n;  // |x|^2 with x0 replaced by v0
      if (!(vnorm2 > T(0))) {
        akk = alpha;
        continue;
      }
      T beta = T(2) / vnorm2;
      // store v implicitly: diagonal slot keeps v0 during the update
      akk = v0;
      for (int j = kcol + 1; j < n_; ++j) {
        // w = beta * v^H a_j
        cx<T> w(T(0), T(0));
        for (int i = kcol; i < m; ++i)
          w += conj(colk[static_cast<std::size_t>(i) * n_ + kcol]) *
               colk[static_cast<std::size_t>(i) * n_ + j];
        w = beta * w;
        for (int i = kcol; i < m; ++i)
          colk[static_cast<std::size_t>(i) * n_ + j] -=
              colk[static_cast<std::size_t>(i) * n_ + kcol] * w;
      }
      akk = alpha;
      for (int i = kcol + 1; i < m; ++i)
        colk[static_cast<std::size_t>(i) * n_ + kcol] = cx<T>(T(0), T(0));
    }
    rows_ = n_;
  }

  int n_, cap_, rows_;
  std::vector<cx<T>> a_;
};

// Solve R x = e_j for all j: returns row-major n x n inverse of an upper
// triangular matrix.
template <class T>
std::vector<cx<T>> invert_upper(const std::vector<cx<T>>& r, int n) {
  std::vector<cx<T>> inv(static_cast<std::size_t>(n) * n, cx<T>(T(0), T(0)));
  for (int j = 0; j < n; ++j) {
    for (int i = j; i >= 0; --i) {
      cx<T> s = (i == j) ? cx<T>(T(1), T(0)) : cx<T>(T(0), T(0));
      for (int l = i + 1; l <= j; ++l)
        s -= r[static_cast<std::size_t>(i) * n + l] * inv[static_cast<std::size_t>(l) * n + j];
      inv[static_cast<std::size_t>(i) * n + j] = s / r[static_cast<std::size_t>(i) * n + i];
    }
  }
  return inv;
}

}  // namespace pbk
