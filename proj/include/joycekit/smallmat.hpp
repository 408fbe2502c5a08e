#pragma once

#include <algorithm>
#include <complex>
#include <utility>
#include <vector>

#include "joycekit/errors.hpp"

namespace joycekit {

inline double mat_abs(const std::complex<double>& a) { return std::abs(a); }

// Dense row-major matrix over any complex-like scalar with +, -, *, / and a
// mat_abs overload.  Sized for the handful-of-dimensions linear problems the
// kit deals in; no expression templates, no views.
template <class C>
struct SmallMat {
  int rows = 0, cols = 0;
  std::vector<C> a;

  SmallMat() = default;
  SmallMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, C(0.0)) {}

  C& operator()(int r, int c) { return a[static_cast<size_t>(r) * cols + c]; }
  const C& operator()(int r, int c) const {
    return a[static_cast<size_t>(r) * cols + c];
  }

  static SmallMat identity(int n) {
    SmallMat m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = C(1.0);
    return m;
  }
};

template <class C>
SmallMat<C> operator+(const SmallMat<C>& x, const SmallMat<C>& y) {
  SmallMat<C> r = x;
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] += y.a[k];
  return r;
}

template <class C>
SmallMat<C> operator-(const SmallMat<C>& x, const SmallMat<C>& y) {
  SmallMat<C> r = x;
  for (size_t k = 0; k < r.a.size(); ++k) r.a[k] -= y.a[k];
  return r;
}

template <class C>
SmallMat<C> operator*(double s, const SmallMat<C>& x) {
  SmallMat<C> r = x;
  for (auto& v : r.a) v = s * v;
  return r;
}

template <class C>
SmallMat<C> operator*(const C& s, const SmallMat<C>& x) {
  SmallMat<C> r = x;
  for (auto& v : r.a) v = s * v;
  return r;
}

template <class C>
SmallMat<C> operator*(const SmallMat<C>& x, const SmallMat<C>& y) {
  SmallMat<C> r(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      C v = x(i, k);
      for (int j = 0; j < y.cols; ++j) r(i, j) += v * y(k, j);
    }
  return r;
}

template <class C>
double max_abs(const SmallMat<C>& x) {
  double m = 0.0;
  for (const auto& v : x.a) m = std::max(m, mat_abs(v));
  return m;
}

// Solves A X = B by partial-pivoted elimination; A and B are copied.
template <class C>
SmallMat<C> lu_solve(SmallMat<C> A, SmallMat<C> B) {
  const int n = A.rows;
  for (int col = 0; col < n; ++col) {
    int piv = col;
    double best = mat_abs(A(col, col));
    for (int r = col + 1; r < n; ++r) {
      double cand = mat_abs(A(r, col));
      if (cand > best) {
        best = cand;
        piv = r;
      }
    }
    if (best == 0.0) throw NonInvertible("singular matrix in solve");
    if (piv != col) {
      for (int c = 0; c < n; ++c) std::swap(A(piv, c), A(col, c));
      for (int c = 0; c < B.cols; ++c) std::swap(B(piv, c), B(col, c));
    }
    for (int r = col + 1; r < n; ++r) {
      C f = A(r, col) / A(col, col);
      for (int c = col; c < n; ++c) A(r, c) -= f * A(col, c);
      for (int c = 0; c < B.cols; ++c) B(r, c) -= f * B(col, c);
    }
  }
  SmallMat<C> X(n, B.cols);
  for (int r = n - 1; r >= 0; --r)
    for (int c = 0; c < B.cols; ++c) {
      C s = B(r, c);
      for (int k = r + 1; k < n; ++k) s -= A(r, k) * X(k, c);
      X(r, c) = s / A(r, r);
    }
  return X;
}

template <class C>
SmallMat<C> inverse(const SmallMat<C>& A) {
  return lu_solve(A, SmallMat<C>::identity(A.rows));
}

}  // namespace joycekit
