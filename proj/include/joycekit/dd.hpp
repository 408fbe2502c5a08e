#pragma once

#include <cmath>
#include <complex>
#include <cstdlib>

namespace joycekit {

// Unevaluated double-double sum hi + lo with |lo| <= ulp(hi)/2.  Gives about
// 106 significand bits.  Only the operations the kit needs are provided.
struct dd {
  double hi = 0.0;
  double lo = 0.0;

  constexpr dd() = default;
  constexpr dd(double h) : hi(h), lo(0.0) {}
  constexpr dd(double h, double l) : hi(h), lo(l) {}
};

namespace detail_dd {

inline dd quick_two_sum(double a, double b) {
  double s = a + b;
  return {s, b - (s - a)};
}

inline dd two_sum(double a, double b) {
  double s = a + b;
  double bb = s - a;
  return {s, (a - (s - bb)) + (b - bb)};
}

inline dd two_prod(double a, double b) {
  double p = a * b;
  return {p, std::fma(a, b, -p)};
}

}  // namespace detail_dd

inline dd operator+(dd a, dd b) {
  using namespace detail_dd;
  dd s = two_sum(a.hi, b.hi);
  dd t = two_sum(a.lo, b.lo);
  s.lo += t.hi;
  s = quick_two_sum(s.hi, s.lo);
  s.lo += t.lo;
  return quick_two_sum(s.hi, s.lo);
}

inline dd operator-(dd a) { return {-a.hi, -a.lo}; }
inline dd operator-(dd a, dd b) { return a + (-b); }

inline dd operator*(dd a, dd b) {
  using namespace detail_dd;
  dd p = two_prod(a.hi, b.hi);
  p.lo += a.hi * b.lo + a.lo * b.hi;
  return quick_two_sum(p.hi, p.lo);
}

inline dd operator*(dd a, double b) { return a * dd(b); }
inline dd operator*(double a, dd b) { return dd(a) * b; }

inline dd operator/(dd a, dd b) {
  using namespace detail_dd;
  double q1 = a.hi / b.hi;
  dd r = a - b * q1;
  double q2 = r.hi / b.hi;
  r = r - b * q2;
  double q3 = r.hi / b.hi;
  dd q = quick_two_sum(q1, q2);
  return q + dd(q3);
}

inline dd operator/(dd a, double b) { return a / dd(b); }

inline dd& operator+=(dd& a, dd b) { return a = a + b; }
inline dd& operator-=(dd& a, dd b) { return a = a - b; }
inline dd& operator*=(dd& a, dd b) { return a = a * b; }
inline dd& operator/=(dd& a, dd b) { return a = a / b; }

inline bool operator==(dd a, dd b) { return a.hi == b.hi && a.lo == b.lo; }
inline bool operator!=(dd a, dd b) { return !(a == b); }
inline bool operator<(dd a, dd b) {
  return a.hi < b.hi || (a.hi == b.hi && a.lo < b.lo);
}
inline bool operator>(dd a, dd b) { return b < a; }
inline bool operator<=(dd a, dd b) { return !(b < a); }
inline bool operator>=(dd a, dd b) { return !(a < b); }

inline double to_double(dd a) { return a.hi + a.lo; }
inline dd abs_dd(dd a) { return a.hi < 0.0 || (a.hi == 0.0 && a.lo < 0.0) ? -a : a; }

inline constexpr dd DD_PI{3.141592653589793116e+00, 1.224646799147353207e-16};
inline constexpr dd DD_2PI{6.283185307179586232e+00, 2.449293598294706414e-16};
inline constexpr dd DD_PI2{1.570796326794896558e+00, 6.123233995736766036e-17};
inline constexpr dd DD_LN2{6.931471805599452862e-01, 2.319046813846299558e-17};
inline constexpr dd DD_E{2.718281828459045091e+00, 1.445646891729250158e-16};

inline dd ldexp_dd(dd a, int k) { return {std::ldexp(a.hi, k), std::ldexp(a.lo, k)}; }

inline dd sqrt_dd(dd a) {
  if (a.hi == 0.0 && a.lo == 0.0) return dd(0.0);
  double x = 1.0 / std::sqrt(a.hi);
  double y = a.hi * x;
  dd yd(y);
  dd err = a - yd * yd;
  return yd + dd(err.hi * (0.5 * x));
}

inline dd exp_dd(dd a) {
  double da = to_double(a);
  if (da > 690.0) return dd(std::exp(da));
  if (da < -690.0) return dd(0.0);
  double m = std::round(da / DD_LN2.hi);
  dd r = a - DD_LN2 * m;
  r = ldexp_dd(r, -9);
  dd sum(1.0), term(1.0);
  for (int j = 1; j <= 12; ++j) {
    term = term * r / static_cast<double>(j);
    sum += term;
    if (std::abs(term.hi) < 1e-35) break;
  }
  for (int j = 0; j < 9; ++j) sum = sum * sum;
  return ldexp_dd(sum, static_cast<int>(m));
}

inline dd log_dd(dd a) {
  dd x(std::log(a.hi));
  for (int it = 0; it < 2; ++it) x = x + a * exp_dd(-x) - dd(1.0);
  return x;
}

// sin and cos together after reduction to |r| <= pi/4 plus rounding slack.
inline void sincos_dd(dd x, dd& s, dd& c) {
  double n = std::round(to_double(x) / DD_2PI.hi);
  dd x2 = x - DD_2PI * n;
  double qd = std::round(to_double(x2) / DD_PI2.hi);
  int q = static_cast<int>(qd);
  dd r = x2 - DD_PI2 * qd;

  dd r2 = r * r;
  dd st = r, ssum = r;
  for (int k = 1; k <= 14; ++k) {
    st = -(st * r2) / static_cast<double>((2 * k) * (2 * k + 1));
    ssum += st;
    if (std::abs(st.hi) < 1e-35) break;
  }
  dd csum = sqrt_dd(dd(1.0) - ssum * ssum);

  switch (((q % 4) + 4) % 4) {
    case 0: s = ssum; c = csum; break;
    case 1: s = csum; c = -ssum; break;
    case 2: s = -ssum; c = -csum; break;
    default: s = -csum; c = ssum; break;
  }
}

inline dd sin_dd(dd x) {
  dd s, c;
  sincos_dd(x, s, c);
  return s;
}

inline dd cos_dd(dd x) {
  dd s, c;
  sincos_dd(x, s, c);
  return c;
}

// Complex numbers over dd.
struct qcomplex {
  dd re, im;

  qcomplex() = default;
  qcomplex(double r) : re(r), im(0.0) {}
  qcomplex(dd r, dd i) : re(r), im(i) {}
  qcomplex(const std::complex<double>& z) : re(z.real()), im(z.imag()) {}
};

inline qcomplex operator+(qcomplex a, qcomplex b) { return {a.re + b.re, a.im + b.im}; }
inline qcomplex operator-(qcomplex a, qcomplex b) { return {a.re - b.re, a.im - b.im}; }
inline qcomplex operator-(qcomplex a) { return {-a.re, -a.im}; }
inline qcomplex operator*(qcomplex a, qcomplex b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
inline qcomplex operator*(double a, qcomplex b) { return {a * b.re, a * b.im}; }
inline qcomplex operator*(qcomplex a, double b) { return b * a; }
inline qcomplex operator/(qcomplex a, qcomplex b) {
  dd den = b.re * b.re + b.im * b.im;
  return {(a.re * b.re + a.im * b.im) / den, (a.im * b.re - a.re * b.im) / den};
}
inline qcomplex& operator+=(qcomplex& a, qcomplex b) { return a = a + b; }
inline qcomplex& operator-=(qcomplex& a, qcomplex b) { return a = a - b; }
inline qcomplex& operator*=(qcomplex& a, qcomplex b) { return a = a * b; }
inline bool operator==(qcomplex a, qcomplex b) { return a.re == b.re && a.im == b.im; }
inline bool operator!=(qcomplex a, qcomplex b) { return !(a == b); }

inline qcomplex qconj(qcomplex a) { return {a.re, -a.im}; }
inline dd qabs(qcomplex a) { return sqrt_dd(a.re * a.re + a.im * a.im); }
inline qcomplex qcis(dd theta) {
  dd s, c;
  sincos_dd(theta, s, c);
  return {c, s};
}
inline qcomplex qexp(qcomplex a) {
  dd m = exp_dd(a.re);
  qcomplex rot = qcis(a.im);
  return {m * rot.re, m * rot.im};
}
inline std::complex<double> to_cx(qcomplex a) {
  return {to_double(a.re), to_double(a.im)};
}

inline double mat_abs(const qcomplex& a) { return std::hypot(a.re.hi, a.im.hi); }

}  // namespace joycekit
