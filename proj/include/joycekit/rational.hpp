#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "joycekit/errors.hpp"

namespace joycekit {

// Exact rational over checked __int128.  Every product and sum is tested for
// overflow and throws Overflow instead of wrapping; values are kept reduced
// with the sign on the numerator.
class Rational {
 public:
  using Int = __int128;

  Rational() = default;
  Rational(long long v) : num_(v), den_(1) {}  // NOLINT: implicit by design
  Rational(long long n, long long d) : num_(n), den_(d) { normalize(); }

  static Rational from_parts(Int n, Int d) {
    Rational r;
    r.num_ = n;
    r.den_ = d;
    r.normalize();
    return r;
  }

  Int num() const { return num_; }
  Int den() const { return den_; }
  bool is_zero() const { return num_ == 0; }
  bool is_one() const { return num_ == 1 && den_ == 1; }

  friend Rational operator+(const Rational& a, const Rational& b) {
    return from_parts(add_chk(mul_chk(a.num_, b.den_), mul_chk(b.num_, a.den_)),
                      mul_chk(a.den_, b.den_));
  }
  friend Rational operator-(const Rational& a, const Rational& b) {
    return from_parts(sub_chk(mul_chk(a.num_, b.den_), mul_chk(b.num_, a.den_)),
                      mul_chk(a.den_, b.den_));
  }
  friend Rational operator*(const Rational& a, const Rational& b) {
    return from_parts(mul_chk(a.num_, b.num_), mul_chk(a.den_, b.den_));
  }
  friend Rational operator/(const Rational& a, const Rational& b) {
    if (b.num_ == 0) throw Error("rational division by zero");
    return from_parts(mul_chk(a.num_, b.den_), mul_chk(a.den_, b.num_));
  }
  Rational operator-() const { return from_parts(-num_, den_); }

  Rational& operator+=(const Rational& b) { return *this = *this + b; }
  Rational& operator-=(const Rational& b) { return *this = *this - b; }
  Rational& operator*=(const Rational& b) { return *this = *this * b; }
  Rational& operator/=(const Rational& b) { return *this = *this / b; }

  friend bool operator==(const Rational& a, const Rational& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  friend bool operator!=(const Rational& a, const Rational& b) { return !(a == b); }
  friend bool operator<(const Rational& a, const Rational& b) {
    return mul_chk(a.num_, b.den_) < mul_chk(b.num_, a.den_);
  }

  double to_double() const {
    return static_cast<double>(num_) / static_cast<double>(den_);
  }

  std::string to_string() const {
    std::string s = int_to_string(num_);
    if (den_ != 1) s += "/" + int_to_string(den_);
    return s;
  }

  static std::string int_to_string(Int v) {
    if (v == 0) return "0";
    bool neg = v < 0;
    // -2^127 stays representable because digits are peeled off the negated
    // magnitude one at a time.
    unsigned __int128 m = neg ? (~static_cast<unsigned __int128>(v)) + 1
                              : static_cast<unsigned __int128>(v);
    std::string s;
    while (m > 0) {
      s.push_back(static_cast<char>('0' + static_cast<int>(m % 10)));
      m /= 10;
    }
    if (neg) s.push_back('-');
    return std::string(s.rbegin(), s.rend());
  }

 private:
  Int num_ = 0;
  Int den_ = 1;

  static Int add_chk(Int a, Int b) {
    Int r;
    if (__builtin_add_overflow(a, b, &r)) throw Overflow("rational add overflow");
    return r;
  }
  static Int sub_chk(Int a, Int b) {
    Int r;
    if (__builtin_sub_overflow(a, b, &r)) throw Overflow("rational sub overflow");
    return r;
  }
  static Int mul_chk(Int a, Int b) {
    Int r;
    if (__builtin_mul_overflow(a, b, &r)) throw Overflow("rational mul overflow");
    return r;
  }
  static Int gcd_int(Int a, Int b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b != 0) {
      Int t = a % b;
      a = b;
      b = t;
    }
    return a;
  }

  void normalize() {
    if (den_ == 0) throw Error("rational with zero denominator");
    if (num_ == 0) {
      den_ = 1;
      return;
    }
    if (den_ < 0) {
      num_ = -num_;
      den_ = -den_;
    }
    Int g = gcd_int(num_, den_);
    num_ /= g;
    den_ /= g;
  }
};

// Exact Gauss-Jordan inverse.  Throws NonInvertible when the matrix is
// singular over the rationals.
inline std::vector<std::vector<Rational>> rational_inverse(
    std::vector<std::vector<Rational>> a) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (int i = 0; i < n; ++i) inv[i][i] = Rational(1);
  for (int col = 0; col < n; ++col) {
    int piv = -1;
    for (int r = col; r < n; ++r) {
      if (!a[r][col].is_zero()) {
        piv = r;
        break;
      }
    }
    if (piv < 0) throw NonInvertible("matrix is singular over the rationals");
    std::swap(a[piv], a[col]);
    std::swap(inv[piv], inv[col]);
    Rational p = a[col][col];
    for (int c = 0; c < n; ++c) {
      a[col][c] /= p;
      inv[col][c] /= p;
    }
    for (int r = 0; r < n; ++r) {
      if (r == col || a[r][col].is_zero()) continue;
      Rational f = a[r][col];
      for (int c = 0; c < n; ++c) {
        a[r][c] -= f * a[col][c];
        inv[r][c] -= f * inv[col][c];
      }
    }
  }
  return inv;
}

}  // namespace joycekit
