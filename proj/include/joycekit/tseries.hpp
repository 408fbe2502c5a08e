#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <unordered_map>
#include <vector>

#include "joycekit/errors.hpp"

namespace joycekit {

// Shared layout for dense truncated multivariate polynomials: all exponent
// vectors with |alpha| <= order over a fixed variable count, graded-lex
// ordered, with a precomputed list of coefficient triples (i, j, k) such that
// alpha_i + alpha_j = alpha_k.  Tables are immutable and cached per shape.
class MultiIndexTable {
 public:
  struct MulTriple {
    int32_t i, j, k;
  };

  static constexpr int kMaxVars = 21;
  static constexpr int kMaxOrder = 7;

  MultiIndexTable(int vars, int order) : vars_(vars), order_(order) {
    if (vars < 1 || vars > kMaxVars || order < 0 || order > kMaxOrder)
      throw Error("series table shape out of range");
    std::vector<int> cur(vars, 0);
    for (int deg = 0; deg <= order; ++deg) emit(cur, 0, deg);
    if (count() > 200000) throw Error("series table too large");
    for (int32_t e = 0; e < count(); ++e) pos_[pack(exponents(e))] = e;
    for (int32_t i = 0; i < count(); ++i) {
      if (degree(i) > order) continue;
      for (int32_t j = 0; j < count(); ++j) {
        if (degree(i) + degree(j) > order) continue;
        std::vector<int> sum(vars);
        const uint8_t* a = exps_.data() + static_cast<size_t>(i) * vars_;
        const uint8_t* b = exps_.data() + static_cast<size_t>(j) * vars_;
        for (int v = 0; v < vars; ++v) sum[v] = a[v] + b[v];
        mul_.push_back({i, j, find(sum)});
      }
    }
  }

  int vars() const { return vars_; }
  int order() const { return order_; }
  int32_t count() const { return static_cast<int32_t>(exps_.size() / vars_); }
  const std::vector<MulTriple>& mul_triples() const { return mul_; }

  std::vector<int> exponents(int32_t e) const {
    std::vector<int> out(vars_);
    const uint8_t* p = exps_.data() + static_cast<size_t>(e) * vars_;
    for (int v = 0; v < vars_; ++v) out[v] = p[v];
    return out;
  }

  int degree(int32_t e) const { return deg_[e]; }

  // Position of an exponent vector, -1 when |alpha| exceeds the order.
  int32_t find(const std::vector<int>& alpha) const {
    int d = 0;
    for (int v : alpha) d += v;
    if (d > order_) return -1;
    auto it = pos_.find(pack(alpha));
    if (it == pos_.end()) throw Error("exponent vector outside table");
    return it->second;
  }

 private:
  int vars_, order_;
  std::vector<uint8_t> exps_;
  std::vector<int> deg_;
  std::unordered_map<uint64_t, int32_t> pos_;
  std::vector<MulTriple> mul_;

  void emit(std::vector<int>& cur, int v, int remaining) {
    if (v == vars_ - 1) {
      cur[v] = remaining;
      for (int x : cur) exps_.push_back(static_cast<uint8_t>(x));
      int d = 0;
      for (int x : cur) d += x;
      deg_.push_back(d);
      cur[v] = 0;
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      cur[v] = e;
      emit(cur, v + 1, remaining - e);
    }
    cur[v] = 0;
  }

  uint64_t pack(const std::vector<int>& alpha) const {
    uint64_t key = 0;
    for (int v = 0; v < vars_; ++v) key = (key << 3) | static_cast<uint64_t>(alpha[v] & 7);
    return key;
  }
};

inline std::shared_ptr<const MultiIndexTable> multiindex_table(int vars, int order) {
  static std::mutex mu;
  static std::map<std::pair<int, int>, std::shared_ptr<const MultiIndexTable>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto key = std::make_pair(vars, order);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  auto t = std::make_shared<const MultiIndexTable>(vars, order);
  cache.emplace(key, t);
  return t;
}

// Truncated multivariate Taylor expansion around an implicit base point:
// coefficient c[e] multiplies (x - x0)^alpha(e).  The scalar type is any
// complex-like field.
template <class C>
struct TaylorSeries {
  std::shared_ptr<const MultiIndexTable> top;
  std::vector<C> c;

  explicit TaylorSeries(std::shared_ptr<const MultiIndexTable> t)
      : top(std::move(t)), c(top->count(), C(0)) {}

  C constant() const { return c[0]; }
};

template <class C>
TaylorSeries<C> ts_const(std::shared_ptr<const MultiIndexTable> top, C v) {
  TaylorSeries<C> s(std::move(top));
  s.c[0] = v;
  return s;
}

// The coordinate function x_var expanded at base value v.
template <class C>
TaylorSeries<C> ts_var(std::shared_ptr<const MultiIndexTable> top, int var, C v) {
  TaylorSeries<C> s(std::move(top));
  s.c[0] = v;
  if (s.top->order() >= 1) {
    std::vector<int> alpha(s.top->vars(), 0);
    alpha[var] = 1;
    s.c[s.top->find(alpha)] = C(1);
  }
  return s;
}

template <class C>
void check_same(const TaylorSeries<C>& a, const TaylorSeries<C>& b) {
  if (a.top.get() != b.top.get()) throw Error("series share no table");
}

template <class C>
TaylorSeries<C> operator+(TaylorSeries<C> a, const TaylorSeries<C>& b) {
  check_same(a, b);
  for (size_t i = 0; i < a.c.size(); ++i) a.c[i] += b.c[i];
  return a;
}

template <class C>
TaylorSeries<C> operator-(TaylorSeries<C> a, const TaylorSeries<C>& b) {
  check_same(a, b);
  for (size_t i = 0; i < a.c.size(); ++i) a.c[i] -= b.c[i];
  return a;
}

template <class C>
TaylorSeries<C> operator-(TaylorSeries<C> a) {
  for (auto& x : a.c) x = -x;
  return a;
}

template <class C>
TaylorSeries<C> operator*(const TaylorSeries<C>& a, const TaylorSeries<C>& b) {
  check_same(a, b);
  TaylorSeries<C> r(a.top);
  for (const auto& t : a.top->mul_triples()) {
    const C& x = a.c[t.i];
    if (x == C(0)) continue;
    r.c[t.k] += x * b.c[t.j];
  }
  return r;
}

template <class C>
TaylorSeries<C> operator*(C s, TaylorSeries<C> a) {
  for (auto& x : a.c) x *= s;
  return a;
}

// f(a) for analytic f given the coefficients of f's own expansion at the
// constant term: sum_j coefs[j] * (a - a0)^j, evaluated by Horner.
template <class C>
TaylorSeries<C> ts_compose(const TaylorSeries<C>& a, const std::vector<C>& coefs) {
  TaylorSeries<C> abar = a;
  abar.c[0] = C(0);
  TaylorSeries<C> r = ts_const(a.top, coefs.back());
  for (int j = static_cast<int>(coefs.size()) - 2; j >= 0; --j) {
    r = r * abar;
    r.c[0] += coefs[j];
  }
  return r;
}

template <class C>
TaylorSeries<C> ts_inverse(const TaylorSeries<C>& a, double margin) {
  C a0 = a.constant();
  if (std::abs(a0) <= margin) throw PoleHit("division hits the declared pole margin");
  int K = a.top->order();
  std::vector<C> coefs(K + 1);
  C p = C(1) / a0;
  for (int j = 0; j <= K; ++j) {
    coefs[j] = (j % 2 == 0) ? p : -p;
    p /= a0;
  }
  return ts_compose(a, coefs);
}

template <class C>
TaylorSeries<C> operator/(const TaylorSeries<C>& a, const TaylorSeries<C>& b) {
  return a * ts_inverse(b, 0.0);
}

template <class C>
TaylorSeries<C> ts_exp(const TaylorSeries<C>& a) {
  int K = a.top->order();
  std::vector<C> coefs(K + 1);
  coefs[0] = std::exp(a.constant());
  for (int j = 1; j <= K; ++j) coefs[j] = coefs[j - 1] / C(static_cast<double>(j));
  return ts_compose(a, coefs);
}

template <class C>
TaylorSeries<C> ts_log(const TaylorSeries<C>& a, double margin) {
  C a0 = a.constant();
  if (std::abs(a0) <= margin) throw PoleHit("log argument hits the declared pole margin");
  int K = a.top->order();
  std::vector<C> coefs(K + 1);
  coefs[0] = std::log(a0);
  C p = C(1);
  for (int j = 1; j <= K; ++j) {
    p /= a0;
    coefs[j] = ((j % 2 == 1) ? p : -p) / C(static_cast<double>(j));
  }
  return ts_compose(a, coefs);
}

// Integer power by repeated multiplication; valid at any base value.
template <class C>
TaylorSeries<C> ts_powi(const TaylorSeries<C>& a, long long p, double margin) {
  if (p < 0) return ts_inverse(ts_powi(a, -p, margin), margin);
  TaylorSeries<C> r = ts_const(a.top, C(1));
  TaylorSeries<C> base = a;
  while (p > 0) {
    if (p & 1) r = r * base;
    base = base * base;
    p >>= 1;
  }
  return r;
}

// General power a^w via the binomial expansion; needs a0 away from 0.
template <class C>
TaylorSeries<C> ts_powc(const TaylorSeries<C>& a, C w, double margin) {
  C a0 = a.constant();
  if (std::abs(a0) <= margin) throw PoleHit("power base hits the declared pole margin");
  int K = a.top->order();
  std::vector<C> coefs(K + 1);
  coefs[0] = std::pow(a0, w);
  for (int j = 1; j <= K; ++j)
    coefs[j] = coefs[j - 1] * (w - C(static_cast<double>(j - 1))) /
               (C(static_cast<double>(j)) * a0);
  return ts_compose(a, coefs);
}

// Mixed partial of the represented function in the listed variable
// directions (repeats allowed): coefficient times alpha factorial.
template <class C>
C ts_partial(const TaylorSeries<C>& s, const std::vector<int>& dirs) {
  std::vector<int> alpha(s.top->vars(), 0);
  for (int d : dirs) ++alpha[d];
  int32_t e = s.top->find(alpha);
  if (e < 0) throw Error("partial order exceeds the jet order");
  double fact = 1.0;
  for (int v : alpha)
    for (int k = 2; k <= v; ++k) fact *= k;
  return s.c[e] * C(fact);
}

}  // namespace joycekit
