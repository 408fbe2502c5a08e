#include "joycekit/wallcross.hpp"

#include <cstddef>
#include <utility>

namespace joycekit {

namespace {

int key_degree(const std::vector<int>& alpha) {
  int d = 0;
  for (int a : alpha) d += a;
  return d;
}

void prune_zeros(ConeSeries& s) {
  for (auto it = s.coef.begin(); it != s.coef.end();) {
    if (it->second.is_zero()) {
      it = s.coef.erase(it);
    } else {
      ++it;
    }
  }
}

void require_compatible(const ConeSeries& a, const ConeSeries& b) {
  if (a.rank != b.rank || a.trunc != b.trunc) {
    throw IncompatibleTruncation(
        "series operands carry different rank or truncation order");
  }
}

void require_compatible(const TorusAutomorphism& a,
                        const TorusAutomorphism& b) {
  if (a.rank != b.rank || a.trunc != b.trunc) {
    throw IncompatibleTruncation(
        "automorphism operands carry different rank or truncation order");
  }
}

Rational rational_abs(const Rational& r) {
  return r < Rational(0) ? -r : r;
}

}  // namespace

ChargeLattice make_lattice(std::vector<std::vector<long long>> pairing,
                           std::vector<int> sign) {
  const int n = static_cast<int>(pairing.size());
  if (n == 0) throw Error("charge lattice needs at least one generator");
  for (const auto& row : pairing) {
    if (static_cast<int>(row.size()) != n) {
      throw Error("pairing matrix must be square");
    }
  }
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (pairing[i][j] != -pairing[j][i]) {
        throw NotSkew("generator pairing must be antisymmetric");
      }
    }
  }
  if (static_cast<int>(sign.size()) != n) {
    throw Error("need one sign per generator");
  }
  for (int s : sign) {
    if (s != 1 && s != -1) throw Error("generator signs must be +1 or -1");
  }
  ChargeLattice L;
  L.rank = n;
  L.pairing = std::move(pairing);
  L.sign = std::move(sign);
  return L;
}

long long pair_charges(const ChargeLattice& L, const std::vector<int>& a,
                       const std::vector<int>& b) {
  if (static_cast<int>(a.size()) != L.rank ||
      static_cast<int>(b.size()) != L.rank) {
    throw Error("charge length must match lattice rank");
  }
  long long acc = 0;
  for (int i = 0; i < L.rank; ++i) {
    if (a[i] == 0) continue;
    for (int j = 0; j < L.rank; ++j) {
      acc += static_cast<long long>(a[i]) * L.pairing[i][j] * b[j];
    }
  }
  return acc;
}

int sign_of_charge(const ChargeLattice& L, const std::vector<int>& gamma) {
  if (static_cast<int>(gamma.size()) != L.rank) {
    throw Error("charge length must match lattice rank");
  }
  long long parity = 0;
  for (int i = 0; i < L.rank; ++i) {
    if (L.sign[i] == -1 && (gamma[i] % 2 != 0)) parity += 1;
    for (int j = i + 1; j < L.rank; ++j) {
      parity += static_cast<long long>(gamma[i]) * gamma[j] * L.pairing[i][j];
    }
  }
  return (parity % 2 == 0) ? 1 : -1;
}

ConeSeries cone_one(int rank, int trunc) {
  if (rank < 1) throw Error("series rank must be positive");
  if (trunc < 1) throw TruncationTooSmall("truncation order must be >= 1");
  ConeSeries s;
  s.rank = rank;
  s.trunc = trunc;
  s.coef.emplace(std::vector<int>(rank, 0), Rational(1));
  return s;
}

ConeSeries cone_monomial(int rank, int trunc, const std::vector<int>& alpha,
                         const Rational& c) {
  if (rank < 1) throw Error("series rank must be positive");
  if (trunc < 1) throw TruncationTooSmall("truncation order must be >= 1");
  if (static_cast<int>(alpha.size()) != rank) {
    throw Error("monomial exponent length must match rank");
  }
  for (int a : alpha) {
    if (a < 0) throw ConeViolation("monomial exponents must be nonnegative");
  }
  ConeSeries s;
  s.rank = rank;
  s.trunc = trunc;
  if (!c.is_zero() && key_degree(alpha) <= trunc) s.coef.emplace(alpha, c);
  return s;
}

ConeSeries cs_add(const ConeSeries& a, const ConeSeries& b) {
  require_compatible(a, b);
  ConeSeries r = a;
  for (const auto& [key, c] : b.coef) {
    auto it = r.coef.find(key);
    if (it == r.coef.end()) {
      r.coef.emplace(key, c);
    } else {
      it->second = it->second + c;
    }
  }
  prune_zeros(r);
  return r;
}

ConeSeries cs_sub(const ConeSeries& a, const ConeSeries& b) {
  return cs_add(a, cs_scale(b, Rational(-1)));
}

ConeSeries cs_mul(const ConeSeries& a, const ConeSeries& b) {
  require_compatible(a, b);
  ConeSeries r;
  r.rank = a.rank;
  r.trunc = a.trunc;
  std::vector<int> key(a.rank, 0);
  for (const auto& [ka, ca] : a.coef) {
    const int da = key_degree(ka);
    for (const auto& [kb, cb] : b.coef) {
      if (da + key_degree(kb) > r.trunc) continue;
      for (int i = 0; i < r.rank; ++i) key[i] = ka[i] + kb[i];
      auto it = r.coef.find(key);
      if (it == r.coef.end()) {
        r.coef.emplace(key, ca * cb);
      } else {
        it->second = it->second + ca * cb;
      }
    }
  }
  prune_zeros(r);
  return r;
}

ConeSeries cs_scale(const ConeSeries& a, const Rational& c) {
  ConeSeries r;
  r.rank = a.rank;
  r.trunc = a.trunc;
  if (c.is_zero()) return r;
  for (const auto& [key, v] : a.coef) r.coef.emplace(key, v * c);
  return r;
}

ConeSeries cs_inverse(const ConeSeries& a) {
  const std::vector<int> zero(a.rank, 0);
  auto it = a.coef.find(zero);
  if (it == a.coef.end() || it->second.is_zero()) {
    throw NonInvertible("series with vanishing constant term has no inverse");
  }
  const Rational c = it->second;
  // a = c (1 - v) with v = (c - a)/c; inverse is (1/c) sum_j v^j.
  ConeSeries v = cs_scale(cs_sub(cone_monomial(a.rank, a.trunc, zero, c), a),
                          Rational(1) / c);
  ConeSeries acc = cone_one(a.rank, a.trunc);
  ConeSeries p = cone_one(a.rank, a.trunc);
  for (int j = 1; j <= a.trunc; ++j) {
    p = cs_mul(p, v);
    if (p.coef.empty()) break;
    acc = cs_add(acc, p);
  }
  return cs_scale(acc, Rational(1) / c);
}

ConeSeries cs_pow(const ConeSeries& a, long long k) {
  ConeSeries base = a;
  long long n = k;
  if (n < 0) {
    base = cs_inverse(a);
    n = -n;
  }
  ConeSeries acc = cone_one(a.rank, a.trunc);
  while (n > 0) {
    if (n & 1) acc = cs_mul(acc, base);
    base = cs_mul(base, base);
    n >>= 1;
  }
  return acc;
}

Rational cs_coeff(const ConeSeries& a, const std::vector<int>& alpha) {
  auto it = a.coef.find(alpha);
  return it == a.coef.end() ? Rational(0) : it->second;
}

Rational cs_max_abs(const ConeSeries& a) {
  Rational best(0);
  for (const auto& [key, c] : a.coef) {
    Rational m = rational_abs(c);
    if (best < m) best = m;
  }
  return best;
}

TorusAutomorphism identity_automorphism(int rank, int trunc) {
  TorusAutomorphism f;
  f.rank = rank;
  f.trunc = trunc;
  f.image.assign(static_cast<size_t>(rank), cone_one(rank, trunc));
  return f;
}

TorusAutomorphism weighted_wall(const ChargeLattice& L, const Rational& w,
                                const std::vector<int>& gamma, long long omega,
                                int trunc) {
  if (trunc < 1) throw TruncationTooSmall("truncation order must be >= 1");
  if (static_cast<int>(gamma.size()) != L.rank) {
    throw ConeViolation("wall charge length must match lattice rank");
  }
  bool nonzero = false;
  for (int g : gamma) {
    if (g < 0) throw ConeViolation("wall charge must lie in the positive cone");
    if (g != 0) nonzero = true;
  }
  if (!nonzero) throw ConeViolation("wall charge must be nonzero");

  ConeSeries base = cs_add(cone_one(L.rank, trunc),
                           cone_monomial(L.rank, trunc, gamma, w));
  TorusAutomorphism f;
  f.rank = L.rank;
  f.trunc = trunc;
  f.image.reserve(static_cast<size_t>(L.rank));
  std::vector<int> e(L.rank, 0);
  for (int i = 0; i < L.rank; ++i) {
    e.assign(L.rank, 0);
    e[i] = 1;
    f.image.push_back(cs_pow(base, omega * pair_charges(L, gamma, e)));
  }
  return f;
}

TorusAutomorphism wall_automorphism(const ChargeLattice& L,
                                    const std::vector<int>& gamma,
                                    long long omega, int trunc) {
  if (static_cast<int>(gamma.size()) != L.rank) {
    throw ConeViolation("wall charge length must match lattice rank");
  }
  // The canonical weight is minus the refinement sign: for <a,b> odd the
  // refinement satisfies s(a+b) = -s(a)s(b), so w = -s is multiplicative on
  // such pairs, which is exactly what consecutive-wall identities require.
  return weighted_wall(L, Rational(-sign_of_charge(L, gamma)), gamma, omega,
                       trunc);
}

TorusAutomorphism torus_shift(const std::vector<Rational>& lambda, int trunc) {
  const int rank = static_cast<int>(lambda.size());
  if (rank < 1) throw Error("torus shift needs at least one scale");
  if (trunc < 1) throw TruncationTooSmall("truncation order must be >= 1");
  TorusAutomorphism f;
  f.rank = rank;
  f.trunc = trunc;
  f.image.reserve(static_cast<size_t>(rank));
  const std::vector<int> zero(rank, 0);
  for (const Rational& s : lambda) {
    if (s.is_zero()) throw NonInvertible("torus shift scales must be nonzero");
    f.image.push_back(cone_monomial(rank, trunc, zero, s));
  }
  return f;
}

ConeSeries apply_to_character(const TorusAutomorphism& f,
                              const std::vector<int>& mu) {
  if (static_cast<int>(mu.size()) != f.rank) {
    throw Error("character exponent length must match rank");
  }
  ConeSeries acc = cone_one(f.rank, f.trunc);
  for (int i = 0; i < f.rank; ++i) {
    if (mu[i] == 0) continue;
    acc = cs_mul(acc, cs_pow(f.image[static_cast<size_t>(i)], mu[i]));
  }
  return acc;
}

TorusAutomorphism compose(const TorusAutomorphism& f,
                          const TorusAutomorphism& g) {
  require_compatible(f, g);
  // (f after g)(X_{e_i}) = f(X_{e_i} * G_i) = X_{e_i} * F_i * f(G_i), where
  // f substitutes X^alpha -> X^alpha * prod_j F_j^{alpha_j} in G_i.
  // Cache the character factors so repeated exponents cost one lookup.
  std::map<std::vector<int>, ConeSeries> factor_cache;
  auto substituted = [&](const ConeSeries& s) {
    ConeSeries out;
    out.rank = f.rank;
    out.trunc = f.trunc;
    for (const auto& [alpha, c] : s.coef) {
      auto it = factor_cache.find(alpha);
      if (it == factor_cache.end()) {
        it = factor_cache.emplace(alpha, apply_to_character(f, alpha)).first;
      }
      ConeSeries term =
          cs_mul(cone_monomial(f.rank, f.trunc, alpha, c), it->second);
      out = cs_add(out, term);
    }
    return out;
  };

  TorusAutomorphism h;
  h.rank = f.rank;
  h.trunc = f.trunc;
  h.image.reserve(static_cast<size_t>(f.rank));
  for (int i = 0; i < f.rank; ++i) {
    h.image.push_back(cs_mul(f.image[static_cast<size_t>(i)],
                             substituted(g.image[static_cast<size_t>(i)])));
  }
  return h;
}

bool same_automorphism(const TorusAutomorphism& a, const TorusAutomorphism& b) {
  require_compatible(a, b);
  for (int i = 0; i < a.rank; ++i) {
    if (a.image[static_cast<size_t>(i)].coef !=
        b.image[static_cast<size_t>(i)].coef) {
      return false;
    }
  }
  return true;
}

Rational automorphism_defect(const TorusAutomorphism& a,
                             const TorusAutomorphism& b) {
  require_compatible(a, b);
  Rational best(0);
  for (int i = 0; i < a.rank; ++i) {
    Rational m = cs_max_abs(cs_sub(a.image[static_cast<size_t>(i)],
                                   b.image[static_cast<size_t>(i)]));
    if (best < m) best = m;
  }
  return best;
}

Rational poisson_defect(const ChargeLattice& L, const TorusAutomorphism& f,
                        const std::vector<int>& mu,
                        const std::vector<int>& nu) {
  if (L.rank != f.rank) {
    throw IncompatibleTruncation("lattice and automorphism rank differ");
  }
  const ConeSeries P = apply_to_character(f, mu);
  const ConeSeries Q = apply_to_character(f, nu);

  // {X^mu P, X^nu Q} expands monomial by monomial; both sides share the
  // prefix X^{mu+nu}, so compare the series factors directly.
  ConeSeries bracket;
  bracket.rank = f.rank;
  bracket.trunc = f.trunc;
  std::vector<int> shifted_a(f.rank, 0);
  std::vector<int> shifted_b(f.rank, 0);
  std::vector<int> key(f.rank, 0);
  for (const auto& [alpha, ca] : P.coef) {
    const int da = key_degree(alpha);
    for (int i = 0; i < f.rank; ++i) shifted_a[i] = mu[i] + alpha[i];
    for (const auto& [beta, cb] : Q.coef) {
      if (da + key_degree(beta) > f.trunc) continue;
      for (int i = 0; i < f.rank; ++i) {
        shifted_b[i] = nu[i] + beta[i];
        key[i] = alpha[i] + beta[i];
      }
      const Rational w =
          ca * cb * Rational(pair_charges(L, shifted_a, shifted_b));
      if (w.is_zero()) continue;
      auto it = bracket.coef.find(key);
      if (it == bracket.coef.end()) {
        bracket.coef.emplace(key, w);
      } else {
        it->second = it->second + w;
      }
    }
  }
  prune_zeros(bracket);

  std::vector<int> sum(f.rank, 0);
  for (int i = 0; i < f.rank; ++i) sum[i] = mu[i] + nu[i];
  const ConeSeries target = cs_scale(apply_to_character(f, sum),
                                     Rational(pair_charges(L, mu, nu)));
  return cs_max_abs(cs_sub(bracket, target));
}

}  // namespace joycekit
