#include "joycekit/wallcross.hpp"

#include <vector>

#include "doctest.h"
#include "joycekit/errors.hpp"
#include "joycekit/rational.hpp"

using namespace joycekit;

namespace {

// Rank-2 lattice with <g1,g2> = 1 and sign -1 on both generators.
ChargeLattice pentagon_lattice() {
  return make_lattice({{0, 1}, {-1, 0}}, {-1, -1});
}

}  // namespace

TEST_CASE("charge lattice validates pairing and extends the sign") {
  CHECK_THROWS_AS(make_lattice({{0, 1}, {1, 0}}, {1, 1}), NotSkew);
  CHECK_THROWS_AS(make_lattice({{1, 0}, {0, 0}}, {1, 1}), NotSkew);
  CHECK_THROWS_AS(make_lattice({{0, 1}, {-1, 0}}, {1, 0}), Error);
  CHECK_THROWS_AS(make_lattice({{0, 1, 0}, {-1, 0, 0}}, {1, 1}), Error);

  const ChargeLattice L = pentagon_lattice();
  CHECK(pair_charges(L, {1, 0}, {0, 1}) == 1);
  CHECK(pair_charges(L, {0, 1}, {1, 0}) == -1);
  CHECK(pair_charges(L, {2, 3}, {5, 7}) == -1);

  CHECK(sign_of_charge(L, {1, 0}) == -1);
  CHECK(sign_of_charge(L, {0, 1}) == -1);
  CHECK(sign_of_charge(L, {1, 1}) == -1);
  CHECK(sign_of_charge(L, {2, 0}) == 1);
  CHECK(sign_of_charge(L, {1, 2}) == -1);

  // sign(a+b) = sign(a) sign(b) (-1)^{<a,b>} on a sample of charges.
  const std::vector<std::vector<int>> charges = {
      {1, 0}, {0, 1}, {1, 1}, {2, 1}, {1, 3}};
  for (const auto& a : charges) {
    for (const auto& b : charges) {
      std::vector<int> ab = {a[0] + b[0], a[1] + b[1]};
      const int twist = (pair_charges(L, a, b) % 2 == 0) ? 1 : -1;
      CHECK(sign_of_charge(L, ab) ==
            sign_of_charge(L, a) * sign_of_charge(L, b) * twist);
    }
  }
}

TEST_CASE("cone series arithmetic is exact in the truncated ring") {
  const int N = 6;
  const ConeSeries one = cone_one(2, N);
  const ConeSeries x = cone_monomial(2, N, {1, 0}, Rational(1));
  const ConeSeries y = cone_monomial(2, N, {0, 1}, Rational(1));

  // (1+x)(1-x) = 1 - x^2
  const ConeSeries prod =
      cs_mul(cs_add(one, x), cs_sub(one, x));
  CHECK(cs_coeff(prod, {0, 0}) == Rational(1));
  CHECK(cs_coeff(prod, {1, 0}) == Rational(0));
  CHECK(cs_coeff(prod, {2, 0}) == Rational(-1));
  CHECK(prod.coef.size() == 2);

  // binomial coefficients of (1+x)^5
  const ConeSeries p5 = cs_pow(cs_add(one, x), 5);
  const long long binom[6] = {1, 5, 10, 10, 5, 1};
  for (int k = 0; k <= 5; ++k) {
    CHECK(cs_coeff(p5, {k, 0}) == Rational(binom[k]));
  }

  // negative powers invert exactly in the quotient
  const ConeSeries u = cs_add(cs_add(one, x), y);
  CHECK(cs_max_abs(cs_sub(cs_mul(cs_pow(u, -3), cs_pow(u, 3)), one)) ==
        Rational(0));
  CHECK(cs_max_abs(cs_sub(cs_pow(u, 0), one)) == Rational(0));

  // geometric series from the inverse of 1 - x
  const ConeSeries geo = cs_inverse(cs_sub(one, x));
  for (int k = 0; k <= N; ++k) {
    CHECK(cs_coeff(geo, {k, 0}) == Rational(1));
  }

  CHECK_THROWS_AS(cs_inverse(x), NonInvertible);
  CHECK_THROWS_AS(cone_one(2, 0), TruncationTooSmall);
  CHECK_THROWS_AS(cone_monomial(2, N, {-1, 0}, Rational(1)), ConeViolation);

  const ConeSeries other = cone_one(2, N + 1);
  CHECK_THROWS_AS(cs_add(one, other), IncompatibleTruncation);
}

TEST_CASE("wall automorphism images follow the pairing exponents") {
  const ChargeLattice L = pentagon_lattice();
  const int N = 8;
  const TorusAutomorphism S1 = wall_automorphism(L, {1, 0}, 1, N);

  // <g1, g1> = 0 so the first character is fixed.
  CHECK(S1.image[0].coef.size() == 1);
  CHECK(cs_coeff(S1.image[0], {0, 0}) == Rational(1));
  // <g1, g2> = 1 and refinement sign -1 give the factor 1 + X^{g1}.
  CHECK(S1.image[1].coef.size() == 2);
  CHECK(cs_coeff(S1.image[1], {0, 0}) == Rational(1));
  CHECK(cs_coeff(S1.image[1], {1, 0}) == Rational(1));

  // negative character exponents go through the exact series inverse
  const ConeSeries inv = apply_to_character(S1, {0, -1});
  for (int k = 0; k <= 4; ++k) {
    CHECK(cs_coeff(inv, {k, 0}) == Rational(k % 2 == 0 ? 1 : -1));
  }
  CHECK(cs_max_abs(cs_sub(cs_mul(inv, apply_to_character(S1, {0, 1})),
                          cone_one(2, N))) == Rational(0));

  CHECK_THROWS_AS(wall_automorphism(L, {-1, 0}, 1, N), ConeViolation);
  CHECK_THROWS_AS(wall_automorphism(L, {0, 0}, 1, N), ConeViolation);
  CHECK_THROWS_AS(wall_automorphism(L, {1, 0, 0}, 1, N), ConeViolation);
  CHECK_THROWS_AS(wall_automorphism(L, {1, 0}, 1, 0), TruncationTooSmall);

  const TorusAutomorphism id = identity_automorphism(2, N);
  CHECK(same_automorphism(compose(S1, id), S1));
  CHECK(same_automorphism(compose(id, S1), S1));
  CHECK_THROWS_AS(compose(S1, identity_automorphism(2, N + 1)),
                  IncompatibleTruncation);
}

TEST_CASE("pentagon identity holds in exactly one bracketing") {
  const ChargeLattice L = pentagon_lattice();
  const int N = 12;
  const TorusAutomorphism S1 = wall_automorphism(L, {1, 0}, 1, N);
  const TorusAutomorphism S2 = wall_automorphism(L, {0, 1}, 1, N);
  const TorusAutomorphism S12 = wall_automorphism(L, {1, 1}, 1, N);

  // With compose(f, g) applying g first, the five-term identity reads
  // S1 after S2 equals S2 after S12 after S1.
  const TorusAutomorphism lhs = compose(S1, S2);
  const TorusAutomorphism rhs = compose(S2, compose(S12, S1));
  CHECK(same_automorphism(lhs, rhs));
  CHECK(automorphism_defect(lhs, rhs) == Rational(0));

  // The mirrored bracketing fails.
  const TorusAutomorphism lhs_m = compose(S2, S1);
  const TorusAutomorphism rhs_m = compose(S1, compose(S12, S2));
  CHECK_FALSE(same_automorphism(lhs_m, rhs_m));
  CHECK(Rational(0) < automorphism_defect(lhs_m, rhs_m));

  // The two walls do not commute on their own.
  CHECK_FALSE(same_automorphism(compose(S1, S2), compose(S2, S1)));
}

TEST_CASE("walls with null pairing commute exactly") {
  const ChargeLattice L = make_lattice(
      {{0, 0, 1}, {0, 0, -1}, {-1, 1, 0}}, {-1, -1, 1});
  const int N = 8;
  const TorusAutomorphism S1 = wall_automorphism(L, {1, 0, 0}, 1, N);
  const TorusAutomorphism S2 = wall_automorphism(L, {0, 1, 0}, 1, N);
  const TorusAutomorphism id = identity_automorphism(3, N);

  CHECK_FALSE(same_automorphism(S1, id));
  CHECK_FALSE(same_automorphism(S2, id));
  CHECK(same_automorphism(compose(S1, S2), compose(S2, S1)));
  CHECK(automorphism_defect(compose(S1, S2), compose(S2, S1)) == Rational(0));
}

TEST_CASE("wall automorphisms preserve the torus bracket exactly") {
  const ChargeLattice L = pentagon_lattice();
  const int N = 10;
  const TorusAutomorphism S1 = wall_automorphism(L, {1, 0}, 1, N);
  const TorusAutomorphism A = compose(wall_automorphism(L, {0, 1}, 1, N), S1);

  CHECK(poisson_defect(L, S1, {1, 0}, {0, 1}) == Rational(0));
  CHECK(poisson_defect(L, A, {1, 0}, {0, 1}) == Rational(0));
  CHECK(poisson_defect(L, A, {2, 1}, {1, 3}) == Rational(0));
  CHECK(poisson_defect(L, A, {1, -1}, {0, 1}) == Rational(0));

  // A multiplicative map that is not a wall flow fails the bracket test.
  TorusAutomorphism bad = identity_automorphism(2, N);
  bad.image[1] = cs_add(cone_one(2, N),
                        cone_monomial(2, N, {0, 1}, Rational(1)));
  CHECK(poisson_defect(L, bad, {1, 0}, {0, 1}) == Rational(1));
}

TEST_CASE("a corrupted coefficient is detected with its exact size") {
  const ChargeLattice L = pentagon_lattice();
  const int N = 12;
  const TorusAutomorphism S1 = wall_automorphism(L, {1, 0}, 1, N);
  const TorusAutomorphism S2 = wall_automorphism(L, {0, 1}, 1, N);
  const TorusAutomorphism clean = compose(S2, S1);

  TorusAutomorphism dirty = clean;
  dirty.image[1] = cs_add(
      dirty.image[1], cone_monomial(2, N, {1, 1}, Rational(1, 1000000)));

  CHECK_FALSE(same_automorphism(clean, dirty));
  CHECK(automorphism_defect(clean, dirty) == Rational(1, 1000000));
}

TEST_CASE("torus shifts conjugate walls into weighted walls") {
  const ChargeLattice L = pentagon_lattice();
  const int N = 9;
  const std::vector<Rational> lam = {Rational(2, 3), Rational(-5, 7)};
  const std::vector<Rational> lam_inv = {Rational(3, 2), Rational(-7, 5)};
  const TorusAutomorphism T = torus_shift(lam, N);
  const TorusAutomorphism Tinv = torus_shift(lam_inv, N);
  CHECK(same_automorphism(compose(T, Tinv), identity_automorphism(2, N)));

  const std::vector<int> gamma = {1, 0};
  const TorusAutomorphism S = wall_automorphism(L, gamma, 1, N);
  const TorusAutomorphism conj = compose(compose(T, S), Tinv);

  // Conjugation rescales the wall weight by lambda^gamma.
  const Rational w = Rational(-sign_of_charge(L, gamma)) * Rational(2, 3);
  const TorusAutomorphism expected = weighted_wall(L, w, gamma, 1, N);
  CHECK(same_automorphism(conj, expected));
  CHECK(automorphism_defect(conj, expected) == Rational(0));

  CHECK_THROWS_AS(torus_shift({Rational(1), Rational(0)}, N), NonInvertible);
}
