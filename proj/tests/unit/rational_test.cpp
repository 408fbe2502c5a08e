#include <doctest.h>

#include "joycekit/rational.hpp"

using joycekit::NonInvertible;
using joycekit::Overflow;
using joycekit::Rational;

TEST_CASE("rational arithmetic stays reduced") {
  Rational a(2, 4);
  CHECK(a == Rational(1, 2));
  CHECK((a + Rational(1, 3)) == Rational(5, 6));
  CHECK((a - Rational(1, 2)).is_zero());
  CHECK((Rational(3, 7) * Rational(7, 3)).is_one());
  CHECK((Rational(1, 3) / Rational(2, 9)) == Rational(3, 2));
  CHECK(Rational(-2, -4) == Rational(1, 2));
  CHECK(Rational(2, -4) == Rational(-1, 2));
  CHECK((-Rational(1, 2)).to_string() == "-1/2");
  CHECK(Rational(7).to_string() == "7");
  CHECK(Rational(1, 3) < Rational(1, 2));
  CHECK(Rational(1, 3).to_double() == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
}

TEST_CASE("rational overflow throws instead of wrapping") {
  Rational big = Rational(1);
  // 10^38 fits in 128 bits; squaring it does not.
  for (int k = 0; k < 38; ++k) big *= Rational(10);
  CHECK_THROWS_AS(big * big, Overflow);
  CHECK_THROWS_AS((Rational(1) / big) + (Rational(1) / (big * Rational(3))),
                  Overflow);
}

TEST_CASE("exact inverse of a rational matrix") {
  using M = std::vector<std::vector<Rational>>;
  M a = {{Rational(2), Rational(1)}, {Rational(7), Rational(4)}};
  M inv = joycekit::rational_inverse(a);
  // det = 1, so the inverse is [[4,-1],[-7,2]].
  CHECK(inv[0][0] == Rational(4));
  CHECK(inv[0][1] == Rational(-1));
  CHECK(inv[1][0] == Rational(-7));
  CHECK(inv[1][1] == Rational(2));

  M scaled = {{Rational(0), Rational(2)}, {Rational(-2), Rational(0)}};
  M sinv = joycekit::rational_inverse(scaled);
  CHECK(sinv[0][0].is_zero());
  CHECK(sinv[0][1] == Rational(-1, 2));
  CHECK(sinv[1][0] == Rational(1, 2));
  CHECK(sinv[1][1].is_zero());

  M sing = {{Rational(1), Rational(2)}, {Rational(2), Rational(4)}};
  CHECK_THROWS_AS(joycekit::rational_inverse(sing), NonInvertible);
}
