#include <doctest.h>

#include "joycekit/frame.hpp"

using joycekit::DegenerateFrame;
using joycekit::make_frame;
using joycekit::NonInvertible;
using joycekit::NotSkew;
using joycekit::Rational;

TEST_CASE("default pairing and its exact inverse") {
  auto f1 = make_frame(1);
  CHECK(f1.n == 2);
  CHECK(f1.omega(0, 1) == 1);
  CHECK(f1.omega(1, 0) == -1);
  CHECK(f1.eta_exact[0][1] == Rational(-1));
  CHECK(f1.eta_exact[1][0] == Rational(1));

  auto f2 = make_frame(2);
  CHECK(f2.n == 4);
  CHECK(f2.omega(0, 2) == 1);
  CHECK(f2.omega(1, 3) == 1);
  CHECK(f2.omega(2, 0) == -1);
  // For this block shape the inverse is the transpose.
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q)
      CHECK(f2.eta_exact[p][q] == Rational(f2.omega(q, p)));

  // eta * omega = id exactly.
  for (int p = 0; p < 4; ++p)
    for (int q = 0; q < 4; ++q) {
      Rational s(0);
      for (int k = 0; k < 4; ++k)
        s += f2.eta_exact[p][k] * Rational(f2.omega(k, q));
      CHECK(s == Rational(p == q ? 1 : 0));
    }
}

TEST_CASE("scaled pairing inverts to exact halves") {
  Eigen::MatrixXi om(2, 2);
  om << 0, 2, -2, 0;
  auto f = make_frame(om);
  CHECK(f.eta_exact[0][1] == Rational(-1, 2));
  CHECK(f.eta_exact[1][0] == Rational(1, 2));
  CHECK(f.eta(0, 1).real() == -0.5);
}

TEST_CASE("frame validation") {
  Eigen::MatrixXi bad(2, 2);
  bad << 0, 1, 1, 0;
  CHECK_THROWS_AS(make_frame(bad), NotSkew);

  Eigen::MatrixXi odd = Eigen::MatrixXi::Zero(3, 3);
  CHECK_THROWS_AS(make_frame(odd), DegenerateFrame);
  CHECK_THROWS_AS(make_frame(0), DegenerateFrame);

  Eigen::MatrixXi sing = Eigen::MatrixXi::Zero(4, 4);
  sing(0, 1) = 1;
  sing(1, 0) = -1;
  CHECK_THROWS_AS(make_frame(sing), NonInvertible);
}
