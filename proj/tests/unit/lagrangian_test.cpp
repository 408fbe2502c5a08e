#include <doctest.h>

#include "joycekit/heavenly.hpp"
#include "joycekit/lagrangian.hpp"

using joycekit::assemble_point;
using joycekit::cx;
using joycekit::LagrangianFibration;
using joycekit::LagrangianPoint;
using joycekit::make_frame;
using joycekit::PlebanskiFunction;
using joycekit::XPoint;

namespace {

std::vector<XPoint> grid_samples() {
  std::vector<XPoint> out;
  for (double a : {-1.0, 0.5, 1.0})
    for (double b : {-0.7, 0.9}) {
      XPoint x;
      x.z = Eigen::VectorXcd(2);
      x.theta = Eigen::VectorXcd(2);
      x.z << cx(1.2, 0.1), cx(0.7);
      x.theta << cx(a, 0.2), cx(b);
      out.push_back(x);
    }
  return out;
}

}  // namespace

TEST_CASE("good condition separates the two cubics") {
  auto f = make_frame(1);
  auto samples = grid_samples();
  auto good = PlebanskiFunction::parse("t2^3/6", 2);
  auto bad = PlebanskiFunction::parse("t1^3/6", 2);
  CHECK(joycekit::good_defect3(good, f, samples) < 1e-14);
  CHECK(joycekit::good_defect3(bad, f, samples) == doctest::Approx(1.0));

  // Fourth-order blind spot: an exact cubic in the tested directions has
  // vanishing fourth derivatives, so the two tests disagree there and agree
  // on anything of higher degree.
  CHECK(joycekit::good_defect4(bad, f, samples) < 1e-14);
  auto quart = PlebanskiFunction::parse("t1^4", 2);
  // Largest |24 t1| over the samples; t1 = -1 + 0.2i wins.
  CHECK(joycekit::good_defect3(quart, f, samples) ==
        doctest::Approx(24.0 * std::abs(cx(-1.0, 0.2))));
  CHECK(joycekit::good_defect4(quart, f, samples) == doctest::Approx(24.0));
  CHECK(joycekit::good_defect4(good, f, samples) < 1e-14);
}

TEST_CASE("restriction minor") {
  auto f1 = make_frame(1);
  auto m1 = joycekit::restricted_pairing(f1);
  CHECK(m1.rows() == 1);
  CHECK(m1(0, 0) == cx(0, 1));
  CHECK(joycekit::lagrangian_nondegenerate(f1));

  auto f2 = make_frame(2);
  auto m2 = joycekit::restricted_pairing(f2);
  CHECK((m2 - cx(0, 1) * Eigen::MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() == 0.0);
  CHECK(joycekit::lagrangian_nondegenerate(f2));

  // Invertible skew pairing whose restriction minor is singular.
  Eigen::MatrixXi om(4, 4);
  om << 0, 1, 1, 0,
       -1, 0, 0, 0,
       -1, 0, 0, 1,
        0, 0, -1, 0;
  auto fd = make_frame(om);
  CHECK_FALSE(joycekit::lagrangian_nondegenerate(fd));
}

TEST_CASE("normal transport coefficients") {
  auto f = make_frame(1);
  LagrangianFibration b;
  b.fixed_base = Eigen::VectorXcd::Constant(1, cx(1.7));
  LagrangianPoint y;
  y.base = Eigen::VectorXcd::Constant(1, cx(0.9, 0.3));
  y.normal = Eigen::VectorXcd::Constant(1, cx(-0.4));

  std::vector<Eigen::VectorXcd> lifts{
      Eigen::VectorXcd::Constant(1, cx(0)),
      Eigen::VectorXcd::Constant(1, cx(2)),
      Eigen::VectorXcd::Constant(1, cx(1, 1)),
  };

  // Good potential: the normal coefficient is -W_{t1 t1} = -z2, constant in
  // the lift.
  auto good = PlebanskiFunction::parse("z2*t1^2/2 + t2^3", 2);
  for (const auto& lift : lifts) {
    auto v = joycekit::normal_connection(good, f, b, y, 0, lift);
    CHECK(v.size() == 1);
    CHECK(std::abs(v(0) - cx(-1.7)) < 1e-14);
  }
  CHECK(joycekit::normal_lift_dependence(good, f, b, y, 0, lifts) < 1e-14);

  // A failing potential shows the lift directly.
  auto bad = PlebanskiFunction::parse("z2*t1^3", 2);
  auto v2 = joycekit::normal_connection(bad, f, b, y, 0, lifts[1]);
  CHECK(std::abs(v2(0) - cx(-6.0 * 1.7 * 2.0)) < 1e-12);
  CHECK(joycekit::normal_lift_dependence(bad, f, b, y, 0, lifts) > 1.0);
}

TEST_CASE("normal components never see the twist") {
  auto f = make_frame(2);
  auto w = PlebanskiFunction::parse("z3*t1^2 + t1*t2*t3 + t4^3", 4);
  XPoint x;
  x.z = Eigen::VectorXcd(4);
  x.theta = Eigen::VectorXcd(4);
  x.z << cx(1), cx(2, 0.5), cx(-0.3), cx(0.8);
  x.theta << cx(0.4), cx(-0.6), cx(1.1), cx(0.2, 0.7);
  for (int i = 0; i < 2; ++i) {
    auto h0 = joycekit::lift_horizontal(w, f, x, cx(0), i);
    for (cx e : {cx(1), cx(0, 1)}) {
      auto he = joycekit::lift_horizontal(w, f, x, e, i);
      // The twist only shifts the lift-block diagonal, so the normal block
      // is bitwise identical.
      for (int q = 2; q < 4; ++q) CHECK(he(4 + q) == h0(4 + q));
    }
  }
}

TEST_CASE("plaquette transport reproduces the commutator defect") {
  auto f = make_frame(1);
  XPoint x;
  x.z = Eigen::VectorXcd(2);
  x.theta = Eigen::VectorXcd(2);
  x.z << cx(1.3), cx(0.8);
  x.theta << cx(0.4), cx(-0.2);

  auto bad = PlebanskiFunction::parse("t1^3 + t2^3", 2);
  auto defect = joycekit::flatness_defect(bad, f, x, cx(0), 0, 1);
  double dnorm = defect.cwiseAbs().maxCoeff();
  CHECK(dnorm > 1.0);

  double s = 0.02;
  double hol = joycekit::plaquette_holonomy(bad, f, x, 0, 1, cx(s), cx(s), 24);
  CHECK(hol / (s * s) == doctest::Approx(dnorm).epsilon(0.15));

  // Smaller plaquettes scale with the area.
  double hol2 = joycekit::plaquette_holonomy(bad, f, x, 0, 1, cx(s / 2), cx(s / 2), 24);
  CHECK(hol / hol2 == doctest::Approx(4.0).epsilon(0.2));

  // On a solution the transport closes up to integrator error.
  auto sol = PlebanskiFunction::parse("t2*t1^2/(4*z1)", 2);
  double hs = joycekit::plaquette_holonomy(sol, f, x, 0, 1, cx(s), cx(s), 24);
  CHECK(hs < 1e-10);
}
