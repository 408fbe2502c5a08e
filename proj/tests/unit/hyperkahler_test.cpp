#include <doctest.h>

#include "joycekit/heavenly.hpp"
#include "joycekit/hyperkahler.hpp"

using joycekit::build_hk;
using joycekit::cx;
using joycekit::FormSelector;
using joycekit::forms;
using joycekit::make_frame;
using joycekit::PlebanskiFunction;
using joycekit::PoleAtZeroSection;
using joycekit::XPoint;

namespace {

XPoint point2(cx z1, cx z2, cx t1, cx t2) {
  XPoint x;
  x.z = Eigen::VectorXcd(2);
  x.theta = Eigen::VectorXcd(2);
  x.z << z1, z2;
  x.theta << t1, t2;
  return x;
}

double dmax(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

TEST_CASE("flat model structures") {
  auto f = make_frame(1);
  auto w = PlebanskiFunction::parse("0", 2);
  auto s = build_hk(w, f, point2(cx(1), cx(2), cx(3), cx(4)));
  const cx iu(0, 1);
  for (int k = 0; k < 2; ++k) {
    CHECK(s.I(k, k) == -iu);
    CHECK(s.I(2 + k, 2 + k) == iu);
    // J swaps the blocks: J dz = -dtheta directions, J dtheta = dz.
    CHECK(s.J(2 + k, k) == cx(-1));
    CHECK(s.J(k, 2 + k) == cx(1));
  }
  for (int p = 0; p < 2; ++p)
    for (int q = 0; q < 2; ++q) {
      CHECK(2.0 * s.g(p, 2 + q) == cx(f.omega(p, q)));
      CHECK(s.g(p, q) == cx(0));
      CHECK(s.g(2 + p, 2 + q) == cx(0));
    }
}

TEST_CASE("quaternion and compatibility relations hold for any potential") {
  auto cases = std::vector<std::pair<int, std::string>>{
      {1, "z1*t1^3 + t1*t2^2 + exp(t2)/z2"},
      {2, "t1^2*t3 + z1*t2^3 + t4^2*t1/z3"},
  };
  for (const auto& [d, text] : cases) {
    auto f = make_frame(d);
    const int n = 2 * d;
    auto w = PlebanskiFunction::parse(text, n);
    XPoint x;
    x.z = Eigen::VectorXcd::Zero(n);
    x.theta = Eigen::VectorXcd::Zero(n);
    for (int k = 0; k < n; ++k) {
      x.z(k) = cx(1.1 + 0.3 * k, 0.2 - 0.1 * k);
      x.theta(k) = cx(-0.4 + 0.25 * k, 0.15 * k);
    }
    auto s = build_hk(w, f, x);
    Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(2 * n, 2 * n);

    CHECK(dmax(s.I * s.I + id) < 1e-12);
    CHECK(dmax(s.J * s.J + id) < 1e-12);
    CHECK(dmax(s.K * s.K + id) < 1e-12);
    CHECK(dmax(s.I * s.J - s.K) < 1e-12);
    CHECK(dmax(s.J * s.I + s.K) < 1e-12);
    CHECK(dmax(s.I * s.J * s.K + id) < 1e-12);

    CHECK(dmax(s.g - s.g.transpose()) == 0.0);
    CHECK(dmax(s.I.transpose() * s.g * s.I - s.g) < 1e-12);
    CHECK(dmax(s.J.transpose() * s.g * s.J - s.g) < 1e-12);
    CHECK(dmax(s.K.transpose() * s.g * s.K - s.g) < 1e-12);

    // The lifted base directions span the -i eigenspace of I, the fibre
    // directions the +i eigenspace.
    const cx iu(0, 1);
    for (int k = 0; k < n; ++k) {
      CHECK((s.I * s.P.col(k) + iu * s.P.col(k)).cwiseAbs().maxCoeff() < 1e-12);
      CHECK((s.I * s.P.col(n + k) - iu * s.P.col(n + k)).cwiseAbs().maxCoeff() < 1e-12);
    }
  }
}

TEST_CASE("form identities") {
  auto f = make_frame(1);
  auto w = PlebanskiFunction::parse("z1*t1^3 + t1*t2^2", 2);
  XPoint x = point2(cx(0.8, 0.1), cx(-0.5), cx(0.7, -0.3), cx(1.2));
  auto s = build_hk(w, f, x);
  auto t = forms(s, f);
  const int n = 2;
  const cx iu(0, 1);
  Eigen::MatrixXcd om = f.omega.cast<cx>();

  // Independent reading of the same forms off the lift block.
  Eigen::MatrixXcd minus_expect = Eigen::MatrixXcd::Zero(4, 4);
  minus_expect.topLeftCorner(n, n) = om;
  CHECK(dmax(t.omega_minus - minus_expect) < 1e-12);

  Eigen::MatrixXcd itwist = Eigen::MatrixXcd::Zero(4, 4);
  itwist.topRightCorner(n, n) = om;
  itwist.bottomLeftCorner(n, n) = om;
  CHECK(dmax(2.0 * iu * t.omega_I - itwist) < 1e-12);

  Eigen::MatrixXcd plus_expect(4, 4);
  plus_expect.topLeftCorner(n, n) = s.A.transpose() * om * s.A;
  plus_expect.topRightCorner(n, n) = -s.A.transpose() * om;
  plus_expect.bottomLeftCorner(n, n) = -om * s.A;
  plus_expect.bottomRightCorner(n, n) = om;
  CHECK(dmax(t.omega_plus - plus_expect) < 1e-12);

  CHECK(dmax(t.omega_I + t.omega_I.transpose()) < 1e-12);
  CHECK(dmax(t.omega_plus + t.omega_plus.transpose()) < 1e-12);

  // The lifted base directions lie in the kernel of the plus form.
  for (int k = 0; k < n; ++k)
    CHECK((t.omega_plus * s.P.col(k)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("closedness defect decays quadratically on a solution") {
  auto f = make_frame(1);
  // t2*t1^2/(4 z1) solves the field equation: the quadratic term is
  // (t1/2z1)^2 and the z1 cross derivative of the t2 coefficient cancels it.
  // Its fibre Hessian entries are distinct functions, so the plus form has a
  // visible truncation term in the difference quotients.
  auto sol = PlebanskiFunction::parse("t2*t1^2/(4*z1)", 2);
  XPoint x = point2(cx(1.2, 0.3), cx(0.7), cx(0.9, -0.2), cx(-0.4));
  CHECK(joycekit::heavenly_residual(sol, f, x).cwiseAbs().maxCoeff() < 1e-12);

  // The minus and I forms are constant in the coordinates: their defect is
  // pure rounding at any step.
  CHECK(joycekit::closedness_defect(sol, f, x, FormSelector::minus, 1e-3) < 1e-12);
  CHECK(joycekit::closedness_defect(sol, f, x, FormSelector::I, 1e-3) < 1e-12);

  double d1 = joycekit::closedness_defect(sol, f, x, FormSelector::plus, 2e-2);
  double d2 = joycekit::closedness_defect(sol, f, x, FormSelector::plus, 1e-2);
  CHECK(d1 > 1e-9);  // genuine truncation term, not rounding
  CHECK(d1 / d2 > 3.4);
  CHECK(d1 / d2 < 4.6);

  // A potential that fails the field equation leaves a step-independent
  // residue in the plus form.
  auto bad = PlebanskiFunction::parse("t1^3 + t2^3", 2);
  double b1 = joycekit::closedness_defect(bad, f, x, FormSelector::plus, 1e-2);
  double b2 = joycekit::closedness_defect(bad, f, x, FormSelector::plus, 5e-3);
  CHECK(b1 > 1.0);
  CHECK(b1 / b2 < 1.5);
}

TEST_CASE("linear model coefficients along the zero section") {
  auto f = make_frame(1);
  auto w = PlebanskiFunction::parse("3*t1^3/6", 2);
  Eigen::VectorXcd z(2);
  z << cx(2), cx(5);
  auto gamma = joycekit::linear_joyce(w, f, z);
  CHECK(gamma.size() == 2);
  CHECK(std::abs(gamma[1](0, 0) - cx(3)) < 1e-13);
  CHECK(std::abs(gamma[0](0, 0)) < 1e-13);
  CHECK(std::abs(gamma[1](0, 1)) < 1e-13);

  auto pole = PlebanskiFunction::parse("t1^3/z1", 2);
  Eigen::VectorXcd z0(2);
  z0 << cx(0), cx(1);
  CHECK_THROWS_AS(joycekit::linear_joyce(pole, f, z0), PoleAtZeroSection);
}

TEST_CASE("scaling weights of the structure") {
  auto f = make_frame(1);
  auto good = PlebanskiFunction::parse("t1^3/z1 + t2^2*t1/z2", 2);
  XPoint x = point2(cx(1.3, 0.2), cx(0.8, -0.1), cx(0.5), cx(-0.7, 0.4));
  for (cx t : {cx(2), cx(1, 1), cx(0.3)})
    CHECK(joycekit::homogeneity_flow_defect(good, f, x, t) < 1e-11);

  auto bad = PlebanskiFunction::parse("z1*t1^3", 2);
  CHECK(joycekit::homogeneity_flow_defect(bad, f, x, cx(2)) > 0.1);
}
