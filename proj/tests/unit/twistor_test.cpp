#include <doctest.h>

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "joycekit/twistor.hpp"

using namespace joycekit;

namespace {

XPoint sample_point_d1() {
  XPoint x;
  x.z = Eigen::VectorXcd(2);
  x.theta = Eigen::VectorXcd(2);
  x.z << cx(1.0, 0.5), cx(-2.0, 0.25);
  x.theta << cx(0.3, -0.1), cx(-1.0, 1.0);
  return x;
}

}  // namespace

TEST_CASE("vanishing potential flow matches the closed form") {
  DarbouxFrame f = make_frame(1);
  PlebanskiFunction w = PlebanskiFunction::parse("0", 2);
  XPoint x = sample_point_d1();
  cx e0(1.0, 0.0), e1(0.25, 0.0);

  TwistorOptions opt;
  opt.rtol = 1e-9;
  TwistorTrajectory traj = twistor_flow(w, f, x, epsilon_segment(e0, e1), opt);

  Eigen::VectorXcd expected =
      x.theta + x.z * (cx(1.0) / e1 - cx(1.0) / e0);
  CHECK((traj.theta_end - expected).cwiseAbs().maxCoeff() < 10.0 * opt.rtol);
  CHECK(traj.eps_begin == e0);
  CHECK(traj.eps_end == e1);
  CHECK(traj.samples.size() >= 2);

  Observable obs1 = parse_observable("t1 - z1/eps", 2);
  Observable obs2 = parse_observable("t2 - z2/eps", 2);
  CHECK(conserved_coordinate_defect(traj, obs1) < 10.0 * opt.rtol);
  CHECK(conserved_coordinate_defect(traj, obs2) < 10.0 * opt.rtol);
}

TEST_CASE("multi segment path agrees with a single segment") {
  DarbouxFrame f = make_frame(1);
  PlebanskiFunction w = PlebanskiFunction::parse("t2*t1^2/(4*z1)", 2);
  XPoint x = sample_point_d1();
  cx e0(1.0, 0.0), e1(0.4, 0.3);

  TwistorOptions opt;
  opt.rtol = 1e-10;
  TwistorTrajectory direct = twistor_flow(w, f, x, epsilon_segment(e0, e1), opt);
  EpsilonPath dog;
  dog.waypoints = {e0, cx(0.8, 0.4), e1};
  TwistorTrajectory bent = twistor_flow(w, f, x, dog, opt);
  CHECK((direct.theta_end - bent.theta_end).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("reversed path returns to the start") {
  DarbouxFrame f = make_frame(1);
  PlebanskiFunction w = PlebanskiFunction::parse("t1^3/z1 + t2^2*t1/z2", 2);
  XPoint x = sample_point_d1();
  EpsilonPath path;
  path.waypoints = {cx(1.0, 0.0), cx(0.6, 0.5), cx(0.3, -0.2)};

  TwistorOptions opt;
  opt.rtol = 1e-10;
  TwistorTrajectory fwd = twistor_flow(w, f, x, path, opt);
  XPoint turned = x;
  turned.theta = fwd.theta_end;
  TwistorTrajectory back = twistor_flow(w, f, turned, reversed(path), opt);
  CHECK((back.theta_end - x.theta).cwiseAbs().maxCoeff() < 10.0 * 1e-9);
}

TEST_CASE("scaling covariance for a base weight minus one potential") {
  DarbouxFrame f = make_frame(1);
  PlebanskiFunction w = PlebanskiFunction::parse("t1^3/z1", 2);
  XPoint x = sample_point_d1();
  cx lam(2.0, 0.0);

  TwistorOptions opt;
  opt.rtol = 1e-11;
  TwistorTrajectory plain =
      twistor_flow(w, f, x, epsilon_segment(cx(1.0), cx(0.5)), opt);
  XPoint xs = x;
  xs.z = lam * x.z;
  TwistorTrajectory scaled =
      twistor_flow(w, f, xs, epsilon_segment(lam * cx(1.0), lam * cx(0.5)), opt);
  CHECK((plain.theta_end - scaled.theta_end).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("paths through the guarded disc are refused") {
  DarbouxFrame f = make_frame(1);
  PlebanskiFunction w = PlebanskiFunction::parse("0", 2);
  XPoint x = sample_point_d1();
  CHECK_THROWS_AS(
      twistor_flow(w, f, x, epsilon_segment(cx(1.0), cx(-1.0))),
      NearZeroEpsilon);
  TwistorOptions opt;
  opt.min_eps_abs = 0.5;
  CHECK_THROWS_AS(
      twistor_flow(w, f, x, epsilon_segment(cx(1.0), cx(0.25)), opt),
      NearZeroEpsilon);
  opt.min_eps_abs = 0.0;
  CHECK_NOTHROW(twistor_flow(w, f, x, epsilon_segment(cx(1.0), cx(0.25)), opt));
}

TEST_CASE("impossible step budget throws") {
  DarbouxFrame f = make_frame(1);
  PlebanskiFunction w = PlebanskiFunction::parse("t1^3/z1", 2);
  XPoint x = sample_point_d1();
  TwistorOptions opt;
  opt.max_steps = 2;
  opt.rtol = 1e-13;
  CHECK_THROWS_AS(twistor_flow(w, f, x, epsilon_segment(cx(1.0), cx(0.25)), opt),
                  StepFailure);
}

TEST_CASE("pencil of forms annihilates the lifted directions") {
  DarbouxFrame f1 = make_frame(1);
  PlebanskiFunction w1 =
      PlebanskiFunction::parse("z1*t1^3 + t1*t2^2 + exp(t2)/z2", 2);
  XPoint x = sample_point_d1();

  for (auto [s, t] : {std::pair<cx, cx>{cx(1.0), cx(1.0)},
                      {cx(1.0), cx(0.0)},
                      {cx(0.0), cx(1.0)},
                      {cx(0.7, -0.3), cx(1.2, 0.5)}}) {
    CHECK(twisted_form_kernel_defect(w1, f1, x, s, t) < 1e-12);
  }

  DarbouxFrame f2 = make_frame(2);
  PlebanskiFunction w2 =
      PlebanskiFunction::parse("t1^2*t3 + z1*t2^3 + t4^2*t1/z3", 4);
  XPoint y;
  y.z = Eigen::VectorXcd(4);
  y.theta = Eigen::VectorXcd(4);
  y.z << cx(1.2, 0.1), cx(-0.7, 0.4), cx(2.0, -0.3), cx(0.5, 0.9);
  y.theta << cx(0.4, 0.2), cx(-0.6, 0.1), cx(0.9, -0.5), cx(-0.2, -0.8);
  CHECK(twisted_form_kernel_defect(w2, f2, y, cx(0.9, 0.2), cx(1.1, -0.4)) < 1e-12);
}
