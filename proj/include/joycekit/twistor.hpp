#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "joycekit/frame.hpp"
#include "joycekit/ode.hpp"
#include "joycekit/plebanski.hpp"

namespace joycekit {

// Piecewise-straight path in the twistor parameter plane.  The flow starts
// at waypoints.front() and ends at waypoints.back().
struct EpsilonPath {
  std::vector<cx> waypoints;
};

EpsilonPath epsilon_segment(cx a, cx b);
EpsilonPath reversed(const EpsilonPath& path);

struct TwistorOptions {
  double rtol = 1e-9;
  double atol = 1e-14;
  // Paths passing closer to the parameter origin than this are refused.
  // Zero selects 1e-3 times the smallest nonzero base coordinate magnitude,
  // with an absolute floor of 1e-12.
  double min_eps_abs = 0.0;
  long long max_steps = 50000000;
  bool record = true;
};

struct TwistorSample {
  double tau = 0.0;  // global path parameter, one unit per segment
  cx eps;
  Eigen::VectorXcd theta;
};

struct TwistorTrajectory {
  Eigen::VectorXcd z;
  cx eps_begin, eps_end;
  Eigen::VectorXcd theta_end;
  std::vector<TwistorSample> samples;
  OdeStats stats;
};

// Integrates the fibre flow d theta_q / d eps =
//   -z_q / eps^2 - (1/eps) sum_{i,p} eta_pq z_i W_{t_i t_p}(z, theta)
// along the path, starting from x.theta at eps = waypoints.front().
// Throws NearZeroEpsilon when a segment comes too close to the origin and
// StepFailure when the controller cannot meet the tolerance.
TwistorTrajectory twistor_flow(const PlebanskiFunction& w, const DarbouxFrame& f,
                               const XPoint& x, const EpsilonPath& path,
                               const TwistorOptions& opt = {});

// Scalar function of (eps, z_1.., t_1..) sampled along a trajectory.
struct Observable {
  ExprPtr expr;
  int n = 0;
};

Observable parse_observable(const std::string& text, int n);

// Max drift of the observable over the trajectory relative to its value at
// the first sample.
double conserved_coordinate_defect(const TwistorTrajectory& traj,
                                   const Observable& obs);

// Degeneracy check of the pencil of two-forms
//   M(s, t) = s^2 Omega_minus - 2i s t Omega_I + t^2 Omega_plus
// against its predicted kernel at x: the lifted base directions with
// eps_inv = s/t (the fibre directions when t = 0).  Returns the largest
// residual |M v|_inf over the kernel basis, scaled by |M|_inf.
double twisted_form_kernel_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                                  const XPoint& x, cx s, cx t);

}  // namespace joycekit
