#include "joycekit/twistor.hpp"

#include <algorithm>
#include <cmath>

#include "joycekit/hyperkahler.hpp"
#include "joycekit/heavenly.hpp"
#include "joycekit/tseries.hpp"

namespace joycekit {

EpsilonPath epsilon_segment(cx a, cx b) { return EpsilonPath{{a, b}}; }

EpsilonPath reversed(const EpsilonPath& path) {
  EpsilonPath r = path;
  std::reverse(r.waypoints.begin(), r.waypoints.end());
  return r;
}

namespace {

double segment_origin_distance(cx a, cx b) {
  cx d = b - a;
  double dd = std::norm(d);
  if (dd == 0.0) return std::abs(a);
  double tau = std::clamp((-(a.real() * d.real() + a.imag() * d.imag())) / dd, 0.0, 1.0);
  return std::abs(a + tau * d);
}

double auto_guard(const Eigen::VectorXcd& z) {
  double m = 0.0;
  for (Eigen::Index i = 0; i < z.size(); ++i) {
    double a = std::abs(z(i));
    if (a > 0.0 && (m == 0.0 || a < m)) m = a;
  }
  return std::max(1e-12, 1e-3 * m);
}

}  // namespace

TwistorTrajectory twistor_flow(const PlebanskiFunction& w, const DarbouxFrame& f,
                               const XPoint& x, const EpsilonPath& path,
                               const TwistorOptions& opt) {
  require_same_frame(f, x.n());
  require_same_frame(f, w.n);
  const int n = f.n;
  if (path.waypoints.empty()) throw Error("empty parameter path");

  double guard = opt.min_eps_abs > 0.0 ? opt.min_eps_abs : auto_guard(x.z);
  for (size_t s = 0; s + 1 < path.waypoints.size(); ++s)
    if (segment_origin_distance(path.waypoints[s], path.waypoints[s + 1]) < guard)
      throw NearZeroEpsilon("parameter path enters the guarded disc");
  if (std::abs(path.waypoints.front()) < guard ||
      std::abs(path.waypoints.back()) < guard)
    throw NearZeroEpsilon("parameter path enters the guarded disc");

  TwistorTrajectory traj;
  traj.z = x.z;
  traj.eps_begin = path.waypoints.front();
  traj.eps_end = path.waypoints.back();

  XPoint cur = x;  // theta updated as segments advance; z fixed

  auto fibre_velocity = [&](cx eps, const Eigen::VectorXcd& theta) {
    XPoint p{x.z, theta};
    TaylorSeries<cx> jet = w.jet(p, 2);
    Eigen::MatrixXcd hess(n, n);
    for (int i = 0; i < n; ++i)
      for (int p2 = i; p2 < n; ++p2) {
        cx v = ts_partial(jet, {n + i, n + p2});
        hess(i, p2) = v;
        hess(p2, i) = v;
      }
    cx inv = cx(1.0) / eps;
    Eigen::VectorXcd out(n);
    for (int q = 0; q < n; ++q) {
      cx acc = -x.z(q) * inv * inv;
      for (int p2 = 0; p2 < n; ++p2) {
        cx e = f.eta(p2, q);
        if (e == cx(0.0)) continue;
        cx s = cx(0.0);
        for (int i = 0; i < n; ++i) s += x.z(i) * hess(i, p2);
        acc -= inv * e * s;
      }
      out(q) = acc;
    }
    return out;
  };

  OdeOptions oopt;
  oopt.rtol = opt.rtol;
  oopt.atol = opt.atol;
  oopt.max_steps = opt.max_steps;

  auto scaled_error = [&](const Eigen::VectorXcd& err, const Eigen::VectorXcd& ya,
                          const Eigen::VectorXcd& yb) {
    double worst = 0.0;
    for (Eigen::Index q = 0; q < err.size(); ++q) {
      double sc = opt.atol + opt.rtol * std::max(std::abs(ya(q)), std::abs(yb(q)));
      worst = std::max(worst, std::abs(err(q)) / sc);
    }
    return worst;
  };

  if (opt.record)
    traj.samples.push_back({0.0, traj.eps_begin, cur.theta});

  for (size_t s = 0; s + 1 < path.waypoints.size(); ++s) {
    cx a = path.waypoints[s];
    cx b = path.waypoints[s + 1];
    if (a == b) continue;
    cx dir = b - a;
    auto rhs = [&](double tau, const Eigen::VectorXcd& theta) {
      return Eigen::VectorXcd(dir * fibre_velocity(a + tau * dir, theta));
    };
    double base = static_cast<double>(s);
    auto observer = [&](double tau, const Eigen::VectorXcd& theta) {
      if (!opt.record || tau == 0.0) return;  // segment start already recorded
      traj.samples.push_back({base + tau, a + tau * dir, theta});
    };
    cur.theta = integrate_ode(cur.theta, 0.0, 1.0, rhs, oopt, scaled_error,
                              &traj.stats, observer);
  }

  traj.theta_end = cur.theta;
  if (!opt.record)
    traj.samples.push_back({static_cast<double>(path.waypoints.size() - 1),
                            traj.eps_end, traj.theta_end});
  return traj;
}

Observable parse_observable(const std::string& text, int n) {
  return Observable{parse_expression(text, observable_var_names(n)), n};
}

double conserved_coordinate_defect(const TwistorTrajectory& traj,
                                   const Observable& obs) {
  if (traj.samples.empty()) throw Error("trajectory holds no samples");
  const int n = obs.n;
  if (traj.z.size() != n) throw FrameMismatch("observable size differs from trajectory");
  auto value = [&](const TwistorSample& s) {
    std::vector<cx> vars(1 + 2 * n);
    vars[0] = s.eps;
    for (int i = 0; i < n; ++i) {
      vars[1 + i] = traj.z(i);
      vars[1 + n + i] = s.theta(i);
    }
    return eval_expr<cx>(*obs.expr, vars, 1e-9);
  };
  cx v0 = value(traj.samples.front());
  double worst = 0.0;
  for (const auto& s : traj.samples) worst = std::max(worst, std::abs(value(s) - v0));
  return worst;
}

double twisted_form_kernel_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                                  const XPoint& x, cx s, cx t) {
  const int n = f.n;
  HKStructure hk = build_hk(w, f, x);
  FormTriple ft = forms(hk, f);
  Eigen::MatrixXcd M = s * s * ft.omega_minus -
                       cx(0.0, 2.0) * s * t * ft.omega_I + t * t * ft.omega_plus;
  double mscale = std::max(1.0, M.cwiseAbs().maxCoeff());

  std::vector<Eigen::VectorXcd> kernel;
  if (t == cx(0.0)) {
    for (int q = 0; q < n; ++q) {
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n);
      v(n + q) = cx(1.0);
      kernel.push_back(v);
    }
  } else {
    cx eps_inv = s / t;
    for (int i = 0; i < n; ++i)
      kernel.push_back(lift_horizontal(w, f, x, eps_inv, i));
  }

  double worst = 0.0;
  for (const auto& v : kernel) {
    double vscale = std::max(1.0, v.cwiseAbs().maxCoeff());
    worst = std::max(worst, (M * v).cwiseAbs().maxCoeff() / (mscale * vscale));
  }
  return worst;
}

}  // namespace joycekit
