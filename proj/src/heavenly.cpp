#include "joycekit/heavenly.hpp"

#include <cmath>
#include <numbers>

namespace joycekit {

namespace {

// Second fibre partial W_{t_i t_p} from a jet of order >= 2.
cx wtt(const TaylorSeries<cx>& jet, int n, int i, int p) {
  return ts_partial(jet, {n + i, n + p});
}

}  // namespace

Eigen::MatrixXcd heavenly_residual(const PlebanskiFunction& w,
                                   const DarbouxFrame& f, const XPoint& x) {
  require_same_frame(f, w.n);
  const int n = w.n;
  TaylorSeries<cx> jet = w.jet(x, 2);
  Eigen::MatrixXcd r = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      cx v = ts_partial(jet, {n + i, j}) - ts_partial(jet, {n + j, i});
      for (int p = 0; p < n; ++p)
        for (int q = 0; q < n; ++q) {
          if (f.omega(p, q) == 0 && f.eta(p, q) == cx(0)) continue;
          v -= f.eta(p, q) * wtt(jet, n, i, p) * wtt(jet, n, j, q);
        }
      r(i, j) = v;
      r(j, i) = -v;
    }
  return r;
}

Eigen::VectorXcd lift_horizontal(const PlebanskiFunction& w, const DarbouxFrame& f,
                                 const XPoint& x, cx eps_inv, int i) {
  require_same_frame(f, w.n);
  const int n = w.n;
  if (i < 0 || i >= n) throw Error("lift direction out of range");
  TaylorSeries<cx> jet = w.jet(x, 2);
  Eigen::VectorXcd v = Eigen::VectorXcd::Zero(2 * n);
  v(i) = cx(1);
  for (int q = 0; q < n; ++q) {
    cx a(0);
    for (int p = 0; p < n; ++p) {
      if (f.eta(p, q) == cx(0)) continue;
      a += f.eta(p, q) * wtt(jet, n, i, p);
    }
    if (q == i) a += eps_inv;
    v(n + q) = a;
  }
  return v;
}

Eigen::VectorXcd flatness_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                                 const XPoint& x, cx eps_inv, int i, int j) {
  require_same_frame(f, w.n);
  const int n = w.n;
  if (i < 0 || i >= n || j < 0 || j >= n) throw Error("lift direction out of range");
  TaylorSeries<cx> jet = w.jet(x, 3);

  // Fibre coefficients of the two lifts and all their first derivatives,
  // read off the same third-order jet.
  auto a_coef = [&](int dir, int q) {
    cx a(0);
    for (int p = 0; p < n; ++p) {
      if (f.eta(p, q) == cx(0)) continue;
      a += f.eta(p, q) * wtt(jet, n, dir, p);
    }
    if (q == dir) a += eps_inv;
    return a;
  };
  auto a_dz = [&](int dir, int q, int zi) {
    cx a(0);
    for (int p = 0; p < n; ++p) {
      if (f.eta(p, q) == cx(0)) continue;
      a += f.eta(p, q) * ts_partial(jet, {n + dir, n + p, zi});
    }
    return a;
  };
  auto a_dt = [&](int dir, int q, int tr) {
    cx a(0);
    for (int p = 0; p < n; ++p) {
      if (f.eta(p, q) == cx(0)) continue;
      a += f.eta(p, q) * ts_partial(jet, {n + dir, n + p, n + tr});
    }
    return a;
  };

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(2 * n);
  for (int q = 0; q < n; ++q) {
    cx v = a_dz(j, q, i) - a_dz(i, q, j);
    for (int r = 0; r < n; ++r) {
      v += a_coef(i, r) * a_dt(j, q, r);
      v -= a_coef(j, r) * a_dt(i, q, r);
    }
    out(n + q) = v;
  }
  return out;
}

SymmetryDefects symmetry_defects(const PlebanskiFunction& w,
                                 const std::vector<XPoint>& samples,
                                 const std::vector<Eigen::VectorXi>& lattice,
                                 const std::vector<cx>& scales) {
  SymmetryDefects d;
  const cx two_pi_i(0.0, 2.0 * std::numbers::pi);
  for (const XPoint& x : samples) {
    cx base = w.value(x);
    for (const auto& k : lattice) {
      XPoint y = x;
      for (int q = 0; q < w.n; ++q) y.theta(q) += two_pi_i * cx(k(q));
      d.periodic = std::max(d.periodic, std::abs(w.value(y) - base));
    }
    for (cx t : scales) {
      XPoint y = x;
      y.z *= t;
      d.homogeneous = std::max(d.homogeneous, std::abs(t * w.value(y) - base));
    }
    XPoint y = x;
    y.theta = -y.theta;
    d.odd = std::max(d.odd, std::abs(w.value(y) + base));
  }
  return d;
}

}  // namespace joycekit
