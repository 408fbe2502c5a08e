#include "joycekit/lagrangian.hpp"

#include "joycekit/heavenly.hpp"

namespace joycekit {

XPoint assemble_point(const DarbouxFrame& f, const LagrangianFibration& b,
                      const LagrangianPoint& y, const Eigen::VectorXcd& lift) {
  const int d = f.d;
  if (b.fixed_base.size() != d || y.base.size() != d || y.normal.size() != d ||
      lift.size() != d)
    throw FrameMismatch("submanifold data does not match the frame rank");
  XPoint x;
  x.z = Eigen::VectorXcd(2 * d);
  x.theta = Eigen::VectorXcd(2 * d);
  x.z.head(d) = y.base;
  x.z.tail(d) = b.fixed_base;
  x.theta.head(d) = lift;
  x.theta.tail(d) = y.normal;
  return x;
}

namespace {

double fibre_block_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                          const std::vector<XPoint>& samples, int order) {
  require_same_frame(f, w.n);
  const int d = f.d;
  double worst = 0.0;
  for (const XPoint& x : samples) {
    TaylorSeries<cx> jet = w.jet(x, order);
    std::vector<int> dirs(order, 0);
    // Walk all index tuples over the first d fibre directions; symmetry
    // makes the non-decreasing ones sufficient but the loop is tiny.
    std::vector<int> idx(order, 0);
    for (;;) {
      for (int k = 0; k < order; ++k) dirs[k] = w.n + idx[k];
      worst = std::max(worst, std::abs(ts_partial(jet, dirs)));
      int k = order - 1;
      while (k >= 0 && ++idx[k] == d) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  return worst;
}

}  // namespace

double good_defect3(const PlebanskiFunction& w, const DarbouxFrame& f,
                    const std::vector<XPoint>& samples) {
  return fibre_block_defect(w, f, samples, 3);
}

double good_defect4(const PlebanskiFunction& w, const DarbouxFrame& f,
                    const std::vector<XPoint>& samples) {
  return fibre_block_defect(w, f, samples, 4);
}

Eigen::MatrixXcd restricted_pairing(const DarbouxFrame& f) {
  const int d = f.d;
  Eigen::MatrixXcd m(d, d);
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m(r, c) = cx(0, 1) * cx(f.omega(r, d + c));
  return m;
}

bool lagrangian_nondegenerate(const DarbouxFrame& f) {
  const int d = f.d;
  std::vector<std::vector<Rational>> m(d, std::vector<Rational>(d, Rational(0)));
  for (int r = 0; r < d; ++r)
    for (int c = 0; c < d; ++c) m[r][c] = Rational(f.omega(r, d + c));
  try {
    rational_inverse(std::move(m));
    return true;
  } catch (const NonInvertible&) {
    return false;
  }
}

Eigen::VectorXcd normal_connection(const PlebanskiFunction& w, const DarbouxFrame& f,
                                   const LagrangianFibration& b, const LagrangianPoint& y,
                                   int i, const Eigen::VectorXcd& lift) {
  const int d = f.d;
  if (i < 0 || i >= d) throw Error("chart direction out of range");
  XPoint x = assemble_point(f, b, y, lift);
  Eigen::VectorXcd h = lift_horizontal(w, f, x, cx(0), i);
  return h.segment(2 * d + d, d);
}

double normal_lift_dependence(const PlebanskiFunction& w, const DarbouxFrame& f,
                              const LagrangianFibration& b, const LagrangianPoint& y,
                              int i, const std::vector<Eigen::VectorXcd>& lifts) {
  double worst = 0.0;
  for (size_t a = 0; a < lifts.size(); ++a) {
    Eigen::VectorXcd va = normal_connection(w, f, b, y, i, lifts[a]);
    for (size_t c = a + 1; c < lifts.size(); ++c) {
      Eigen::VectorXcd vc = normal_connection(w, f, b, y, i, lifts[c]);
      worst = std::max(worst, (va - vc).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

namespace {

// One RK4 leg: move base coordinate dir by step while transporting the full
// fibre along the lifted direction.
void transport_leg(const PlebanskiFunction& w, const DarbouxFrame& f, XPoint& x,
                   int dir, cx step, int substeps) {
  const int n = w.n;
  const double h = 1.0 / substeps;
  auto rhs = [&](const XPoint& p) -> Eigen::VectorXcd {
    Eigen::VectorXcd hv = lift_horizontal(w, f, p, cx(0), dir);
    return step * hv.tail(n);
  };
  for (int s = 0; s < substeps; ++s) {
    XPoint p1 = x;
    Eigen::VectorXcd k1 = rhs(p1);
    XPoint p2 = x;
    p2.z(dir) += 0.5 * h * step;
    p2.theta += 0.5 * h * k1;
    Eigen::VectorXcd k2 = rhs(p2);
    XPoint p3 = x;
    p3.z(dir) += 0.5 * h * step;
    p3.theta += 0.5 * h * k2;
    Eigen::VectorXcd k3 = rhs(p3);
    XPoint p4 = x;
    p4.z(dir) += h * step;
    p4.theta += h * k3;
    Eigen::VectorXcd k4 = rhs(p4);
    x.z(dir) += h * step;
    x.theta += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

}  // namespace

double plaquette_holonomy(const PlebanskiFunction& w, const DarbouxFrame& f,
                          const XPoint& x, int i, int j, cx s1, cx s2,
                          int steps_per_leg) {
  require_same_frame(f, w.n);
  XPoint p = x;
  transport_leg(w, f, p, i, s1, steps_per_leg);
  transport_leg(w, f, p, j, s2, steps_per_leg);
  transport_leg(w, f, p, i, -s1, steps_per_leg);
  transport_leg(w, f, p, j, -s2, steps_per_leg);
  return (p.theta - x.theta).cwiseAbs().maxCoeff();
}

}  // namespace joycekit
