#include "joycekit/hyperkahler.hpp"

namespace joycekit {

namespace {

Eigen::MatrixXcd fibre_hessian(const PlebanskiFunction& w, const XPoint& x) {
  const int n = w.n;
  TaylorSeries<cx> jet = w.jet(x, 2);
  Eigen::MatrixXcd h(n, n);
  for (int i = 0; i < n; ++i)
    for (int p = i; p < n; ++p) {
      h(i, p) = ts_partial(jet, {n + i, n + p});
      h(p, i) = h(i, p);
    }
  return h;
}

Eigen::MatrixXcd omega_cx(const DarbouxFrame& f) {
  return f.omega.cast<cx>();
}

}  // namespace

HKStructure build_hk(const PlebanskiFunction& w, const DarbouxFrame& f,
                     const XPoint& x) {
  require_same_frame(f, w.n);
  const int n = w.n;
  const cx iu(0.0, 1.0);

  HKStructure s;
  s.x = x;
  Eigen::MatrixXcd h = fibre_hessian(w, x);
  s.A = f.eta.transpose() * h;

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  const Eigen::MatrixXcd om = omega_cx(f);

  s.P = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  s.P.topLeftCorner(n, n) = id;
  s.P.bottomLeftCorner(n, n) = s.A;
  s.P.bottomRightCorner(n, n) = id;

  // Conjugating the flat-model structures by P collapses to these block
  // forms; they are exact for every potential.
  s.I = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  s.I.topLeftCorner(n, n) = -iu * id;
  s.I.bottomLeftCorner(n, n) = cx(-2) * iu * s.A;
  s.I.bottomRightCorner(n, n) = iu * id;

  s.J = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  s.J.topLeftCorner(n, n) = -s.A;
  s.J.topRightCorner(n, n) = id;
  s.J.bottomLeftCorner(n, n) = -id - s.A * s.A;
  s.J.bottomRightCorner(n, n) = s.A;

  s.K = s.I * s.J;

  s.g = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  s.g.topLeftCorner(n, n) = h;
  s.g.topRightCorner(n, n) = 0.5 * om;
  s.g.bottomLeftCorner(n, n) = -0.5 * om;
  return s;
}

FormTriple forms(const HKStructure& s, const DarbouxFrame& f) {
  const cx iu(0.0, 1.0);
  FormTriple t;
  t.omega_I = s.I.transpose() * s.g;
  t.omega_plus = (s.J + iu * s.K).transpose() * s.g;
  t.omega_minus = (s.J - iu * s.K).transpose() * s.g;
  (void)f;
  return t;
}

double closedness_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                         const XPoint& x, FormSelector sel, double step) {
  require_same_frame(f, w.n);
  const int m = 2 * w.n;
  auto field = [&](const XPoint& y) -> Eigen::MatrixXcd {
    FormTriple t = forms(build_hk(w, f, y), f);
    switch (sel) {
      case FormSelector::I: return t.omega_I;
      case FormSelector::plus: return t.omega_plus;
      default: return t.omega_minus;
    }
  };

  std::vector<Eigen::MatrixXcd> dform(m);
  for (int a = 0; a < m; ++a)
    dform[a] = (field(x.shifted(a, cx(step))) - field(x.shifted(a, cx(-step)))) /
               cx(2 * step);

  double worst = 0.0;
  for (int a = 0; a < m; ++a)
    for (int b = a + 1; b < m; ++b)
      for (int c = b + 1; c < m; ++c) {
        cx t = dform[a](b, c) - dform[b](a, c) + dform[c](a, b);
        worst = std::max(worst, std::abs(t));
      }
  return worst;
}

std::vector<Eigen::MatrixXcd> linear_joyce(const PlebanskiFunction& w,
                                           const DarbouxFrame& f,
                                           const Eigen::VectorXcd& z) {
  require_same_frame(f, w.n);
  const int n = w.n;
  XPoint x;
  x.z = z;
  x.theta = Eigen::VectorXcd::Zero(n);
  TaylorSeries<cx> jet(multiindex_table(2 * n, 3));
  try {
    jet = w.jet(x, 3);
  } catch (const PoleHit& e) {
    throw PoleAtZeroSection(e.what());
  }
  std::vector<Eigen::MatrixXcd> gamma(n, Eigen::MatrixXcd::Zero(n, n));
  for (int q = 0; q < n; ++q)
    for (int i = 0; i < n; ++i)
      for (int j = i; j < n; ++j) {
        cx v(0);
        for (int p = 0; p < n; ++p) {
          if (f.eta(q, p) == cx(0)) continue;
          v += f.eta(q, p) * ts_partial(jet, {n + i, n + j, n + p});
        }
        gamma[q](i, j) = v;
        gamma[q](j, i) = v;
      }
  return gamma;
}

double homogeneity_flow_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                               const XPoint& x, cx t) {
  require_same_frame(f, w.n);
  const int n = w.n;
  XPoint xs = x;
  xs.z *= t;

  HKStructure s0 = build_hk(w, f, x);
  HKStructure s1 = build_hk(w, f, xs);

  Eigen::VectorXcd dscale(2 * n);
  for (int k = 0; k < n; ++k) dscale(k) = t;
  for (int k = 0; k < n; ++k) dscale(n + k) = cx(1);
  Eigen::MatrixXcd d = dscale.asDiagonal();
  Eigen::MatrixXcd dinv = dscale.cwiseInverse().asDiagonal();

  const cx iu(0.0, 1.0);
  double worst = 0.0;
  auto acc = [&](const Eigen::MatrixXcd& m) {
    worst = std::max(worst, m.cwiseAbs().maxCoeff());
  };
  acc(d.transpose() * s1.g * d - t * s0.g);
  acc(dinv * s1.I * d - s0.I);
  acc(dinv * (s1.J + iu * s1.K) * d - (s0.J + iu * s0.K) / t);
  acc(dinv * (s1.J - iu * s1.K) * d - t * (s0.J - iu * s0.K));
  return worst;
}

}  // namespace joycekit
