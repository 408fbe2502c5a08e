#include "joycekit/stokes.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>

#include "joycekit/dd.hpp"
#include "joycekit/ode.hpp"
#include "joycekit/smallmat.hpp"

namespace joycekit {
namespace {

using zd = std::complex<double>;
constexpr double kPi = std::numbers::pi;

double wrap_pi(double a) {
  a = std::fmod(a, 2.0 * kPi);
  if (a <= -kPi) a += 2.0 * kPi;
  if (a > kPi) a -= 2.0 * kPi;
  return a;
}

template <class C>
struct num_traits;

template <>
struct num_traits<zd> {
  static constexpr double ulp = 2.3e-16;
  static constexpr double min_rtol = 6.9e-15;
  static zd from_cx(const zd& v) { return v; }
  static zd to_cx(const zd& v) { return v; }
  static zd exp(const zd& v) { return std::exp(v); }
  static zd two(double re, double im) { return {re, im}; }
  static zd polar_pt(double r, double phi) { return std::polar(r, phi); }
  static zd cis_k(int k, double phi) { return std::polar(1.0, k * phi); }
};

template <>
struct num_traits<qcomplex> {
  static constexpr double ulp = 1.3e-32;
  static constexpr double min_rtol = 3e-18;
  static qcomplex from_cx(const zd& v) { return qcomplex(v); }
  static zd to_cx(const qcomplex& v) { return joycekit::to_cx(v); }
  static qcomplex exp(const qcomplex& v) { return qexp(v); }
  static qcomplex two(double re, double im) { return {dd(re), dd(im)}; }
  static qcomplex polar_pt(double r, double phi) {
    qcomplex c = qcis(dd(phi));
    return {dd(r) * c.re, dd(r) * c.im};
  }
  static qcomplex cis_k(int k, double phi) {
    return qcis(dd(static_cast<double>(k)) * dd(phi));
  }
};

template <class C>
struct Core {
  int n = 0;
  std::vector<C> u;
  SmallMat<C> Vt;
  std::vector<C> dg;  // diagonal exponent, diag(Vt)
};

template <class C>
Core<C> build_core(const StokesProblem& p) {
  using T = num_traits<C>;
  Core<C> c;
  c.n = static_cast<int>(p.u.size());
  c.u.resize(c.n);
  c.dg.resize(c.n);
  c.Vt = SmallMat<C>(c.n, c.n);
  for (int i = 0; i < c.n; ++i) {
    c.u[i] = T::from_cx(p.u(i));
    c.dg[i] = T::from_cx(p.D(i));
    for (int j = 0; j < c.n; ++j) c.Vt(i, j) = T::from_cx(p.Vt(i, j));
  }
  return c;
}

// Largest outward amplification rate at direction phi and the smallest
// spectral gap; both govern the anchor radius.
struct DirectionBudget {
  double c_max = 0.0;
  double gap_min = 0.0;
};

DirectionBudget direction_budget(const StokesProblem& p, double phi) {
  DirectionBudget b;
  const int n = static_cast<int>(p.u.size());
  b.gap_min = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      zd d = p.u(i) - p.u(j);
      b.c_max = std::max(b.c_max, (d * std::polar(1.0, -phi)).real());
      double g = std::abs(d);
      if (b.gap_min == 0.0 || g < b.gap_min) b.gap_min = g;
    }
  return b;
}

// Anchor radius balancing the residual series error (wants small r) against
// the outward amplification of anchor and integration errors (wants large
// r).  seed is the relative error the continuation commits per step; the
// halved radius used by the confirmation pass must stay inside the
// amplification budget, hence the factor two in r_lo.
double anchor_radius(const StokesProblem& p, double phi, double target_radius,
                     double tol, double seed) {
  const int n = static_cast<int>(p.u.size());
  double voff = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) voff = std::max(voff, std::abs(p.Vt(i, j)));
  // no off-diagonal coupling: the normalized solution is exactly trivial and
  // nothing amplifies, so any modest radius serves
  if (voff == 0.0) return std::min(0.1, 0.5 * target_radius);

  DirectionBudget b = direction_budget(p, phi);
  if (b.gap_min == 0.0) return std::min(0.05, 0.05 * target_radius);
  double margin = b.gap_min - b.c_max;
  if (margin <= 0.02 * b.gap_min)
    throw ToleranceUnreachable(
        "anchor direction dominated by a wide eigenvalue pair");
  double budget = 0.1 * tol / seed;
  if (budget <= 1.0)
    throw ToleranceUnreachable("tolerance below the precision budget");
  double r_hi = margin / std::log(10.0 / tol);
  double r_lo = b.c_max > 1e-9 * b.gap_min ? 2.0 * b.c_max / std::log(budget)
                                           : r_hi / 16.0;
  if (r_lo > r_hi)
    throw ToleranceUnreachable("amplification budget excludes every radius");
  double r = std::sqrt(r_lo * r_hi);
  r = std::min(r, 0.4 * target_radius);
  r = std::clamp(r, 1e-7, 0.2);
  if (r < 0.99 * r_lo)
    throw ToleranceUnreachable("target radius too small for this tolerance");
  return r;
}

// Truncated normalized expansion at r e^{i phi}, summed to its least term.
// H_k stores r^k times the k-th coefficient, so every retained term has unit
// scale or below and the recursion never overflows.
template <class C>
struct AnchorResult {
  SmallMat<C> psi;
  double eta = 0.0;
  int terms = 0;
};

template <class C>
AnchorResult<C> anchor_series(const Core<C>& core, double r, double phi) {
  using T = num_traits<C>;
  const int n = core.n;
  AnchorResult<C> out;
  out.psi = SmallMat<C>::identity(n);

  SmallMat<C> H(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (i != j) H(i, j) = C(-r) * core.Vt(i, j) / (core.u[i] - core.u[j]);
  for (int i = 0; i < n; ++i) {
    C s(0.0);
    for (int m = 0; m < n; ++m)
      if (m != i) s += core.Vt(i, m) * H(m, i);
    H(i, i) = s;
  }

  double tau_prev = max_abs(H);
  if (tau_prev == 0.0) return out;

  const int kcap = 5000;
  for (int k = 1; k <= kcap; ++k) {
    C phase = T::cis_k(k, phi);
    for (size_t e = 0; e < H.a.size(); ++e) out.psi.a[e] += phase * H.a[e];
    out.terms = k;
    out.eta = tau_prev;

    // build the next scaled coefficient
    SmallMat<C> B(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        C v = C(static_cast<double>(k)) * H(i, j) + H(i, j) * core.dg[j];
        for (int m = 0; m < n; ++m) v -= core.Vt(i, m) * H(m, j);
        B(i, j) = v;
      }
    SmallMat<C> Hn(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (i != j) Hn(i, j) = C(r) * B(i, j) / (core.u[i] - core.u[j]);
    for (int i = 0; i < n; ++i) {
      C s(0.0);
      for (int m = 0; m < n; ++m)
        if (m != i) s += core.Vt(i, m) * Hn(m, i);
      Hn(i, i) = s / C(static_cast<double>(k + 1));
    }
    double tau = max_abs(Hn);
    if (tau >= tau_prev || tau < 1e-40) {
      if (tau < tau_prev) {  // vanished outright; count it as retained
        for (size_t e = 0; e < Hn.a.size(); ++e)
          out.psi.a[e] += T::cis_k(k + 1, phi) * Hn.a[e];
        out.terms = k + 1;
        out.eta = tau;
      }
      return out;
    }
    H = Hn;
    tau_prev = tau;
  }
  return out;
}

struct PolarPt {
  double r = 0.0, phi = 0.0;
};

// Continues the normalized matrix along straight chords between the polar
// waypoints.  The equation for Psi = Phi eps^{-D} e^{U/eps} keeps every
// entry on the slow scale, so a uniform relative error measure works.
template <class C>
SmallMat<C> integrate_psi(const Core<C>& core, SmallMat<C> psi,
                          const std::vector<PolarPt>& pts) {
  using T = num_traits<C>;
  const int n = core.n;
  OdeOptions opt;
  opt.rtol = T::min_rtol;
  opt.atol = T::ulp;
  opt.max_steps = 2000000;

  auto scaled_error = [&](const SmallMat<C>& err, const SmallMat<C>& ya,
                          const SmallMat<C>& yb) {
    double sc = opt.atol + opt.rtol * std::max(max_abs(ya), max_abs(yb));
    return max_abs(err) / sc;
  };

  for (size_t s = 0; s + 1 < pts.size(); ++s) {
    C ea = T::polar_pt(pts[s].r, pts[s].phi);
    C eb = T::polar_pt(pts[s + 1].r, pts[s + 1].phi);
    C dir = eb - ea;
    if (mat_abs(dir) == 0.0) continue;
    auto rhs = [&](double tau, const SmallMat<C>& y) {
      C eps = ea + C(tau) * dir;
      C inv = C(1.0) / eps;
      C inv2 = inv * inv;
      SmallMat<C> d(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          C v = (core.u[i] - core.u[j]) * y(i, j) * inv2;
          C w = -y(i, j) * core.dg[j];
          for (int m = 0; m < n; ++m) w += core.Vt(i, m) * y(m, j);
          d(i, j) = dir * (v + w * inv);
        }
      return d;
    };
    psi = integrate_ode(psi, 0.0, 1.0, rhs, opt, scaled_error, nullptr,
                        [](double, const SmallMat<C>&) {});
  }
  return psi;
}

// Normalized solution continued from its anchor to the polar target.
template <class C>
SmallMat<C> canonical_psi(const StokesProblem& p, const Core<C>& core,
                          double phi_dir, PolarPt target, double tol,
                          double anchor_scale, double* eta_out) {
  double r = anchor_radius(p, phi_dir, target.r, tol, num_traits<C>::min_rtol) *
             anchor_scale;
  AnchorResult<C> a = anchor_series(core, r, phi_dir);
  if (eta_out) *eta_out = std::max(*eta_out, a.eta);
  std::vector<PolarPt> pts;
  pts.push_back({r, phi_dir});
  pts.push_back({target.r, phi_dir});
  if (target.phi != phi_dir) pts.push_back(target);
  return integrate_psi(core, a.psi, pts);
}

// Conjugates the constant linking matrix back to the solution normalization:
// S = eps^{-D} e^{U/eps} X e^{-U/eps} eps^{D} entry by entry.
template <class C>
Eigen::MatrixXcd diag_conjugate(const Core<C>& core, const SmallMat<C>& X,
                                PolarPt at) {
  using T = num_traits<C>;
  const int n = core.n;
  C leps = T::two(std::log(at.r), at.phi);
  C inv_eps = C(1.0) / T::polar_pt(at.r, at.phi);
  Eigen::MatrixXcd S(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      C e = T::exp((core.u[i] - core.u[j]) * inv_eps +
                   (core.dg[j] - core.dg[i]) * leps);
      S(i, j) = T::to_cx(X(i, j) * e);
    }
  return S;
}

int ray_gap_sides(const std::vector<StokesRay>& rays, int k, double* before,
                  double* after) {
  const int m = static_cast<int>(rays.size());
  double phi = rays[k].phi;
  double prev = rays[(k + m - 1) % m].phi;
  double next = rays[(k + 1) % m].phi;
  *before = phi - prev;
  if (*before <= 0.0) *before += 2.0 * kPi;
  *after = next - phi;
  if (*after <= 0.0) *after += 2.0 * kPi;
  return m;
}

template <class C>
StokesFactorResult factor_impl(const StokesProblem& p, int ray_index,
                               const StokesOptions& opt) {
  auto rays = stokes_rays(p);
  if (ray_index < 0 || ray_index >= static_cast<int>(rays.size()))
    throw Error("ray index out of range");
  Core<C> core = build_core<C>(p);
  const int n = core.n;

  double gb = 0.0, ga = 0.0;
  ray_gap_sides(rays, ray_index, &gb, &ga);
  double phi = rays[ray_index].phi;
  double phi_b = phi - 0.45 * gb;
  double phi_a = phi + 0.45 * ga;
  PolarPt at{opt.eval_radius, phi};

  StokesFactorResult out;
  out.ray_index = ray_index;
  Eigen::MatrixXcd full, half;
  for (double scale : {1.0, 0.5}) {
    double eta = 0.0;
    SmallMat<C> pb = canonical_psi(p, core, phi_b, at, opt.tol, scale, &eta);
    SmallMat<C> pa = canonical_psi(p, core, phi_a, at, opt.tol, scale, &eta);
    Eigen::MatrixXcd f = diag_conjugate(core, lu_solve(pb, pa), at);
    out.anchor_eta = std::max(out.anchor_eta, eta);
    (scale == 1.0 ? full : half) = f;
  }
  out.factor = half;
  double scale_ref = std::max(1.0, half.cwiseAbs().maxCoeff());
  out.halving_defect = (full - half).cwiseAbs().maxCoeff() / scale_ref;

  Eigen::MatrixXcd dev = out.factor - Eigen::MatrixXcd::Identity(n, n);
  for (auto [i, j] : rays[ray_index].pairs) dev(i, j) = 0.0;
  out.unipotency_defect = dev.cwiseAbs().maxCoeff();
  return out;
}

template <class C>
MonodromyResult monodromy_impl(const StokesProblem& p,
                               const StokesOptions& opt) {
  auto rays = stokes_rays(p);
  Core<C> core = build_core<C>(p);
  const int n = core.n;
  using T = num_traits<C>;

  // base direction: bisector of the widest gap
  double base = 0.0;
  if (rays.empty()) {
    base = 0.3;
  } else {
    double best = -1.0;
    const int m = static_cast<int>(rays.size());
    for (int k = 0; k < m; ++k) {
      double next = rays[(k + 1) % m].phi;
      double gap = next - rays[k].phi;
      if (gap <= 0.0) gap += 2.0 * kPi;
      if (gap > best) {
        best = gap;
        base = rays[k].phi + 0.5 * gap;
      }
    }
    base = wrap_pi(base);
  }

  double R = opt.monodromy_radius;
  PolarPt at{R, base};
  double eta = 0.0;
  SmallMat<C> psi0 = canonical_psi(p, core, base, at, opt.tol, 1.0, &eta);

  const int legs = 64;
  std::vector<PolarPt> loop;
  for (int j = 0; j <= legs; ++j)
    loop.push_back({R, base + 2.0 * kPi * j / legs});
  SmallMat<C> psi_loop = integrate_psi(core, psi0, loop);

  SmallMat<C> X = lu_solve(psi0, psi_loop);
  C leps = T::two(std::log(R), base);
  C inv_eps = C(1.0) / T::polar_pt(R, base);
  Eigen::MatrixXcd M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      C e = T::exp((core.u[i] - core.u[j]) * inv_eps +
                   (core.dg[j] - core.dg[i]) * leps +
                   T::two(0.0, 2.0 * kPi) * core.dg[j]);
      M(i, j) = T::to_cx(X(i, j) * e);
    }

  MonodromyResult out;
  out.direct = M;
  out.base_angle = base;

  // counterclockwise crossing order starting just past the base direction
  const int m = static_cast<int>(rays.size());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    double da = rays[a].phi - base;
    double db = rays[b].phi - base;
    if (da <= 0.0) da += 2.0 * kPi;
    if (db <= 0.0) db += 2.0 * kPi;
    return da < db;
  });

  Eigen::MatrixXcd fwd = Eigen::MatrixXcd::Identity(n, n);
  Eigen::MatrixXcd revinv = Eigen::MatrixXcd::Identity(n, n);
  for (int k : order) {
    Eigen::MatrixXcd f = factor_impl<C>(p, k, opt).factor;
    fwd = fwd * f;
    revinv = f.inverse() * revinv;
  }
  Eigen::MatrixXcd branch = Eigen::MatrixXcd::Zero(n, n);
  for (int j = 0; j < n; ++j)
    branch(j, j) = std::exp(zd(0.0, 2.0 * kPi) * p.D(j));

  std::array<Eigen::MatrixXcd, 4> cand = {
      branch * revinv, revinv * branch, fwd * branch, branch * fwd};
  std::array<std::string, 4> names = {
      "branch_then_reversed_inverses", "reversed_inverses_then_branch",
      "forward_product_then_branch", "branch_then_forward_product"};
  double mscale = std::max(1e-300, M.cwiseAbs().maxCoeff());
  int best = 0;
  for (int c = 0; c < 4; ++c) {
    out.candidate_defects[c] = (M - cand[c]).cwiseAbs().maxCoeff() / mscale;
    if (out.candidate_defects[c] < out.candidate_defects[best]) best = c;
  }
  out.from_factors = cand[best];
  out.winner = names[best];
  out.defect = out.candidate_defects[best];
  return out;
}

template <class C>
Eigen::MatrixXcd canonical_impl(const StokesProblem& p, double phi,
                                double radius, const StokesOptions& opt) {
  auto rays = stokes_rays(p);
  for (const auto& r : rays)
    if (std::abs(wrap_pi(phi - r.phi)) < 1e-8)
      throw StokesAngle("direction lies on a singular ray");
  Core<C> core = build_core<C>(p);
  PolarPt at{radius, phi};
  double eta = 0.0;
  SmallMat<C> psi = canonical_psi(p, core, phi, at, opt.tol, 1.0, &eta);

  using T = num_traits<C>;
  C leps = T::two(std::log(radius), phi);
  C inv_eps = C(1.0) / T::polar_pt(radius, phi);
  Eigen::MatrixXcd out(core.n, core.n);
  for (int i = 0; i < core.n; ++i)
    for (int j = 0; j < core.n; ++j) {
      C e = T::exp(C(0.0) - core.u[j] * inv_eps + core.dg[j] * leps);
      out(i, j) = T::to_cx(psi(i, j) * e);
    }
  return out;
}

}  // namespace

StokesProblem make_stokes(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& V) {
  const int n = static_cast<int>(U.rows());
  if (U.cols() != n || V.rows() != n || V.cols() != n || n < 1)
    throw Error("coefficient matrices must be square and same size");
  StokesProblem p;
  p.U = U;
  p.V = V;

  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(U);
  if (es.info() != Eigen::Success) throw Error("eigenvalue iteration failed");
  Eigen::VectorXcd vals = es.eigenvalues();
  Eigen::MatrixXcd vecs = es.eigenvectors();
  std::vector<int> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    if (vals(a).real() != vals(b).real()) return vals(a).real() < vals(b).real();
    return vals(a).imag() < vals(b).imag();
  });
  p.u.resize(n);
  p.basis.resize(n, n);
  for (int k = 0; k < n; ++k) {
    p.u(k) = vals(idx[k]);
    p.basis.col(k) = vecs.col(idx[k]);
  }
  double umax = 0.0;
  for (int i = 0; i < n; ++i) umax = std::max(umax, std::abs(p.u(i)));
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(p.u(i) - p.u(j)) < 1e-10 * (1.0 + umax))
        throw DegenerateEigenvalues("eigenvalues of the leading matrix collide");
  p.basis_inv = p.basis.inverse();
  p.Vt = p.basis_inv * V * p.basis;
  p.D = p.Vt.diagonal();
  return p;
}

std::vector<StokesRay> stokes_rays(const StokesProblem& p) {
  const int n = static_cast<int>(p.u.size());
  struct Entry {
    double phi;
    int i, j;
  };
  std::vector<Entry> es;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      es.push_back({std::arg(p.u(i) - p.u(j)), i, j});
    }
  std::sort(es.begin(), es.end(),
            [](const Entry& a, const Entry& b) { return a.phi < b.phi; });
  std::vector<StokesRay> rays;
  for (const auto& e : es) {
    if (!rays.empty() && std::abs(e.phi - rays.back().phi) < 1e-9) {
      rays.back().pairs.emplace_back(e.i, e.j);
    } else {
      rays.push_back({e.phi, {{e.i, e.j}}});
    }
  }
  return rays;
}

Eigen::MatrixXcd canonical_solution(const StokesProblem& p, double phi,
                                    double radius, const StokesOptions& opt) {
  if (opt.precision == Precision::extended)
    return canonical_impl<qcomplex>(p, phi, radius, opt);
  return canonical_impl<zd>(p, phi, radius, opt);
}

StokesFactorResult stokes_factor(const StokesProblem& p, int ray_index,
                                 const StokesOptions& opt) {
  if (opt.precision == Precision::extended)
    return factor_impl<qcomplex>(p, ray_index, opt);
  return factor_impl<zd>(p, ray_index, opt);
}

MonodromyResult stokes_monodromy(const StokesProblem& p,
                                 const StokesOptions& opt) {
  if (opt.precision == Precision::extended)
    return monodromy_impl<qcomplex>(p, opt);
  return monodromy_impl<zd>(p, opt);
}

}  // namespace joycekit
