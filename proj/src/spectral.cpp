#include "joycekit/spectral.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <utility>

namespace joycekit {

namespace {

using cxd = std::complex<double>;

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kTwoPi = 2.0 * kPi;
// Largest admitted argument swing of Q per integration piece, in radians.
constexpr double kArgCap = 1.0;

cxd poly_eval(const std::vector<cxd>& q, cxd x) {
  cxd acc(0.0, 0.0);
  for (size_t k = q.size(); k-- > 0;) acc = acc * x + q[k];
  return acc;
}

std::vector<cxd> poly_derivative(const std::vector<cxd>& q) {
  std::vector<cxd> d;
  for (size_t k = 1; k < q.size(); ++k) d.push_back(double(k) * q[k]);
  return d;
}

double dist_point_segment(cxd p, cxd a, cxd b) {
  const cxd d = b - a;
  const double len2 = std::norm(d);
  if (len2 == 0.0) return std::abs(p - a);
  double t = ((conj(d) * (p - a)).real()) / len2;
  t = std::clamp(t, 0.0, 1.0);
  return std::abs(p - (a + t * d));
}

double root_guard(cxd r) { return 1e-9 * (1.0 + std::abs(r)); }

void check_clearance(const SpectralData& data, cxd a, cxd b) {
  for (cxd r : data.roots) {
    if (dist_point_segment(r, a, b) < root_guard(r)) {
      throw TooClose("polyline passes within guard distance of a branch point");
    }
  }
}

// Upper bound on the total argument change of Q along the segment [a, b].
double arg_swing_bound(const SpectralData& data, cxd a, cxd b) {
  const double len = std::abs(b - a);
  double rate = 0.0;
  for (cxd r : data.roots) rate += 1.0 / dist_point_segment(r, a, b);
  return len * rate;
}

// Cumulative argument of Q at b, continued from the known value at a.
double track_arg(const SpectralData& data, cxd a, double cum_a, cxd b,
                 int depth = 0) {
  if (arg_swing_bound(data, a, b) <= kArgCap || depth > 80) {
    return cum_a + std::arg(poly_eval(data.q, b) / poly_eval(data.q, a));
  }
  const cxd m = 0.5 * (a + b);
  const double cum_m = track_arg(data, a, cum_a, m, depth + 1);
  return track_arg(data, m, cum_m, b, depth + 1);
}

// 15-point Kronrod extension of 7-point Gauss (positive half; symmetric).
constexpr double kGkNode[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769,
    0.741531185599394, 0.586087235467691, 0.405845151377397,
    0.207784955007898, 0.0};
constexpr double kKWeight[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250,
    0.140653259715525, 0.169004726639267, 0.190350578064785,
    0.204432940075298, 0.209482141084728};
// Gauss weights attach to nodes 1, 3, 5, 7 of the table above.
constexpr double kGWeight[4] = {0.129484966168870, 0.279705391489277,
                                0.381830050505119, 0.417959183673469};

struct QuadResult {
  cxd kronrod;
  double err;
};

// Integrates f over the straight segment [a, b]; f(x, w) sees the branch
// value w = sqrt(Q(x)) continued so that arg Q matches cum_a at a.
template <class F>
QuadResult gk15(const SpectralData& data, const F& f, cxd a, double cum_a,
                cxd b) {
  const cxd c = 0.5 * (a + b);
  const cxd h = 0.5 * (b - a);
  const cxd qa = poly_eval(data.q, a);
  cxd ksum(0.0, 0.0);
  cxd gsum(0.0, 0.0);
  for (int i = 0; i < 8; ++i) {
    for (int s = (i == 7 ? 1 : -1); s <= 1; s += 2) {
      const cxd x = c + (s * kGkNode[i]) * h;
      const cxd qx = poly_eval(data.q, x);
      const double cum = cum_a + std::arg(qx / qa);
      const cxd w = std::sqrt(std::abs(qx)) *
                    std::polar(1.0, 0.5 * cum);
      const cxd v = f(x, w);
      ksum += kKWeight[i] * v;
      if (i % 2 == 1) gsum += kGWeight[i / 2] * v;
    }
  }
  QuadResult r;
  r.kronrod = h * ksum;
  r.err = std::abs(h * (ksum - gsum));
  return r;
}

template <class F>
cxd integrate_piece(const SpectralData& data, const F& f, cxd a, double cum_a,
                    cxd b, double tol_per_len, int depth, int max_depth,
                    double& cum_b, double& err_acc) {
  const bool coherent = arg_swing_bound(data, a, b) <= kArgCap;
  if (coherent) {
    const QuadResult r = gk15(data, f, a, cum_a, b);
    if (r.err <= tol_per_len * std::abs(b - a)) {
      cum_b = cum_a + std::arg(poly_eval(data.q, b) / poly_eval(data.q, a));
      err_acc += r.err;
      return r.kronrod;
    }
    if (depth >= max_depth) {
      throw ToleranceUnreachable("quadrature bisection depth exhausted");
    }
  } else if (depth >= max_depth + 40) {
    throw ToleranceUnreachable("argument tracking cannot stabilize");
  }
  const cxd m = 0.5 * (a + b);
  double cum_m = 0.0;
  const cxd left = integrate_piece(data, f, a, cum_a, m, tol_per_len,
                                   depth + 1, max_depth, cum_m, err_acc);
  const cxd right = integrate_piece(data, f, m, cum_m, b, tol_per_len,
                                    depth + 1, max_depth, cum_b, err_acc);
  return left + right;
}

void validate_cycle(const SpectralData& data, const Cycle& cycle) {
  if (cycle.sheet != 1 && cycle.sheet != -1) {
    throw Error("cycle sheet label must be +1 or -1");
  }
  if (cycle.vertices.size() < 3) {
    throw Error("cycle needs at least three vertices");
  }
  const size_t n = cycle.vertices.size();
  for (size_t i = 0; i < n; ++i) {
    check_clearance(data, cycle.vertices[i], cycle.vertices[(i + 1) % n]);
  }
}

// Branch bookkeeping always starts from the principal argument; the sheet
// label enters as a plain sign factor so flipping it negates results exactly.
double start_cum(const SpectralData& data, const Cycle& cycle) {
  return std::arg(poly_eval(data.q, cycle.vertices.front()));
}

// Winding of Q around zero along the closed polyline, in half-turn units.
long long cycle_winding(const SpectralData& data, const Cycle& cycle,
                        double* cum_final = nullptr) {
  const size_t n = cycle.vertices.size();
  double cum = start_cum(data, cycle);
  const double cum0 = cum;
  for (size_t i = 0; i < n; ++i) {
    cum = track_arg(data, cycle.vertices[i], cum, cycle.vertices[(i + 1) % n]);
  }
  if (cum_final != nullptr) *cum_final = cum;
  const double turns = (cum - cum0) / kTwoPi;
  return std::llround(turns);
}

template <class F>
cxd integrate_cycle(const SpectralData& data, const Cycle& cycle,
                    const PeriodOptions& opt, const F& f, double* err_out) {
  validate_cycle(data, cycle);
  if (cycle_winding(data, cycle) % 2 != 0) {
    throw Error("cycle swaps sheets: odd winding around the branch points");
  }
  const size_t n = cycle.vertices.size();
  double total_len = 0.0;
  for (size_t i = 0; i < n; ++i) {
    total_len += std::abs(cycle.vertices[(i + 1) % n] - cycle.vertices[i]);
  }
  const double tol_per_len = opt.tol / total_len;
  double cum = start_cum(data, cycle);
  double err = 0.0;
  cxd acc(0.0, 0.0);
  for (size_t i = 0; i < n; ++i) {
    double cum_next = 0.0;
    acc += integrate_piece(data, f, cycle.vertices[i], cum,
                           cycle.vertices[(i + 1) % n], tol_per_len, 0,
                           opt.max_depth, cum_next, err);
    cum = cum_next;
  }
  if (err_out != nullptr) *err_out = err;
  return double(cycle.sheet) * acc;
}

std::vector<cxd> find_roots(const std::vector<cxd>& q_in) {
  std::vector<cxd> q = q_in;
  while (!q.empty() && q.back() == cxd(0.0, 0.0)) q.pop_back();
  if (q.size() < 3) {
    throw Error("polynomial must have degree at least 2");
  }
  const int n = static_cast<int>(q.size()) - 1;
  Eigen::MatrixXcd comp = Eigen::MatrixXcd::Zero(n, n);
  for (int i = 1; i < n; ++i) comp(i, i - 1) = 1.0;
  for (int i = 0; i < n; ++i) comp(i, n - 1) = -q[size_t(i)] / q[size_t(n)];
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(comp, false);
  const std::vector<cxd> dq = poly_derivative(q);
  std::vector<cxd> roots;
  roots.reserve(size_t(n));
  for (int i = 0; i < n; ++i) {
    cxd r = es.eigenvalues()(i);
    const cxd slope = poly_eval(dq, r);
    if (std::abs(slope) > 0.0) {
      // A simple root polishes by O(ulp); a large step means the derivative
      // is degenerate there, so keep the raw eigenvalue and let the
      // separation gate below decide.
      const cxd step = poly_eval(q, r) / slope;
      if (std::abs(step) <= 1e-6 * (1.0 + std::abs(r))) r -= step;
    }
    roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end(), [](cxd a, cxd b) {
    return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
  });
  return roots;
}

double min_separation(const std::vector<cxd>& roots) {
  double best = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < roots.size(); ++i) {
    for (size_t j = i + 1; j < roots.size(); ++j) {
      best = std::min(best, std::abs(roots[i] - roots[j]));
    }
  }
  return best;
}

}  // namespace

SpectralData branch_points(const std::vector<cxd>& q) {
  SpectralData data;
  data.q = q;
  data.roots = find_roots(q);
  double scale = 1.0;
  for (cxd r : data.roots) scale = std::max(scale, std::abs(r));
  if (data.roots.size() > 1 && min_separation(data.roots) < 1e-8 * scale) {
    throw RepeatedRoot("branch points closer than the separation tolerance");
  }
  data.resolved = true;
  return data;
}

Parity sheet_parity(const SpectralData& data, const Cycle& cycle) {
  validate_cycle(data, cycle);
  return cycle_winding(data, cycle) % 2 == 0 ? Parity::even : Parity::odd;
}

cxd period(const SpectralData& data, const Cycle& cycle,
           const PeriodOptions& opt) {
  return integrate_cycle(
      data, cycle, opt, [](cxd, cxd w) { return w; }, nullptr);
}

cxd period_derivative(const SpectralData& data, const Cycle& cycle, int k,
                      const PeriodOptions& opt) {
  if (k < 0) throw Error("coefficient index must be nonnegative");
  return integrate_cycle(
      data, cycle, opt,
      [k](cxd x, cxd w) { return std::pow(x, k) / (2.0 * w); }, nullptr);
}

PeriodVector compute_periods(const SpectralData& data,
                             const std::vector<Cycle>& cycles,
                             const PeriodOptions& opt) {
  PeriodVector out;
  for (const Cycle& c : cycles) {
    double err = 0.0;
    out.values.push_back(integrate_cycle(
        data, c, opt, [](cxd, cxd w) { return w; }, &err));
    out.errors.push_back(err);
  }
  return out;
}

namespace {

double cross2(cxd a, cxd b) { return a.real() * b.imag() - a.imag() * b.real(); }

// Sheet label (+1 or -1) of the cycle at point p on its segment i, given the
// cumulative argument at the segment's start vertex.
int sheet_label_at(const SpectralData& data, cxd seg_start, double cum_start,
                   cxd p) {
  const double cum = track_arg(data, seg_start, cum_start, p);
  const double principal = std::arg(poly_eval(data.q, p));
  const long long k = std::llround((cum - principal) / kTwoPi);
  return (k % 2 + 2) % 2 == 0 ? 1 : -1;
}

struct TrackedCycle {
  const Cycle* cycle;
  std::vector<double> vertex_cum;  // size n, cumulative arg at each vertex
};

TrackedCycle track_cycle(const SpectralData& data, const Cycle& cycle) {
  validate_cycle(data, cycle);
  TrackedCycle tc;
  tc.cycle = &cycle;
  const size_t n = cycle.vertices.size();
  double cum = start_cum(data, cycle);
  tc.vertex_cum.push_back(cum);
  for (size_t i = 0; i + 1 < n; ++i) {
    cum = track_arg(data, cycle.vertices[i], cum, cycle.vertices[i + 1]);
    tc.vertex_cum.push_back(cum);
  }
  return tc;
}

long long signed_crossings(const SpectralData& data, const TrackedCycle& A,
                           const TrackedCycle& B) {
  const std::vector<cxd>& va = A.cycle->vertices;
  const std::vector<cxd>& vb = B.cycle->vertices;
  const size_t na = va.size();
  const size_t nb = vb.size();
  long long total = 0;
  const double eps_t = 1e-9;
  const double angular_tol = 1e-8;
  for (size_t i = 0; i < na; ++i) {
    const cxd a0 = va[i];
    const cxd da = va[(i + 1) % na] - a0;
    for (size_t j = 0; j < nb; ++j) {
      const cxd b0 = vb[j];
      const cxd db = vb[(j + 1) % nb] - b0;
      const double det = cross2(da, db);
      const double scale = std::abs(da) * std::abs(db);
      const cxd rhs = b0 - a0;
      if (std::abs(det) <= angular_tol * scale) {
        // Near-parallel: flag only when the segments actually come close.
        const double d = std::min(
            std::min(dist_point_segment(b0, a0, a0 + da),
                     dist_point_segment(b0 + db, a0, a0 + da)),
            std::min(dist_point_segment(a0, b0, b0 + db),
                     dist_point_segment(a0 + da, b0, b0 + db)));
        if (d < 1e-9 * (1.0 + std::abs(a0))) {
          throw NonTransverse("segments are tangent or overlapping");
        }
        continue;
      }
      const double t = cross2(rhs, db) / det;
      const double u = cross2(rhs, da) / det;
      const bool t_in = t > eps_t && t < 1.0 - eps_t;
      const bool u_in = u > eps_t && u < 1.0 - eps_t;
      const bool t_near = t > -eps_t && t < 1.0 + eps_t;
      const bool u_near = u > -eps_t && u < 1.0 + eps_t;
      if (t_in && u_in) {
        const cxd p = a0 + t * da;
        const int sa =
            A.cycle->sheet * sheet_label_at(data, a0, A.vertex_cum[i], p);
        const int sb =
            B.cycle->sheet * sheet_label_at(data, b0, B.vertex_cum[j], p);
        if (sa == sb) total += det > 0.0 ? 1 : -1;
      } else if (t_near && u_near) {
        throw NonTransverse("crossing falls on or next to a vertex");
      }
    }
  }
  return total;
}

}  // namespace

std::vector<std::vector<long long>> intersection_matrix(
    const SpectralData& data, const std::vector<Cycle>& cycles) {
  std::vector<TrackedCycle> tracked;
  tracked.reserve(cycles.size());
  for (const Cycle& c : cycles) {
    if (cycle_winding(data, c) % 2 != 0) {
      throw Error("cycle swaps sheets: odd winding around the branch points");
    }
    tracked.push_back(track_cycle(data, c));
  }
  const size_t m = cycles.size();
  std::vector<std::vector<long long>> M(m, std::vector<long long>(m, 0));
  for (size_t i = 0; i < m; ++i) {
    for (size_t j = 0; j < m; ++j) {
      if (i == j) continue;
      M[i][j] = signed_crossings(data, tracked[i], tracked[j]);
    }
  }
  return M;
}

int period_jacobian_rank(const SpectralData& data,
                         const std::vector<Cycle>& cycles,
                         const DeformationSlice& slice,
                         const PeriodOptions& opt) {
  if (cycles.empty() || slice.directions.empty()) return 0;
  for (const auto& d : slice.directions) {
    if (d.size() != data.q.size()) {
      throw Error("deformation direction length must match the coefficients");
    }
  }
  double qscale = 1.0;
  for (cxd c : data.q) qscale = std::max(qscale, std::abs(c));
  const double base_sep = min_separation(data.roots);

  Eigen::MatrixXcd J(cycles.size(), slice.directions.size());
  for (size_t k = 0; k < slice.directions.size(); ++k) {
    const auto& dir = slice.directions[k];
    double dscale = 0.0;
    for (cxd c : dir) dscale = std::max(dscale, std::abs(c));
    if (dscale == 0.0) {
      for (size_t i = 0; i < cycles.size(); ++i) J(long(i), long(k)) = 0.0;
      continue;
    }
    const double h = 1e-5 * qscale / dscale;
    SpectralData plus;
    SpectralData minus;
    plus.q = data.q;
    minus.q = data.q;
    for (size_t c = 0; c < dir.size(); ++c) {
      plus.q[c] += h * dir[c];
      minus.q[c] -= h * dir[c];
    }
    plus.roots = find_roots(plus.q);
    minus.roots = find_roots(minus.q);
    plus.resolved = true;
    minus.resolved = true;
    // Continuation check: every perturbed root must stay near a base root.
    for (const SpectralData* side : {&plus, &minus}) {
      for (cxd r : side->roots) {
        double nearest = std::numeric_limits<double>::infinity();
        for (cxd r0 : data.roots) nearest = std::min(nearest, std::abs(r - r0));
        if (nearest > 0.3 * base_sep) {
          throw RootCollision("perturbation moved a branch point too far");
        }
      }
    }
    for (size_t i = 0; i < cycles.size(); ++i) {
      const cxd pp = period(plus, cycles[i], opt);
      const cxd pm = period(minus, cycles[i], opt);
      J(long(i), long(k)) = (pp - pm) / (2.0 * h);
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(0) <= 0.0) return 0;
  int rank = 0;
  for (long i = 0; i < sv.size(); ++i) {
    if (sv(i) > 1e-6 * sv(0)) ++rank;
  }
  return rank;
}

std::vector<Cycle> suggest_cycles(const SpectralData& data, double margin) {
  std::vector<Cycle> out;
  for (size_t i = 0; i + 1 < data.roots.size(); ++i) {
    const cxd a = data.roots[i];
    const cxd b = data.roots[i + 1];
    const cxd u = (b - a) / std::abs(b - a);
    const cxd v = cxd(0.0, 1.0) * u;
    // Staggered margins keep consecutive rectangles transverse.
    const double m = margin * std::abs(b - a) * (1.0 + double(i) / 8.0);
    Cycle c;
    c.sheet = 1;
    c.vertices = {a - m * u - m * v, b + m * u - m * v, b + m * u + m * v,
                  a - m * u + m * v};
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace joycekit
