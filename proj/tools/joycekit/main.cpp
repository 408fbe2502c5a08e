#include <CLI11.hpp>
#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <sstream>
#include <string>
#include <vector>

#include "joycekit/errors.hpp"
#include "joycekit/heavenly.hpp"
#include "joycekit/hyperkahler.hpp"
#include "joycekit/lagrangian.hpp"
#include "joycekit/rational.hpp"
#include "joycekit/report.hpp"
#include "joycekit/selftest.hpp"
#include "joycekit/spectral.hpp"
#include "joycekit/stokes.hpp"
#include "joycekit/textio.hpp"
#include "joycekit/twistor.hpp"
#include "joycekit/wallcross.hpp"

namespace {

using joycekit::cx;
using cxd = std::complex<double>;
using ojson = nlohmann::ordered_json;

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw joycekit::Error("cannot open file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw joycekit::Error("cannot open output file: " + path);
  out << text;
}

// Integer mix with full avalanche; drives the seeded sample offsets so that
// equal seeds give byte-identical reports and different seeds move the
// generic base point.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

double unit_fraction(std::uint64_t h) {
  return double(h >> 11) * 0x1.0p-53;
}

// Fibre coordinates sweep the real grid; the base sits at one generic point
// off the real axis so potentials with base poles stay regular.  The sweep
// is truncated at cap points to keep absurd grid requests bounded.
std::vector<joycekit::XPoint> grid_samples(int n, const joycekit::GridSpec& g,
                                           long long cap, std::uint64_t seed) {
  std::vector<joycekit::XPoint> out;
  Eigen::VectorXcd z(n);
  const double span = g.hi - g.lo;
  for (int k = 0; k < n; ++k) {
    const double u = unit_fraction(mix64(seed * 1000003ull + std::uint64_t(k)));
    const double v =
        unit_fraction(mix64(seed * 1000003ull + std::uint64_t(n + k)));
    z(k) = cx((g.lo + g.hi) / 2.0 +
                  (0.25 + 0.3 * u) * span * double(k + 1) / double(n + 1),
              (0.2 + 0.2 * v) * span);
  }
  std::vector<int> idx(size_t(n), 0);
  while (true) {
    joycekit::XPoint x;
    x.z = z;
    x.theta = Eigen::VectorXcd(n);
    for (int k = 0; k < n; ++k) {
      const double frac =
          g.points == 1 ? 0.5 : double(idx[size_t(k)]) / double(g.points - 1);
      x.theta(k) = cx(g.lo + span * frac);
    }
    out.push_back(std::move(x));
    if (static_cast<long long>(out.size()) >= cap) break;
    int k = 0;
    while (k < n && ++idx[size_t(k)] == g.points) {
      idx[size_t(k)] = 0;
      ++k;
    }
    if (k == n) break;
  }
  return out;
}

ojson complex_json(cxd v) { return joycekit::format_complex(v); }

ojson matrix_json(const Eigen::MatrixXcd& m) {
  ojson rows = ojson::array();
  for (long i = 0; i < m.rows(); ++i) {
    ojson row = ojson::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(complex_json(m(i, j)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Eigen::VectorXi unit_shift(int n, int k) {
  Eigen::VectorXi v = Eigen::VectorXi::Zero(n);
  v(k) = 1;
  return v;
}

struct CommonOpts {
  std::string out_dir = ".";
  std::string precision = "double";
  bool svg = false;
  std::uint64_t seed = 0;
};

joycekit::Precision effective_precision(const CommonOpts& c) {
  std::string mode = c.precision;
  if (const char* env = std::getenv("JOYCEKIT_PRECISION")) {
    mode = env;
  }
  if (mode == "double") return joycekit::Precision::double_prec;
  if (mode == "extended") return joycekit::Precision::extended;
  throw joycekit::ParseError("precision must be double or extended");
}

std::string precision_name(joycekit::Precision p) {
  return p == joycekit::Precision::extended ? "extended" : "double";
}

void emit(const CommonOpts& c, const ojson& report) {
  const std::string path = c.out_dir + "/report.json";
  joycekit::write_report(path, report);
  std::cout << joycekit::render_report(report);
}

// ---------------------------------------------------------------------------

int cmd_heavenly(const CommonOpts& c, const std::string& w_file, int d,
                 const std::string& grid, double tol) {
  const joycekit::GridSpec g = joycekit::parse_grid(grid);
  const int n = 2 * d;
  const joycekit::DarbouxFrame f = joycekit::make_frame(d);
  const joycekit::PlebanskiFunction w =
      joycekit::PlebanskiFunction::parse(read_text_file(w_file), n);
  const auto samples = grid_samples(n, g, 20000, c.seed);

  double max_res = 0.0, max_flat = 0.0;
  const std::vector<cx> eps_list = {cx(0.0), cx(1.0), cx(0.0, 1.0)};
  for (const joycekit::XPoint& x : samples) {
    max_res = std::max(
        max_res, joycekit::heavenly_residual(w, f, x).cwiseAbs().maxCoeff());
    for (cx e : eps_list) {
      for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
          max_flat = std::max(max_flat, joycekit::flatness_defect(w, f, x, e, i, j)
                                            .cwiseAbs()
                                            .maxCoeff());
        }
      }
    }
  }
  std::vector<Eigen::VectorXi> lattice;
  for (int k = 0; k < n; ++k) lattice.push_back(unit_shift(n, k));
  const std::vector<joycekit::XPoint> sym_samples(
      samples.begin(), samples.begin() + std::min<size_t>(samples.size(), 8));
  const joycekit::SymmetryDefects sym = joycekit::symmetry_defects(
      w, sym_samples, lattice, {cx(2.0), cx(0.5), cx(1.3, 0.0)});

  ojson r = joycekit::report_skeleton("heavenly-check");
  r["tolerances"] = {{"defect", tol}};
  r["seed"] = c.seed;
  r["grid_points"] = samples.size();
  r["max_residual"] = max_res;
  r["max_flatness_defect"] = max_flat;
  r["symmetry_defects"] = {{"periodic", sym.periodic},
                           {"homogeneous", sym.homogeneous},
                           {"odd", sym.odd}};
  emit(c, r);
  return (max_res <= tol && max_flat <= tol) ? 0 : 1;
}

int cmd_hk(const CommonOpts& c, const std::string& w_file, int d,
           const std::string& grid, double tol, double closed_tol,
           double step) {
  const joycekit::GridSpec g = joycekit::parse_grid(grid);
  const int n = 2 * d;
  const joycekit::DarbouxFrame f = joycekit::make_frame(d);
  const joycekit::PlebanskiFunction w =
      joycekit::PlebanskiFunction::parse(read_text_file(w_file), n);
  const auto samples = grid_samples(n, g, 500, c.seed);

  const Eigen::MatrixXcd id =
      Eigen::MatrixXcd::Identity(2 * n, 2 * n);
  double quat = 0.0, metric = 0.0;
  for (const joycekit::XPoint& x : samples) {
    const joycekit::HKStructure s = joycekit::build_hk(w, f, x);
    const auto dmax = [](const Eigen::MatrixXcd& m) {
      return m.cwiseAbs().maxCoeff();
    };
    quat = std::max({quat, dmax(s.I * s.I + id), dmax(s.J * s.J + id),
                     dmax(s.K * s.K + id), dmax(s.I * s.J - s.K)});
    metric = std::max({metric, dmax(s.g - s.g.transpose()),
                       dmax(s.I.transpose() * s.g * s.I - s.g),
                       dmax(s.J.transpose() * s.g * s.J - s.g),
                       dmax(s.K.transpose() * s.g * s.K - s.g)});
  }
  const joycekit::XPoint& x0 = samples.front();
  const double ci =
      joycekit::closedness_defect(w, f, x0, joycekit::FormSelector::I, step);
  const double cp =
      joycekit::closedness_defect(w, f, x0, joycekit::FormSelector::plus, step);
  const double cm =
      joycekit::closedness_defect(w, f, x0, joycekit::FormSelector::minus, step);

  ojson r = joycekit::report_skeleton("hk-verify");
  r["tolerances"] = {{"identity", tol}, {"closedness", closed_tol}};
  r["seed"] = c.seed;
  r["grid_points"] = samples.size();
  r["quaternion_defect"] = quat;
  r["metric_defect"] = metric;
  r["closedness"] = {{"I", ci}, {"plus", cp}, {"minus", cm}};
  try {
    const auto gamma = joycekit::linear_joyce(w, f, x0.z);
    ojson arr = ojson::array();
    for (const Eigen::MatrixXcd& m : gamma) arr.push_back(matrix_json(m));
    r["joyce_connection"] = std::move(arr);
  } catch (const joycekit::PoleAtZeroSection&) {
    r["joyce_connection"] = "pole-at-zero-section";
  }
  emit(c, r);
  const bool ok = quat <= tol && metric <= tol && ci <= closed_tol &&
                  cp <= closed_tol && cm <= closed_tol;
  return ok ? 0 : 1;
}

int cmd_lagrangian(const CommonOpts& c, const std::string& w_file,
                   const std::string& fix, const std::string& grid,
                   double tol) {
  const std::vector<cxd> fixed = joycekit::parse_complex_list(fix);
  const int d = int(fixed.size());
  const int n = 2 * d;
  const joycekit::GridSpec g = joycekit::parse_grid(grid);
  const joycekit::DarbouxFrame f = joycekit::make_frame(d);
  const joycekit::PlebanskiFunction w =
      joycekit::PlebanskiFunction::parse(read_text_file(w_file), n);

  joycekit::LagrangianFibration b;
  b.fixed_base = Eigen::VectorXcd(d);
  for (int k = 0; k < d; ++k) b.fixed_base(k) = fixed[size_t(k)];

  // Chart samples: base and normal coordinates from the grid range, three
  // lifts per point.
  const double span = g.hi - g.lo;
  std::vector<joycekit::XPoint> samples;
  std::vector<std::pair<joycekit::LagrangianPoint, Eigen::VectorXcd>> charts;
  const int chart_count = std::min(g.points * g.points, 9);
  for (int s = 0; s < chart_count; ++s) {
    joycekit::LagrangianPoint y;
    y.base = Eigen::VectorXcd(d);
    y.normal = Eigen::VectorXcd(d);
    for (int k = 0; k < d; ++k) {
      const double u = unit_fraction(
          mix64(c.seed * 1000003ull + std::uint64_t(16 + 2 * (s * d + k))));
      const double v = unit_fraction(
          mix64(c.seed * 1000003ull + std::uint64_t(17 + 2 * (s * d + k))));
      y.base(k) = cx(g.lo + span * (0.15 + 0.1 * double((s + k) % 8) + 0.04 * u),
                     0.2 * span);
      y.normal(k) =
          cx(g.lo + span * (0.85 - 0.1 * double((s + 2 * k) % 8) - 0.04 * v),
             -0.15 * span);
    }
    for (double lv : {0.0, 0.6, -1.1}) {
      Eigen::VectorXcd lift = Eigen::VectorXcd::Constant(d, cx(lv, 0.3 * lv));
      samples.push_back(joycekit::assemble_point(f, b, y, lift));
      if (lv == 0.0) charts.emplace_back(y, lift);
    }
  }
  const double gd3 = joycekit::good_defect3(w, f, samples);
  const double gd4 = joycekit::good_defect4(w, f, samples);

  std::vector<Eigen::VectorXcd> lifts;
  for (double lv : {0.0, 0.6, -1.1}) {
    lifts.push_back(Eigen::VectorXcd::Constant(d, cx(lv, 0.3 * lv)));
  }
  double lift_dep = 0.0;
  for (int i = 0; i < d; ++i) {
    lift_dep = std::max(lift_dep, joycekit::normal_lift_dependence(
                                      w, f, b, charts.front().first, i, lifts));
  }
  const double s1 = 0.02;
  const double hol = joycekit::plaquette_holonomy(w, f, samples.front(), 0, 1,
                                                  cx(s1), cx(s1), 24);

  const bool good = gd3 <= tol;
  ojson r = joycekit::report_skeleton("lagrangian-check");
  r["tolerances"] = {{"defect", tol}};
  r["seed"] = c.seed;
  r["fixed_base"] = ojson::array();
  for (const cxd v : fixed) r["fixed_base"].push_back(complex_json(v));
  r["good_defect3"] = gd3;
  r["good_defect4"] = gd4;
  r["lift_dependence"] = lift_dep;
  r["plaquette_holonomy"] = hol;
  r["nondegenerate"] = joycekit::lagrangian_nondegenerate(f);
  r["verdict"] = good ? "good" : "not-good";
  emit(c, r);
  return good && lift_dep <= tol ? 0 : 1;
}

int cmd_twistor(const CommonOpts& c, const std::string& w_file,
                const std::string& x_spec, const std::string& path_spec,
                double tol) {
  const std::vector<cxd> coords = joycekit::parse_complex_list(x_spec);
  if (coords.size() % 2 != 0 || coords.empty()) {
    throw joycekit::ParseError(
        "--x needs an even count of values: base block then fibre block");
  }
  const int n = int(coords.size()) / 2;
  const std::vector<cxd> waypoints = joycekit::parse_complex_list(path_spec);
  if (waypoints.size() < 2) {
    throw joycekit::ParseError("--path needs at least two waypoints");
  }
  if (n % 2 != 0) {
    throw joycekit::ParseError("the coordinate count must be a multiple of 4");
  }
  const joycekit::DarbouxFrame f = joycekit::make_frame(n / 2);
  const joycekit::PlebanskiFunction w =
      joycekit::PlebanskiFunction::parse(read_text_file(w_file), n);
  joycekit::XPoint x;
  x.z = Eigen::VectorXcd(n);
  x.theta = Eigen::VectorXcd(n);
  for (int k = 0; k < n; ++k) {
    x.z(k) = coords[size_t(k)];
    x.theta(k) = coords[size_t(n + k)];
  }
  joycekit::EpsilonPath path;
  path.waypoints.assign(waypoints.begin(), waypoints.end());
  joycekit::TwistorOptions opt;
  opt.rtol = tol;
  const joycekit::TwistorTrajectory traj = joycekit::twistor_flow(w, f, x, path, opt);

  std::ostringstream csv;
  joycekit::write_trajectory_csv(csv, traj);
  write_text_file(c.out_dir + "/trajectory.csv", csv.str());

  double drift = 0.0;
  for (int k = 1; k <= n; ++k) {
    const std::string text =
        "t" + std::to_string(k) + " - z" + std::to_string(k) + "/eps";
    drift = std::max(drift, joycekit::conserved_coordinate_defect(
                                traj, joycekit::parse_observable(text, n)));
  }

  if (c.svg) {
    std::vector<joycekit::PlotSeries> series;
    for (int k = 0; k < n; ++k) {
      joycekit::PlotSeries re{"theta" + std::to_string(k + 1) + "_re", {}};
      joycekit::PlotSeries im{"theta" + std::to_string(k + 1) + "_im", {}};
      for (const joycekit::TwistorSample& s : traj.samples) {
        re.points.emplace_back(s.tau, s.theta(k).real());
        im.points.emplace_back(s.tau, s.theta(k).imag());
      }
      series.push_back(std::move(re));
      series.push_back(std::move(im));
    }
    write_text_file(c.out_dir + "/twistor.svg",
                    joycekit::svg_line_plot(series, "path parameter", "theta"));
  }

  ojson r = joycekit::report_skeleton("twistor");
  r["tolerances"] = {{"rtol", tol}};
  r["eps_begin"] = complex_json(traj.eps_begin);
  r["eps_end"] = complex_json(traj.eps_end);
  ojson theta_end = ojson::array();
  for (int k = 0; k < n; ++k) theta_end.push_back(complex_json(traj.theta_end(k)));
  r["theta_end"] = std::move(theta_end);
  r["samples"] = traj.samples.size();
  r["accepted_steps"] = traj.stats.nsteps;
  r["rejected_steps"] = traj.stats.nrejected;
  r["shift_coordinate_drift"] = drift;
  emit(c, r);
  return 0;
}

int cmd_stokes(const CommonOpts& c, const std::string& u_spec,
               const std::string& v_spec, double tol, double mono_tol,
               double mono_radius) {
  const Eigen::MatrixXcd U = joycekit::parse_complex_matrix(u_spec);
  const Eigen::MatrixXcd V = joycekit::parse_complex_matrix(v_spec);
  const joycekit::StokesProblem p = joycekit::make_stokes(U, V);
  joycekit::StokesOptions opt;
  opt.tol = tol;
  opt.monodromy_radius = mono_radius;
  opt.precision = effective_precision(c);

  const auto rays = joycekit::stokes_rays(p);
  ojson ray_arr = ojson::array();
  std::vector<double> angles;
  for (const joycekit::StokesRay& ray : rays) {
    ojson e;
    e["phi"] = ray.phi;
    ojson pairs = ojson::array();
    for (auto [i, j] : ray.pairs) pairs.push_back({i, j});
    e["pairs"] = std::move(pairs);
    ray_arr.push_back(std::move(e));
    angles.push_back(ray.phi);
  }

  double unip = 0.0, halving = 0.0;
  ojson factor_arr = ojson::array();
  for (int k = 0; k < int(rays.size()); ++k) {
    const joycekit::StokesFactorResult fr = joycekit::stokes_factor(p, k, opt);
    unip = std::max(unip, fr.unipotency_defect);
    halving = std::max(halving, fr.halving_defect);
    ojson e;
    e["ray"] = k;
    e["matrix"] = matrix_json(fr.factor);
    e["unipotency_defect"] = fr.unipotency_defect;
    e["halving_defect"] = fr.halving_defect;
    factor_arr.push_back(std::move(e));
  }
  const joycekit::MonodromyResult m = joycekit::stokes_monodromy(p, opt);

  if (c.svg) {
    write_text_file(c.out_dir + "/stokes_rays.svg",
                    joycekit::svg_ray_diagram(angles));
  }

  ojson r = joycekit::report_skeleton("stokes");
  r["tolerances"] = {{"factor", tol}, {"monodromy", mono_tol}};
  r["precision"] = precision_name(opt.precision);
  r["rays"] = std::move(ray_arr);
  r["factors"] = std::move(factor_arr);
  r["monodromy_defect"] = m.defect;
  r["monodromy_winner"] = m.winner;
  r["monodromy_matrix"] = matrix_json(m.from_factors);
  emit(c, r);
  const bool ok =
      m.defect <= mono_tol && halving <= 10.0 * tol && unip <= 1e-4;
  return ok ? 0 : 1;
}

int cmd_wallcross(const CommonOpts& c, int rank, const std::string& pairing,
                  const std::string& signs_spec, const std::string& rays_file,
                  int order) {
  const Eigen::MatrixXcd pm = joycekit::parse_complex_matrix(pairing);
  if (pm.rows() != rank || pm.cols() != rank) {
    throw joycekit::ParseError("pairing matrix must be rank x rank");
  }
  std::vector<std::vector<long long>> pairing_rows(
      size_t(rank), std::vector<long long>(size_t(rank), 0));
  for (int i = 0; i < rank; ++i) {
    for (int j = 0; j < rank; ++j) {
      const cxd v = pm(i, j);
      if (v.imag() != 0.0 || v.real() != std::floor(v.real())) {
        throw joycekit::ParseError("pairing entries must be integers");
      }
      pairing_rows[size_t(i)][size_t(j)] = (long long)(v.real());
    }
  }
  std::vector<int> signs(size_t(rank), -1);
  if (!signs_spec.empty()) {
    const std::vector<cxd> sv = joycekit::parse_complex_list(signs_spec);
    if (int(sv.size()) != rank) {
      throw joycekit::ParseError("--signs needs one value per generator");
    }
    for (int k = 0; k < rank; ++k) signs[size_t(k)] = int(sv[size_t(k)].real());
  }
  const joycekit::ChargeLattice L = joycekit::make_lattice(pairing_rows, signs);

  // The file lists walls applied first line first; an optional line "="
  // splits it into two sides whose products are compared.
  const std::string text = read_text_file(rays_file);
  std::vector<std::string> sides_text = {""};
  {
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      std::string bare = line;
      const size_t h = bare.find('#');
      if (h != std::string::npos) bare = bare.substr(0, h);
      bool only_eq = !bare.empty();
      for (char ch : bare) {
        if (!std::isspace((unsigned char)ch) && ch != '=') only_eq = false;
      }
      if (only_eq && bare.find('=') != std::string::npos) {
        sides_text.push_back("");
      } else {
        sides_text.back() += line + "\n";
      }
    }
  }
  if (sides_text.size() > 2) {
    throw joycekit::ParseError("at most one '=' separator is allowed");
  }

  std::vector<joycekit::TorusAutomorphism> sides;
  ojson side_walls = ojson::array();
  for (const std::string& st : sides_text) {
    std::istringstream in(st);
    const std::vector<joycekit::WallLine> walls = joycekit::read_walls(in);
    joycekit::TorusAutomorphism prod =
        joycekit::identity_automorphism(rank, order);
    ojson wl = ojson::array();
    for (const joycekit::WallLine& wall : walls) {
      if (int(wall.charge.size()) != rank) {
        throw joycekit::ParseError("wall charge length must equal the rank");
      }
      const joycekit::TorusAutomorphism s =
          joycekit::wall_automorphism(L, wall.charge, wall.omega, order);
      // first listed wall acts first
      prod = joycekit::compose(s, prod);
      ojson e;
      e["charge"] = wall.charge;
      e["omega"] = wall.omega;
      wl.push_back(std::move(e));
    }
    sides.push_back(std::move(prod));
    side_walls.push_back(std::move(wl));
  }
  const joycekit::TorusAutomorphism& lhs = sides[0];
  const joycekit::TorusAutomorphism rhs =
      sides.size() == 2 ? sides[1]
                        : joycekit::identity_automorphism(rank, order);
  const joycekit::Rational defect = joycekit::automorphism_defect(lhs, rhs);

  joycekit::Rational poisson(0);
  for (int i = 0; i < rank; ++i) {
    for (int j = i + 1; j < rank; ++j) {
      std::vector<int> mu(size_t(rank), 0), nu(size_t(rank), 0);
      mu[size_t(i)] = 1;
      nu[size_t(j)] = 1;
      const joycekit::Rational pd = joycekit::poisson_defect(L, lhs, mu, nu);
      if (poisson < pd) poisson = pd;
    }
  }

  ojson r = joycekit::report_skeleton("wallcross");
  r["rank"] = rank;
  r["order"] = order;
  r["walls"] = std::move(side_walls);
  ojson images = ojson::array();
  for (int k = 0; k < rank; ++k) {
    ojson terms = ojson::object();
    for (const auto& [alpha, coeff] : lhs.image[size_t(k)].coef) {
      std::string key;
      for (size_t t = 0; t < alpha.size(); ++t) {
        if (t) key += ",";
        key += std::to_string(alpha[t]);
      }
      terms[key] = coeff.to_string();
    }
    images.push_back(std::move(terms));
  }
  r["generator_images"] = std::move(images);
  r["identity_defect"] = defect.to_string();
  r["poisson_defect"] = poisson.to_string();
  emit(c, r);
  return defect == joycekit::Rational(0) && poisson == joycekit::Rational(0)
             ? 0
             : 1;
}

int cmd_periods(const CommonOpts& c, const std::string& q_spec,
                const std::string& cycles_file, double tol) {
  const std::vector<cxd> q = joycekit::parse_complex_list(q_spec);
  const joycekit::SpectralData data = joycekit::branch_points(q);
  std::ifstream in(cycles_file, std::ios::binary);
  if (!in) throw joycekit::Error("cannot open cycles file: " + cycles_file);
  const std::vector<joycekit::Cycle> cycles = joycekit::read_cycles(in);
  if (cycles.empty()) throw joycekit::ParseError("cycles file lists no cycles");

  joycekit::PeriodOptions opt;
  opt.tol = tol;
  const joycekit::PeriodVector pv = joycekit::compute_periods(data, cycles, opt);
  const auto mat = joycekit::intersection_matrix(data, cycles);

  joycekit::DeformationSlice slice;
  for (size_t k = 0; k + 1 < data.q.size(); ++k) {
    std::vector<cxd> dir(data.q.size(), cxd(0.0));
    dir[k] = cxd(1.0);
    slice.directions.push_back(std::move(dir));
  }
  const int rank = joycekit::period_jacobian_rank(data, cycles, slice, opt);

  ojson r = joycekit::report_skeleton("periods");
  r["tolerances"] = {{"quadrature", tol}};
  ojson roots = ojson::array();
  for (const cxd v : data.roots) roots.push_back(complex_json(v));
  r["branch_points"] = std::move(roots);
  ojson periods = ojson::array();
  ojson errors = ojson::array();
  for (size_t k = 0; k < pv.values.size(); ++k) {
    periods.push_back(complex_json(pv.values[k]));
    errors.push_back(pv.errors[k]);
  }
  r["periods"] = std::move(periods);
  r["quadrature_errors"] = std::move(errors);
  ojson mj = ojson::array();
  for (const auto& row : mat) mj.push_back(row);
  r["intersection_matrix"] = std::move(mj);
  r["jacobian_rank"] = rank;
  emit(c, r);
  return 0;
}

int cmd_selftest(const CommonOpts& c) {
  const joycekit::AcceptanceOutcome out = joycekit::run_acceptance_suite();
  for (const joycekit::CriterionResult& cr : out.run.criteria) {
    std::printf("%s %s (%s) [%.2f s]\n", cr.pass ? "PASS" : "FAIL",
                cr.name.c_str(), cr.detail.c_str(), cr.seconds);
  }
  joycekit::write_report(c.out_dir + "/report.json", out.run.report);
  std::printf("%s\n", out.run.all_pass ? "ALL PASS" : "FAILURES PRESENT");
  return out.run.all_pass ? 0 : 1;
}

int classify_error(const joycekit::Error& e) {
  if (dynamic_cast<const joycekit::ToleranceUnreachable*>(&e) ||
      dynamic_cast<const joycekit::StepFailure*>(&e) ||
      dynamic_cast<const joycekit::RootCollision*>(&e)) {
    return 1;  // request understood, accuracy not attainable
  }
  return 2;  // invalid input or configuration
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "joycekit: residuals, induced quaternionic structures, fibre flows, "
      "canonical factors, wall automorphisms, and periods"};
  app.require_subcommand(1);
  app.fallthrough();

  CommonOpts common;
  app.add_option("--out", common.out_dir, "directory for report.json and plots");
  app.add_option("--precision", common.precision,
                 "double or extended (JOYCEKIT_PRECISION overrides)")
      ->check(CLI::IsMember({"double", "extended"}));
  app.add_flag("--svg", common.svg, "also write SVG plots where available");
  app.add_option("--seed", common.seed,
                 "sampling seed; equal seeds give byte-identical reports");

  int exit_code = 0;

  // heavenly-check
  auto* hc = app.add_subcommand("heavenly-check",
                                "field-equation residual and lift flatness");
  struct {
    std::string w, grid = "5";
    int frame = 1;
    double tol = 1e-10;
  } hco;
  hc->add_option("--w", hco.w, "potential expression file")->required();
  hc->add_option("--frame", hco.frame, "frame parameter d")->check(CLI::Range(1, 4));
  hc->add_option("--grid", hco.grid, "N or N:lo:hi");
  hc->add_option("--tol", hco.tol, "defect tolerance");
  hc->callback([&] {
    exit_code = cmd_heavenly(common, hco.w, hco.frame, hco.grid, hco.tol);
  });

  // hk-verify
  auto* hk = app.add_subcommand("hk-verify",
                                "quaternion relations, metric, closedness");
  struct {
    std::string w, grid = "3";
    int frame = 1;
    double tol = 1e-10, closed_tol = 1e-5, step = 1e-3;
  } hko;
  hk->add_option("--w", hko.w, "potential expression file")->required();
  hk->add_option("--frame", hko.frame, "frame parameter d")->check(CLI::Range(1, 4));
  hk->add_option("--grid", hko.grid, "N or N:lo:hi");
  hk->add_option("--tol", hko.tol, "algebraic identity tolerance");
  hk->add_option("--closed-tol", hko.closed_tol, "closedness tolerance");
  hk->add_option("--step", hko.step, "difference step for closedness");
  hk->callback([&] {
    exit_code = cmd_hk(common, hko.w, hko.frame, hko.grid, hko.tol,
                       hko.closed_tol, hko.step);
  });

  // lagrangian-check
  auto* lc = app.add_subcommand("lagrangian-check",
                                "adaptedness and lift independence");
  struct {
    std::string w, fix, grid = "3";
    double tol = 1e-10;
  } lco;
  lc->add_option("--w", lco.w, "potential expression file")->required();
  lc->add_option("--fix", lco.fix, "frozen base values (d complex numbers)")
      ->required();
  lc->add_option("--grid", lco.grid, "N or N:lo:hi");
  lc->add_option("--tol", lco.tol, "defect tolerance");
  lc->callback([&] {
    exit_code = cmd_lagrangian(common, lco.w, lco.fix, lco.grid, lco.tol);
  });

  // twistor
  auto* tw = app.add_subcommand("twistor", "fibre flow along a parameter path");
  struct {
    std::string w, x, path;
    double tol = 1e-9;
  } two;
  tw->add_option("--w", two.w, "potential expression file")->required();
  tw->add_option("--x", two.x, "start point: base block then fibre block")
      ->required();
  tw->add_option("--path", two.path, "parameter waypoints")->required();
  tw->add_option("--tol", two.tol, "relative step tolerance");
  tw->callback([&] {
    exit_code = cmd_twistor(common, two.w, two.x, two.path, two.tol);
  });

  // stokes
  auto* st = app.add_subcommand("stokes", "rays, canonical factors, monodromy");
  struct {
    std::string u, v;
    double tol = 1e-8, mono_tol = 1e-4, mono_radius = 1e-2;
  } sto;
  st->add_option("--u", sto.u, "leading matrix, rows ';' entries ','")->required();
  st->add_option("--v", sto.v, "subleading matrix")->required();
  st->add_option("--tol", sto.tol, "factor tolerance");
  st->add_option("--mono-tol", sto.mono_tol, "monodromy consistency tolerance");
  st->add_option("--mono-radius", sto.mono_radius, "radius of the comparison loop");
  st->callback([&] {
    exit_code = cmd_stokes(common, sto.u, sto.v, sto.tol, sto.mono_tol,
                           sto.mono_radius);
  });

  // wallcross
  auto* wc = app.add_subcommand("wallcross",
                                "exact wall automorphism products");
  struct {
    std::string pairing, signs, rays;
    int rank = 2, order = 12;
  } wco;
  wc->add_option("--rank", wco.rank, "lattice rank")->required()->check(CLI::Range(1, 8));
  wc->add_option("--pairing", wco.pairing, "integer pairing matrix")->required();
  wc->add_option("--signs", wco.signs, "generator signs (default all -1)");
  wc->add_option("--rays", wco.rays, "wall file: charge components, weight")
      ->required();
  wc->add_option("--order", wco.order, "truncation order")->check(CLI::Range(1, 64));
  wc->callback([&] {
    exit_code = cmd_wallcross(common, wco.rank, wco.pairing, wco.signs,
                              wco.rays, wco.order);
  });

  // periods
  auto* pe = app.add_subcommand("periods",
                                "contour periods on the double cover");
  struct {
    std::string q, cycles;
    double tol = 1e-10;
  } peo;
  pe->add_option("--q", peo.q, "polynomial coefficients, low degree first")
      ->required();
  pe->add_option("--cycles", peo.cycles, "cycle file")->required();
  pe->add_option("--tol", peo.tol, "quadrature tolerance");
  pe->callback([&] {
    exit_code = cmd_periods(common, peo.q, peo.cycles, peo.tol);
  });

  // selftest
  auto* se = app.add_subcommand("selftest", "run the full verification suite");
  se->callback([&] { exit_code = cmd_selftest(common); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const joycekit::ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const joycekit::Error& e) {
    const int code = classify_error(e);
    std::cerr << (code == 2 ? "input error: " : "accuracy failure: ")
              << e.what() << "\n";
    return code;
  }
  return exit_code;
}
