#include "joycekit/stokes.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <complex>

#include "doctest.h"
#include "joycekit/errors.hpp"

using namespace joycekit;
using zd = std::complex<double>;

namespace {

const double pi = 3.14159265358979323846;
const zd I(0.0, 1.0);

Eigen::MatrixXcd mat2(zd a, zd b, zd c, zd d) {
  Eigen::MatrixXcd m(2, 2);
  m << a, b, c, d;
  return m;
}

double off_identity(const Eigen::MatrixXcd& m) {
  return (m - Eigen::MatrixXcd::Identity(m.rows(), m.cols()))
      .cwiseAbs()
      .maxCoeff();
}

}  // namespace

TEST_CASE("eigen setup sorts the spectrum and rejects collisions") {
  Eigen::MatrixXcd B = mat2(1.0, 0.5, -0.25, 1.0);
  Eigen::MatrixXcd L = mat2(zd(0.2, 0.1), 0.0, 0.0, -0.4);
  Eigen::MatrixXcd U = B * L * B.inverse();
  Eigen::MatrixXcd V = mat2(0.3, -0.1, 0.2, 0.05);

  StokesProblem p = make_stokes(U, V);
  CHECK(p.u(0).real() == doctest::Approx(-0.4).epsilon(1e-12));
  CHECK(p.u(1).real() == doctest::Approx(0.2).epsilon(1e-12));
  CHECK(p.u(1).imag() == doctest::Approx(0.1).epsilon(1e-12));
  // basis columns are eigenvectors for the sorted eigenvalues
  double evec_defect =
      (U * p.basis - p.basis * p.u.asDiagonal().toDenseMatrix())
          .cwiseAbs()
          .maxCoeff();
  CHECK(evec_defect < 1e-13);
  // the exponent vector is the diagonal of the conjugated coupling
  Eigen::MatrixXcd Vt = p.basis_inv * V * p.basis;
  CHECK((p.D - Vt.diagonal()).cwiseAbs().maxCoeff() < 1e-14);

  CHECK_THROWS_AS(make_stokes(mat2(2.0, 0.0, 0.0, 2.0), V),
                  DegenerateEigenvalues);
  CHECK_THROWS_AS(make_stokes(mat2(1.0, 1.0, 0.0, 1.0), V),
                  DegenerateEigenvalues);
  Eigen::MatrixXcd bad(2, 3);
  bad.setZero();
  CHECK_THROWS_AS(make_stokes(bad, bad), Error);
}

TEST_CASE("singular directions enumerate eigenvalue pair arguments") {
  // three well separated eigenvalues give six distinct directions
  Eigen::MatrixXcd U = Eigen::MatrixXcd::Zero(3, 3);
  U(0, 0) = 0.0;
  U(1, 1) = 1.0;
  U(2, 2) = I;
  StokesProblem p = make_stokes(U, Eigen::MatrixXcd::Zero(3, 3));
  auto rays = stokes_rays(p);
  REQUIRE(rays.size() == 6);
  for (size_t k = 0; k + 1 < rays.size(); ++k)
    CHECK(rays[k].phi < rays[k + 1].phi);
  for (const auto& r : rays) {
    CHECK(r.pairs.size() == 1);
    auto [i, j] = r.pairs[0];
    CHECK(std::abs(std::arg(p.u(i) - p.u(j)) - r.phi) < 1e-12);
  }

  // collinear spectrum merges pairs onto two opposite directions
  Eigen::MatrixXcd U2 = Eigen::MatrixXcd::Zero(3, 3);
  U2(1, 1) = 1.0;
  U2(2, 2) = 2.0;
  auto rays2 = stokes_rays(make_stokes(U2, Eigen::MatrixXcd::Zero(3, 3)));
  REQUIRE(rays2.size() == 2);
  CHECK(rays2[0].phi == doctest::Approx(0.0));
  CHECK(rays2[1].phi == doctest::Approx(pi));
  CHECK(rays2[0].pairs.size() == 3);
  CHECK(rays2[1].pairs.size() == 3);
}

TEST_CASE("vanishing coupling reduces to the bare exponential") {
  Eigen::MatrixXcd B = mat2(1.0, 0.5, -0.25, 1.0);
  Eigen::MatrixXcd L = mat2(zd(0.2, 0.1), 0.0, 0.0, -0.4);
  Eigen::MatrixXcd U = B * L * B.inverse();
  StokesProblem p = make_stokes(U, Eigen::MatrixXcd::Zero(2, 2));

  double phi = 1.2, radius = 0.7;
  zd eps = std::polar(radius, phi);
  Eigen::MatrixXcd F = canonical_solution(p, phi, radius);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      zd expect = i == j ? std::exp(-p.u(j) / eps) : zd(0.0);
      CHECK(std::abs(F(i, j) - expect) < 1e-10);
    }

  auto rays = stokes_rays(p);
  for (int k = 0; k < static_cast<int>(rays.size()); ++k) {
    StokesFactorResult f = stokes_factor(p, k);
    CHECK(off_identity(f.factor) < 1e-12);
    CHECK(f.unipotency_defect < 1e-12);
    CHECK(f.halving_defect < 1e-12);
  }

  MonodromyResult m = stokes_monodromy(p);
  CHECK(off_identity(m.direct) < 1e-10);
  CHECK(m.defect < 1e-8);
}

TEST_CASE("diagonal coupling gives the exact power correction") {
  Eigen::MatrixXcd U = mat2(0.4, 0.0, 0.0, zd(-0.3, 0.2));
  Eigen::MatrixXcd V = mat2(0.25, 0.0, 0.0, -0.125);
  StokesProblem p = make_stokes(U, V);
  // sorted order puts the negative-real eigenvalue first
  CHECK(p.u(0).real() == doctest::Approx(-0.3));
  CHECK(p.D(0).real() == doctest::Approx(-0.125));
  CHECK(p.D(1).real() == doctest::Approx(0.25));

  double phi = 1.2, radius = 0.5;
  zd eps = std::polar(radius, phi);
  zd leps(std::log(radius), phi);
  Eigen::MatrixXcd F = canonical_solution(p, phi, radius);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      zd expect = i == j ? std::exp(-p.u(j) / eps + p.D(j) * leps) : zd(0.0);
      CHECK(std::abs(F(i, j) - expect) < 1e-13);
    }

  // the angle picks the branch of the power factor
  Eigen::MatrixXcd G = canonical_solution(p, phi - 2.0 * pi, radius);
  for (int j = 0; j < 2; ++j) {
    zd ratio = F(j, j) / G(j, j);
    CHECK(std::abs(ratio - std::exp(2.0 * pi * I * p.D(j))) < 1e-12);
  }

  auto rays = stokes_rays(p);
  for (int k = 0; k < static_cast<int>(rays.size()); ++k) {
    StokesFactorResult f = stokes_factor(p, k);
    CHECK(off_identity(f.factor) < 1e-12);
    CHECK(f.unipotency_defect < 1e-12);
  }

  MonodromyResult m = stokes_monodromy(p);
  Eigen::MatrixXcd expect = Eigen::MatrixXcd::Zero(2, 2);
  for (int j = 0; j < 2; ++j) expect(j, j) = std::exp(2.0 * pi * I * p.D(j));
  CHECK((m.direct - expect).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(m.defect < 1e-12);
}

TEST_CASE("triangular coupling reproduces the loop integral jump") {
  // one-sided coupling integrates in closed form; the counterclockwise
  // linking factor across the direction of u_0 - u_1 has corner entry
  // -2 pi i times the coupling strength.
  zd v(0.7, 0.2);
  StokesProblem p =
      make_stokes(mat2(-0.2, 0.0, 0.0, 0.3), mat2(0.0, v, 0.0, 0.0));
  auto rays = stokes_rays(p);
  REQUIRE(rays.size() == 2);
  CHECK(rays[0].phi == doctest::Approx(0.0));
  CHECK(rays[1].phi == doctest::Approx(pi));

  StokesOptions opt;
  opt.tol = 1e-8;

  StokesFactorResult fpi = stokes_factor(p, 1, opt);
  CHECK(std::abs(fpi.factor(0, 1) - (-2.0 * pi * I * v)) < 1e-7);
  CHECK(std::abs(fpi.factor(0, 0) - 1.0) < 1e-8);
  CHECK(std::abs(fpi.factor(1, 1) - 1.0) < 1e-8);
  CHECK(std::abs(fpi.factor(1, 0)) < 1e-12);
  CHECK(fpi.unipotency_defect < 1e-8);
  CHECK(fpi.halving_defect < 10.0 * opt.tol);
  CHECK(fpi.anchor_eta < 1e-11);
  CHECK(std::abs(fpi.factor.determinant() - 1.0) < 1e-8);

  // the opposite direction carries the other pair, which is uncoupled here
  StokesFactorResult f0 = stokes_factor(p, 0, opt);
  CHECK(off_identity(f0.factor) < 1e-8);
  CHECK(f0.unipotency_defect < 1e-8);

  // mirrored one-sided coupling crosses at angle zero instead
  zd w(-0.45, 0.6);
  StokesProblem q =
      make_stokes(mat2(-0.2, 0.0, 0.0, 0.3), mat2(0.0, 0.0, w, 0.0));
  StokesFactorResult g0 = stokes_factor(q, 0, opt);
  CHECK(std::abs(g0.factor(1, 0) - (-2.0 * pi * I * w)) < 1e-7);
  CHECK(std::abs(g0.factor(0, 1)) < 1e-12);
  StokesFactorResult gpi = stokes_factor(q, 1, opt);
  CHECK(off_identity(gpi.factor) < 1e-8);
}

TEST_CASE("monodromy identity singles out one candidate bracketing") {
  // distinct diagonal couplings make the branch factor non-scalar, so the
  // four candidate orderings separate and the continuation picks the winner
  StokesProblem p = make_stokes(mat2(-0.2, 0.0, 0.0, 0.3),
                                mat2(0.15, 0.7, 0.0, -0.1));
  StokesOptions opt;
  opt.tol = 1e-8;
  opt.monodromy_radius = 0.08;

  MonodromyResult m = stokes_monodromy(p, opt);
  CHECK(m.winner == "branch_then_reversed_inverses");
  CHECK(m.defect < 1e-5);
  CHECK(m.candidate_defects[1] > 0.01);
  CHECK(m.candidate_defects[2] > 0.01);
  CHECK(m.candidate_defects[3] > 0.01);

  zd det_expect = std::exp(2.0 * pi * I * (p.D(0) + p.D(1)));
  CHECK(std::abs(m.direct.determinant() - det_expect) < 1e-6);
}

TEST_CASE("narrow gap with symmetric coupling stays consistent") {
  StokesProblem p = make_stokes(mat2(-0.01, 0.0, 0.0, 0.01),
                                mat2(0.0, 0.3, 0.3, 0.0));
  StokesOptions opt;
  opt.tol = 1e-6;
  opt.monodromy_radius = 1e-2;

  auto rays = stokes_rays(p);
  REQUIRE(rays.size() == 2);
  for (int k = 0; k < 2; ++k) {
    StokesFactorResult f = stokes_factor(p, k, opt);
    CHECK(f.unipotency_defect < 1e-6);
    CHECK(f.halving_defect < 10.0 * opt.tol);
    CHECK(std::abs(f.factor.determinant() - 1.0) < 1e-7);
  }

  MonodromyResult m = stokes_monodromy(p, opt);
  CHECK(m.defect < 1e-4);
  CHECK(std::abs(m.direct.determinant() - 1.0) < 1e-6);
}

TEST_CASE("guards reject rays, repeated spectra, and hopeless tolerances") {
  zd v(0.7, 0.2);
  StokesProblem p =
      make_stokes(mat2(-0.2, 0.0, 0.0, 0.3), mat2(0.0, v, 0.0, 0.0));
  CHECK_THROWS_AS(canonical_solution(p, 0.0, 0.5), StokesAngle);
  CHECK_THROWS_AS(canonical_solution(p, pi, 0.5), StokesAngle);

  StokesOptions hopeless;
  hopeless.tol = 1e-20;
  CHECK_THROWS_AS(stokes_factor(p, 1, hopeless), ToleranceUnreachable);
}

TEST_CASE("extended precision sharpens the triangular factor") {
  zd v(0.7, 0.2);
  StokesProblem p =
      make_stokes(mat2(-0.2, 0.0, 0.0, 0.3), mat2(0.0, v, 0.0, 0.0));
  StokesOptions opt;
  opt.tol = 1e-10;
  opt.precision = Precision::extended;

  StokesFactorResult f = stokes_factor(p, 1, opt);
  CHECK(std::abs(f.factor(0, 1) - (-2.0 * pi * I * v)) < 1e-9);
  CHECK(std::abs(f.factor(1, 0)) < 1e-18);
  CHECK(f.unipotency_defect < 1e-9);
  CHECK(f.halving_defect < 10.0 * opt.tol);
}
