#pragma once

#include <Eigen/Dense>
#include <array>
#include <string>
#include <utility>
#include <vector>

#include "joycekit/errors.hpp"

namespace joycekit {

enum class Precision { double_prec, extended };

// Linear system y' = (U / eps^2 + V / eps) y with simple spectrum of U.
// Everything downstream works in the eigenbasis of U: u holds the sorted
// eigenvalues, Vt = basis_inv V basis, and D = diag(Vt) is the exponent of
// the formal power factor eps^D.
struct StokesProblem {
  Eigen::MatrixXcd U, V;
  Eigen::VectorXcd u;
  Eigen::MatrixXcd basis, basis_inv;
  Eigen::MatrixXcd Vt;
  Eigen::VectorXcd D;
};

StokesProblem make_stokes(const Eigen::MatrixXcd& U, const Eigen::MatrixXcd& V);

// One singular direction: the eigenvalue pairs (i, j) whose difference
// u_i - u_j points along angle phi.  Angles live in (-pi, pi].
struct StokesRay {
  double phi = 0.0;
  std::vector<std::pair<int, int>> pairs;
};

std::vector<StokesRay> stokes_rays(const StokesProblem& p);

struct StokesOptions {
  double tol = 1e-8;           // target accuracy of factors and monodromy
  double eval_radius = 1.0;    // where factors are assembled
  double monodromy_radius = 1e-2;
  Precision precision = Precision::double_prec;
};

// Value at radius * e^{i phi} of the solution normalized by the truncated
// formal expansion along direction phi (anchored at a small adaptive radius
// and continued outward).  Eigenbasis components; left-multiply by p.basis
// for the original frame.  phi is not reduced mod 2 pi: it selects the
// branch of the eps^D factor.  Throws StokesAngle within 1e-8 of a ray and
// ToleranceUnreachable when the direction cannot support the tolerance.
Eigen::MatrixXcd canonical_solution(const StokesProblem& p, double phi,
                                    double radius, const StokesOptions& opt = {});

struct StokesFactorResult {
  int ray_index = 0;
  Eigen::MatrixXcd factor;    // Phi_before^{-1} Phi_after, counterclockwise
  double unipotency_defect = 0.0;  // off-pattern entries and diagonal drift
  double halving_defect = 0.0;     // change under anchor radius halving
  double anchor_eta = 0.0;         // smallest retained series term
};

StokesFactorResult stokes_factor(const StokesProblem& p, int ray_index,
                                 const StokesOptions& opt = {});

struct MonodromyResult {
  Eigen::MatrixXcd direct;        // continuation once counterclockwise
  Eigen::MatrixXcd from_factors;  // winning candidate assembled from factors
  std::string winner;
  double defect = 0.0;            // relative gap between the two
  std::array<double, 4> candidate_defects{};
  double base_angle = 0.0;
};

MonodromyResult stokes_monodromy(const StokesProblem& p,
                                 const StokesOptions& opt = {});

}  // namespace joycekit
