#pragma once

#include <complex>
#include <vector>

#include "joycekit/errors.hpp"

namespace joycekit {

// Double cover y^2 = Q(x) of the complex line, branched at the roots of Q.
struct SpectralData {
  std::vector<std::complex<double>> q;      // q[k] multiplies x^k, degree >= 2
  std::vector<std::complex<double>> roots;  // certified pairwise separated
  bool resolved = false;                    // all roots simple
};

// Companion-matrix eigenvalues with one Newton polish; throws RepeatedRoot
// when the relative pairwise separation drops below 1e-8.
SpectralData branch_points(const std::vector<std::complex<double>>& q);

// Oriented closed polyline avoiding the branch points, plus the branch choice
// at the first vertex: sheet +1 takes the principal square root of Q there.
struct Cycle {
  int sheet = 1;
  std::vector<std::complex<double>> vertices;
};

enum class Parity { even, odd };

// Parity of the total winding of Q along the polyline (odd means the lift
// swaps sheets, so the polyline is not a closed cycle on the cover).
// Throws TooClose when the polyline passes too near a branch point.
Parity sheet_parity(const SpectralData& data, const Cycle& cycle);

struct PeriodOptions {
  double tol = 1e-10;
  int max_depth = 40;
};

// Contour integral of sqrt(Q) dx along the cycle with the branch continued
// from the starting sheet; adaptive Gauss-Kronrod per refined piece.
std::complex<double> period(const SpectralData& data, const Cycle& cycle,
                            const PeriodOptions& opt = {});

// Contour integral of x^k / (2 sqrt(Q)) dx along the cycle: the derivative of
// the period with respect to the coefficient q[k].
std::complex<double> period_derivative(const SpectralData& data,
                                       const Cycle& cycle, int k,
                                       const PeriodOptions& opt = {});

struct PeriodVector {
  std::vector<std::complex<double>> values;
  std::vector<double> errors;  // accumulated quadrature error estimates
};

PeriodVector compute_periods(const SpectralData& data,
                             const std::vector<Cycle>& cycles,
                             const PeriodOptions& opt = {});

// Signed crossing count of the lifted cycles: a planar crossing contributes
// its orientation sign only when both cycles sit on the same sheet there.
// Throws NonTransverse for grazing or vertex-adjacent crossings.
std::vector<std::vector<long long>> intersection_matrix(
    const SpectralData& data, const std::vector<Cycle>& cycles);

// Each direction is a coefficient-space perturbation of Q (same length as q).
struct DeformationSlice {
  std::vector<std::vector<std::complex<double>>> directions;
};

// Numeric rank of the matrix d(period_i)/d(direction_k) computed by central
// finite differences with root continuation; throws RootCollision when a
// perturbation moves roots by a sizable fraction of their separation.
int period_jacobian_rank(const SpectralData& data,
                         const std::vector<Cycle>& cycles,
                         const DeformationSlice& slice,
                         const PeriodOptions& opt = {});

// Convenience basis: one counterclockwise rectangle around each consecutive
// pair of roots in (re, im) lexicographic order; no canonicity claimed.
std::vector<Cycle> suggest_cycles(const SpectralData& data,
                                  double margin = 0.25);

}  // namespace joycekit
