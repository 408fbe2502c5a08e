#pragma once

#include <Eigen/Dense>
#include <vector>

#include "joycekit/frame.hpp"
#include "joycekit/plebanski.hpp"

namespace joycekit {

// Coordinate model of a half-dimensional submanifold adapted to the frame:
// the last d base coordinates are frozen at fixed_base; the submanifold is
// charted by the first d base coordinates together with the last d fibre
// coordinates.  The first d fibre coordinates are a free lift choice.
struct LagrangianFibration {
  Eigen::VectorXcd fixed_base;  // z_{d+1}..z_{2d}
};

struct LagrangianPoint {
  Eigen::VectorXcd base;    // z_1..z_d
  Eigen::VectorXcd normal;  // t_{d+1}..t_{2d}
};

XPoint assemble_point(const DarbouxFrame& f, const LagrangianFibration& b,
                      const LagrangianPoint& y, const Eigen::VectorXcd& lift);

// Obstruction to the submanifold family being adapted: max third fibre
// partial of W over the first d directions, at the given samples.  Zero
// everywhere defines the good condition.
double good_defect3(const PlebanskiFunction& w, const DarbouxFrame& f,
                    const std::vector<XPoint>& samples);

// Fourth-order variant over the same directions.  Agrees with the third
// order test away from potentials that are exactly cubic in the tested
// directions; a pure cubic passes here while failing good_defect3, since its
// cubic term is a gauge shift with vanishing fourth derivatives.
double good_defect4(const PlebanskiFunction& w, const DarbouxFrame& f,
                    const std::vector<XPoint>& samples);

// The d x d pairing minor between the chart base directions and the frozen
// ones, scaled by i.  The identity for the default frame.
Eigen::MatrixXcd restricted_pairing(const DarbouxFrame& f);

// Exact invertibility of the restriction minor over the rationals.
bool lagrangian_nondegenerate(const DarbouxFrame& f);

// Normal components (fibre block d..2d-1) of the lifted base direction i at
// the assembled point.  Never sees the twist parameter: the twist only
// touches the diagonal fibre component of its own direction, which lies in
// the lift block for i < d.  Independent of the lift exactly when the good
// condition holds.
Eigen::VectorXcd normal_connection(const PlebanskiFunction& w, const DarbouxFrame& f,
                                   const LagrangianFibration& b, const LagrangianPoint& y,
                                   int i, const Eigen::VectorXcd& lift);

// Max pairwise difference of normal_connection over the given lifts.
double normal_lift_dependence(const PlebanskiFunction& w, const DarbouxFrame& f,
                              const LagrangianFibration& b, const LagrangianPoint& y,
                              int i, const std::vector<Eigen::VectorXcd>& lifts);

// Transports the full fibre around the rectangle spanned by steps s1, s2 in
// base directions i, j (fixed-step RK4, steps per leg as given) and returns
// the max fibre deviation.  Scales with the enclosed area; the ratio to
// |s1 s2| reproduces the commutator defect of the two lifted directions.
double plaquette_holonomy(const PlebanskiFunction& w, const DarbouxFrame& f,
                          const XPoint& x, int i, int j, cx s1, cx s2,
                          int steps_per_leg);

}  // namespace joycekit
