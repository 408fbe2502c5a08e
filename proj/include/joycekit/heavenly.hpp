#pragma once

#include <Eigen/Dense>
#include <vector>

#include "joycekit/frame.hpp"
#include "joycekit/plebanski.hpp"

namespace joycekit {

// Skew matrix of second-order defects of the field equation at x.  Entry
// (i, j) is W_{t_i z_j} - W_{t_j z_i} - sum_{p,q} eta_pq W_{t_i t_p} W_{t_j t_q};
// identically zero exactly on solutions.  Indices are 0-based here and in
// every other kit function.
Eigen::MatrixXcd heavenly_residual(const PlebanskiFunction& w,
                                   const DarbouxFrame& f, const XPoint& x);

// Coefficients of the lifted base direction i in the full coordinate basis
// (base block then fibre block): base block e_i, fibre component q equal to
// sum_p eta_pq W_{t_i t_p} + eps_inv * delta_iq.
Eigen::VectorXcd lift_horizontal(const PlebanskiFunction& w, const DarbouxFrame& f,
                                 const XPoint& x, cx eps_inv, int i);

// Commutator of the lifted directions i and j expressed in the coordinate
// basis.  Vanishes for all i, j, eps_inv exactly when the lift is flat; the
// base block is zero identically.
Eigen::VectorXcd flatness_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                                 const XPoint& x, cx eps_inv, int i, int j);

struct SymmetryDefects {
  double periodic = 0.0;     // invariance under theta -> theta + 2 pi i k
  double homogeneous = 0.0;  // scaling weight -1 in the base variables
  double odd = 0.0;          // antisymmetry under theta -> -theta
};

// Max deviation from the three structural symmetries over the sample set.
// lattice holds integer fibre shift directions; scales holds the dilation
// factors tested for the weight.
SymmetryDefects symmetry_defects(const PlebanskiFunction& w,
                                 const std::vector<XPoint>& samples,
                                 const std::vector<Eigen::VectorXi>& lattice,
                                 const std::vector<cx>& scales);

}  // namespace joycekit
