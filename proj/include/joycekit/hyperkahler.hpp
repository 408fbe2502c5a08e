#pragma once

#include <Eigen/Dense>
#include <vector>

#include "joycekit/frame.hpp"
#include "joycekit/plebanski.hpp"

namespace joycekit {

// Pointwise quaternionic package induced by a potential: complex structures
// I, J, K and the metric g on the 2n coordinate directions (base block then
// fibre block).  P holds the adapted frame as columns, lifted base
// directions first, fibre directions second; A is the fibre block of the
// lifted base directions.
struct HKStructure {
  XPoint x;
  Eigen::MatrixXcd A;
  Eigen::MatrixXcd P;
  Eigen::MatrixXcd g, I, J, K;
};

HKStructure build_hk(const PlebanskiFunction& w, const DarbouxFrame& f,
                     const XPoint& x);

// Coordinate matrices of the three two-forms g(I.,.), g((J+iK).,.),
// g((J-iK).,.).  The minus form equals the base pullback of the pairing
// exactly; 2i times the I form pairs base against fibre directions by omega.
struct FormTriple {
  Eigen::MatrixXcd omega_I, omega_plus, omega_minus;
};

FormTriple forms(const HKStructure& s, const DarbouxFrame& f);

enum class FormSelector { I, plus, minus };

// Max absolute coefficient of the exterior derivative of the selected form,
// approximated by central differences of the given step in each of the 2n
// complex coordinate directions.  Second order in the step.
double closedness_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                         const XPoint& x, FormSelector sel, double step);

// Connection coefficients of the induced linear model along the zero
// section: gamma[q](i, j) = sum_p eta_qp W_{t_i t_j t_p}(z, 0).  Throws
// PoleAtZeroSection when the potential is singular there.
std::vector<Eigen::MatrixXcd> linear_joyce(const PlebanskiFunction& w,
                                           const DarbouxFrame& f,
                                           const Eigen::VectorXcd& z);

// Deviation of the structure from its scaling weights under z -> t z:
// weight 1 for g, 0 for I, -1 for J+iK, +1 for J-iK.  Zero exactly when the
// potential has scaling weight -1 in the base variables.
double homogeneity_flow_defect(const PlebanskiFunction& w, const DarbouxFrame& f,
                               const XPoint& x, cx t);

}  // namespace joycekit
