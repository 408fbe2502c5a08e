#pragma once

#include <Eigen/Dense>
#include <vector>

#include "joycekit/rational.hpp"

namespace joycekit {

// A constant symplectic pairing on the fibre directions together with its
// exact inverse.  Conventions fixed across the kit: eta_pq = (omega^{-1})_pq,
// coordinates ordered base block first, fibre block second.
struct DarbouxFrame {
  int d = 0;  // half rank
  int n = 0;  // fibre dimension, n = 2d
  Eigen::MatrixXi omega;
  std::vector<std::vector<Rational>> eta_exact;
  Eigen::MatrixXcd eta;  // floating image of eta_exact
};

// Default pairing: omega_pq = +1 when q - p = d, -1 when p - q = d.
DarbouxFrame make_frame(int d);

// Frame with a caller-supplied integer pairing.  Throws NotSkew when the
// matrix is not skew, DegenerateFrame on an odd or empty shape, and
// NonInvertible when no exact inverse exists.
DarbouxFrame make_frame(const Eigen::MatrixXi& omega);

inline void require_same_frame(const DarbouxFrame& f, int n_expected) {
  if (f.n != n_expected) throw FrameMismatch("frame rank does not match the function");
}

}  // namespace joycekit
