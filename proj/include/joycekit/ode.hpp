#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "joycekit/errors.hpp"

namespace joycekit {

struct OdeOptions {
  double rtol = 1e-9;
  double atol = 1e-12;
  double h_init = 0.0;  // 0 picks a fraction of the span
  long long max_steps = 50000000;
};

struct OdeStats {
  long long nsteps = 0;
  long long nrejected = 0;
  long long nrhs = 0;
};

// Explicit Dormand-Prince 5(4) pair with proportional step control.  State
// needs vector-space operations with double scalars; rhs(t, y) returns the
// derivative; scaled_error(err, y_old, y_new) returns the error measure that
// must come out <= 1 for a step to be accepted; observer(t, y) fires at every
// accepted step including the initial point.
template <class State, class RHS, class ErrFn, class ObsFn>
State integrate_ode(State y, double t0, double t1, RHS&& rhs, const OdeOptions& opt,
                    ErrFn&& scaled_error, OdeStats* stats, ObsFn&& observer) {
  static constexpr double a21 = 1.0 / 5;
  static constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
  static constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
  static constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                          a53 = 64448.0 / 6561, a54 = -212.0 / 729;
  static constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                          a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                          a65 = -5103.0 / 18656;
  static constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                          b5 = -2187.0 / 6784, b6 = 11.0 / 84;
  static constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                          e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
  static constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;

  const double span = t1 - t0;
  if (span == 0.0) {
    observer(t0, y);
    return y;
  }
  const double dir = span > 0 ? 1.0 : -1.0;
  double h = opt.h_init != 0.0 ? opt.h_init : span / 256.0;
  if (h * dir <= 0.0) h = -h;
  double t = t0;
  observer(t, y);

  long long steps = 0;
  while ((t1 - t) * dir > 0.0) {
    if (++steps > opt.max_steps) throw StepFailure("step budget exhausted");
    if (std::abs(h) > std::abs(t1 - t)) h = t1 - t;
    if (std::abs(h) < 1e-14 * std::abs(span))
      throw StepFailure("step size underflow");

    State k1 = rhs(t, y);
    State k2 = rhs(t + c2 * h, y + (h * a21) * k1);
    State k3 = rhs(t + c3 * h, y + (h * a31) * k1 + (h * a32) * k2);
    State k4 = rhs(t + c4 * h, y + (h * a41) * k1 + (h * a42) * k2 + (h * a43) * k3);
    State k5 = rhs(t + c5 * h,
                   y + (h * a51) * k1 + (h * a52) * k2 + (h * a53) * k3 + (h * a54) * k4);
    State k6 = rhs(t + h, y + (h * a61) * k1 + (h * a62) * k2 + (h * a63) * k3 +
                              (h * a64) * k4 + (h * a65) * k5);
    State ynew = y + (h * b1) * k1 + (h * b3) * k3 + (h * b4) * k4 + (h * b5) * k5 +
                 (h * b6) * k6;
    State k7 = rhs(t + h, ynew);
    State err = (h * e1) * k1 + (h * e3) * k3 + (h * e4) * k4 + (h * e5) * k5 +
                (h * e6) * k6 + (h * e7) * k7;
    if (stats) stats->nrhs += 7;

    double en = scaled_error(err, y, ynew);
    if (!(en == en) || en > 1.0) {
      if (stats) ++stats->nrejected;
      double shrink = (en == en) ? std::max(0.2, 0.9 * std::pow(en, -0.2)) : 0.2;
      h *= shrink;
      continue;
    }
    t += h;
    y = ynew;
    if (stats) ++stats->nsteps;
    observer(t, y);
    double grow = en > 0.0 ? std::min(5.0, 0.9 * std::pow(en, -0.2)) : 5.0;
    h *= grow;
  }
  return y;
}

}  // namespace joycekit
