#pragma once

#include <Eigen/Dense>
#include <string>

#include "joycekit/expr.hpp"

namespace joycekit {

// A point of the total space: base coordinates z and fibre coordinates
// theta, both complex.  The flat coordinate order used everywhere is the n
// base directions followed by the n fibre directions.
struct XPoint {
  Eigen::VectorXcd z;
  Eigen::VectorXcd theta;

  int n() const { return static_cast<int>(z.size()); }

  XPoint shifted(int coord, cx delta) const {
    XPoint y = *this;
    int k = n();
    if (coord < k)
      y.z(coord) += delta;
    else
      y.theta(coord - k) += delta;
    return y;
  }
};

// A candidate potential W(z, theta) with a declared pole margin: evaluation
// anywhere closer than the margin to a division pole, log branch point, or
// fractional-power base throws PoleHit.
struct PlebanskiFunction {
  ExprPtr expr;
  int n = 0;
  double regularity_margin = 1e-9;

  static PlebanskiFunction parse(const std::string& text, int n,
                                 double margin = 1e-9) {
    PlebanskiFunction w;
    w.expr = parse_expression(text, w_var_names(n));
    w.n = n;
    w.regularity_margin = margin;
    return w;
  }

  cx value(const XPoint& x) const {
    std::vector<cx> vars(2 * n);
    for (int k = 0; k < n; ++k) {
      vars[k] = x.z(k);
      vars[n + k] = x.theta(k);
    }
    return eval_expr<cx>(*expr, vars, regularity_margin);
  }

  // Pole-free predicate: true when evaluation stays clear of the margin and
  // produces a finite value.
  bool regular(const XPoint& x) const {
    try {
      cx v = value(x);
      return std::isfinite(v.real()) && std::isfinite(v.imag());
    } catch (const PoleHit&) {
      return false;
    }
  }

  // All mixed partials through the requested order at x, as one expansion.
  TaylorSeries<cx> jet(const XPoint& x, int order) const {
    auto top = multiindex_table(2 * n, order);
    std::vector<TaylorSeries<cx>> vars;
    vars.reserve(2 * n);
    for (int k = 0; k < n; ++k) vars.push_back(ts_var(top, k, x.z(k)));
    for (int k = 0; k < n; ++k) vars.push_back(ts_var(top, n + k, x.theta(k)));
    return eval_expr<TaylorSeries<cx>>(*expr, vars, regularity_margin);
  }
};

}  // namespace joycekit
