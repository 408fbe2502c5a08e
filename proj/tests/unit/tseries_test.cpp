#include <doctest.h>

#include <complex>
#include <functional>

#include "joycekit/tseries.hpp"

using joycekit::MultiIndexTable;
using joycekit::PoleHit;
using joycekit::TaylorSeries;
using joycekit::multiindex_table;
using joycekit::ts_const;
using joycekit::ts_exp;
using joycekit::ts_log;
using joycekit::ts_partial;
using joycekit::ts_powc;
using joycekit::ts_powi;
using joycekit::ts_var;
using cx = std::complex<double>;

namespace {

// Independent derivative oracle: 5-point central difference in one variable
// slot of a plain scalar function.
cx fd1(const std::function<cx(cx, cx)>& f, int slot, cx x, cx y, double h) {
  auto at = [&](double s) {
    return slot == 0 ? f(x + cx(s), y) : f(x, y + cx(s));
  };
  return (-at(2 * h) + 8.0 * at(h) - 8.0 * at(-h) + at(-2 * h)) / cx(12 * h);
}

cx fd_xy(const std::function<cx(cx, cx)>& f, cx x, cx y, double h) {
  auto gy = [&](cx xx, cx yy) { return fd1(f, 1, xx, yy, h); };
  return fd1(gy, 0, x, y, h);
}

}  // namespace

TEST_CASE("table layout and product triples close under addition") {
  auto top = multiindex_table(3, 4);
  CHECK(top->vars() == 3);
  CHECK(top->count() == 35);  // C(3+4, 4)
  for (const auto& t : top->mul_triples()) {
    auto a = top->exponents(t.i);
    auto b = top->exponents(t.j);
    auto c = top->exponents(t.k);
    for (int v = 0; v < 3; ++v) CHECK(a[v] + b[v] == c[v]);
  }
}

TEST_CASE("polynomial expansion matches hand algebra") {
  auto top = multiindex_table(2, 3);
  auto x = ts_var(top, 0, cx(0));
  auto y = ts_var(top, 1, cx(0));
  auto f = (x + cx(2) * y) * (x + cx(2) * y);  // x^2 + 4xy + 4y^2
  CHECK(ts_partial(f, {0, 0}) == cx(2));
  CHECK(ts_partial(f, {0, 1}) == cx(4));
  CHECK(ts_partial(f, {1, 1}) == cx(8));
  CHECK(ts_partial(f, {0}) == cx(0));

  // Base point shifts into the constant and linear coefficients.
  auto xs = ts_var(top, 0, cx(3));
  auto g = ts_powi(xs, 3, 0.0);  // (x)^3 expanded at x=3
  CHECK(g.constant() == cx(27));
  CHECK(ts_partial(g, {0}) == cx(27));
  CHECK(ts_partial(g, {0, 0}) == cx(18));
  CHECK(ts_partial(g, {0, 0, 0}) == cx(6));
}

TEST_CASE("mixed partials are order independent") {
  auto top = multiindex_table(2, 4);
  auto x = ts_var(top, 0, cx(0.3, 0.1));
  auto y = ts_var(top, 1, cx(-0.2, 0.4));
  auto f = ts_exp(x * y) * ts_powi(y + ts_const(top, cx(2)), 2, 0.0);
  CHECK(ts_partial(f, {0, 1}) == ts_partial(f, {1, 0}));
  CHECK(ts_partial(f, {0, 0, 1}) == ts_partial(f, {0, 1, 0}));
}

TEST_CASE("analytic lifts agree with a finite-difference oracle") {
  std::function<cx(cx, cx)> f = [](cx x, cx y) {
    return std::exp(x) * std::log(cx(1) + y) / (cx(1) + x + y);
  };
  cx x0(0.3, 0.05), y0(0.2, -0.1);
  auto top = multiindex_table(2, 4);
  auto one = ts_const(top, cx(1));
  auto xs = ts_var(top, 0, x0);
  auto ys = ts_var(top, 1, y0);
  auto s = ts_exp(xs) * ts_log(one + ys, 1e-12) / (one + xs + ys);

  CHECK(std::abs(s.constant() - f(x0, y0)) < 1e-14);
  const double h = 1e-2;
  CHECK(std::abs(ts_partial(s, {0}) - fd1(f, 0, x0, y0, h)) < 1e-7);
  CHECK(std::abs(ts_partial(s, {1}) - fd1(f, 1, x0, y0, h)) < 1e-7);
  CHECK(std::abs(ts_partial(s, {0, 1}) - fd_xy(f, x0, y0, h)) < 1e-6);
}

TEST_CASE("general and negative powers expand correctly") {
  auto top = multiindex_table(1, 3);
  auto one = ts_const(top, cx(1));
  auto x = ts_var(top, 0, cx(0));

  auto r = ts_powc(one + x, cx(0.5), 1e-12);  // sqrt(1+x) at 0
  CHECK(std::abs(r.constant() - cx(1)) < 1e-15);
  CHECK(std::abs(ts_partial(r, {0}) - cx(0.5)) < 1e-15);
  CHECK(std::abs(ts_partial(r, {0, 0}) - cx(-0.25)) < 1e-15);

  auto q = ts_powi(one + x, -2, 1e-12);  // 1 - 2x + 3x^2 - ...
  CHECK(std::abs(ts_partial(q, {0}) - cx(-2)) < 1e-14);
  CHECK(std::abs(ts_partial(q, {0, 0}) - cx(6)) < 1e-14);
}

TEST_CASE("pole margin guards division and log") {
  auto top = multiindex_table(1, 2);
  auto x = ts_var(top, 0, cx(1e-12));
  auto one = ts_const(top, cx(1));
  CHECK_THROWS_AS(one * joycekit::ts_inverse(x, 1e-9), PoleHit);
  CHECK_THROWS_AS(ts_log(x, 1e-9), PoleHit);
  CHECK_NOTHROW(joycekit::ts_inverse(ts_var(top, 0, cx(0.5)), 1e-9));
}
