#pragma once

#include <complex>
#include <memory>
#include <string>
#include <vector>

#include "joycekit/errors.hpp"
#include "joycekit/tseries.hpp"

namespace joycekit {

using cx = std::complex<double>;

// Immutable expression tree over named variables with complex constants.
// Powers with non-constant exponents are rejected at parse time; integer
// exponents are kept exact so evaluation works at poles of nothing.
struct Expr {
  enum class Kind { Const, Var, Add, Sub, Mul, Div, Neg, Exp, Log, PowInt, PowGen };
  Kind kind;
  cx value{};        // Const
  int var = -1;      // Var
  long long ipow = 0;  // PowInt
  cx gpow{};         // PowGen
  std::shared_ptr<const Expr> a, b;
};

using ExprPtr = std::shared_ptr<const Expr>;

// Parses the grammar  expr := term (('+'|'-') term)* ; term := factor
// (('*'|'/') factor)* ; factor := '-' factor | atom ('^' factor)? ; atom :=
// number | 'i' | name | 'exp(...)' | 'log(...)' | '(' expr ')'.  Exponents
// must evaluate to constants.  Throws ParseError with 1-based line/col.
ExprPtr parse_expression(const std::string& text,
                         const std::vector<std::string>& var_names);

std::vector<std::string> w_var_names(int n);           // z1..zn then t1..tn
std::vector<std::string> observable_var_names(int n);  // eps, z1..zn, t1..tn

namespace detail {

template <class A>
struct EvalOps;

template <>
struct EvalOps<cx> {
  static cx constant(const cx&, cx v) { return v; }
  static cx div(const cx& a, const cx& b, double margin) {
    if (std::abs(b) <= margin) throw PoleHit("division hits the declared pole margin");
    return a / b;
  }
  static cx exp_(const cx& a) { return std::exp(a); }
  static cx log_(const cx& a, double margin) {
    if (std::abs(a) <= margin) throw PoleHit("log argument hits the declared pole margin");
    return std::log(a);
  }
  static cx powi(const cx& a, long long p, double margin) {
    if (p < 0) {
      if (std::abs(a) <= margin) throw PoleHit("negative power hits the declared pole margin");
      return cx(1) / powi(a, -p, margin);
    }
    cx r(1), base = a;
    while (p > 0) {
      if (p & 1) r *= base;
      base *= base;
      p >>= 1;
    }
    return r;
  }
  static cx powc(const cx& a, cx w, double margin) {
    if (std::abs(a) <= margin) throw PoleHit("power base hits the declared pole margin");
    return std::pow(a, w);
  }
};

template <>
struct EvalOps<TaylorSeries<cx>> {
  using S = TaylorSeries<cx>;
  static S constant(const S& proto, cx v) { return ts_const(proto.top, v); }
  static S div(const S& a, const S& b, double margin) { return a * ts_inverse(b, margin); }
  static S exp_(const S& a) { return ts_exp(a); }
  static S log_(const S& a, double margin) { return ts_log(a, margin); }
  static S powi(const S& a, long long p, double margin) { return ts_powi(a, p, margin); }
  static S powc(const S& a, cx w, double margin) { return ts_powc(a, w, margin); }
};

}  // namespace detail

// Evaluates the tree with each variable mapped to vars[index].  The scalar
// type carries the arithmetic (plain complex or a truncated expansion).
template <class A>
A eval_expr(const Expr& e, const std::vector<A>& vars, double margin) {
  using Ops = detail::EvalOps<A>;
  switch (e.kind) {
    case Expr::Kind::Const:
      return Ops::constant(vars.at(0), e.value);
    case Expr::Kind::Var:
      return vars.at(e.var);
    case Expr::Kind::Add:
      return eval_expr(*e.a, vars, margin) + eval_expr(*e.b, vars, margin);
    case Expr::Kind::Sub:
      return eval_expr(*e.a, vars, margin) - eval_expr(*e.b, vars, margin);
    case Expr::Kind::Mul:
      return eval_expr(*e.a, vars, margin) * eval_expr(*e.b, vars, margin);
    case Expr::Kind::Div:
      return Ops::div(eval_expr(*e.a, vars, margin), eval_expr(*e.b, vars, margin), margin);
    case Expr::Kind::Neg:
      return -eval_expr(*e.a, vars, margin);
    case Expr::Kind::Exp:
      return Ops::exp_(eval_expr(*e.a, vars, margin));
    case Expr::Kind::Log:
      return Ops::log_(eval_expr(*e.a, vars, margin), margin);
    case Expr::Kind::PowInt:
      return Ops::powi(eval_expr(*e.a, vars, margin), e.ipow, margin);
    case Expr::Kind::PowGen:
      return Ops::powc(eval_expr(*e.a, vars, margin), e.gpow, margin);
  }
  throw Error("corrupt expression node");
}

}  // namespace joycekit
