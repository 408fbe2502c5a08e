#include "joycekit/expr.hpp"

#include <cctype>
#include <cstdlib>

namespace joycekit {
namespace {

struct Parser {
  const std::string& text;
  const std::vector<std::string>& vars;
  size_t pos = 0;
  int line = 1, col = 1;

  Parser(const std::string& t, const std::vector<std::string>& v) : text(t), vars(v) {}

  [[noreturn]] void fail(const std::string& msg) { throw ParseError(msg, line, col); }

  char peek() {
    skip_ws();
    return pos < text.size() ? text[pos] : '\0';
  }

  void skip_ws() {
    while (pos < text.size()) {
      char c = text[pos];
      if (c == '\n') {
        ++line;
        col = 1;
        ++pos;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        ++col;
        ++pos;
      } else {
        break;
      }
    }
  }

  void advance() {
    ++col;
    ++pos;
  }

  bool eat(char c) {
    if (peek() == c) {
      advance();
      return true;
    }
    return false;
  }

  static ExprPtr mk(Expr e) { return std::make_shared<Expr>(std::move(e)); }

  static ExprPtr constant(cx v) {
    Expr e;
    e.kind = Expr::Kind::Const;
    e.value = v;
    return mk(std::move(e));
  }

  static ExprPtr binary(Expr::Kind k, ExprPtr a, ExprPtr b) {
    Expr e;
    e.kind = k;
    e.a = std::move(a);
    e.b = std::move(b);
    return mk(std::move(e));
  }

  static ExprPtr unary(Expr::Kind k, ExprPtr a) {
    Expr e;
    e.kind = k;
    e.a = std::move(a);
    return mk(std::move(e));
  }

  ExprPtr parse() {
    ExprPtr e = expr();
    if (peek() != '\0') fail("unexpected trailing input");
    return e;
  }

  ExprPtr expr() {
    ExprPtr e = term();
    for (;;) {
      if (eat('+')) {
        e = binary(Expr::Kind::Add, e, term());
      } else if (eat('-')) {
        e = binary(Expr::Kind::Sub, e, term());
      } else {
        return e;
      }
    }
  }

  ExprPtr term() {
    ExprPtr e = factor();
    for (;;) {
      if (eat('*')) {
        e = binary(Expr::Kind::Mul, e, factor());
      } else if (eat('/')) {
        e = binary(Expr::Kind::Div, e, factor());
      } else {
        return e;
      }
    }
  }

  ExprPtr factor() {
    if (eat('-')) return unary(Expr::Kind::Neg, factor());
    ExprPtr base = atom();
    if (eat('^')) {
      int eline = line, ecol = col;
      ExprPtr ex = factor();
      cx w;
      if (!fold_constant(*ex, &w))
        throw ParseError("exponent must be a constant", eline, ecol);
      if (w.imag() == 0.0 && w.real() == static_cast<long long>(w.real())) {
        Expr e;
        e.kind = Expr::Kind::PowInt;
        e.ipow = static_cast<long long>(w.real());
        e.a = base;
        return mk(std::move(e));
      }
      Expr e;
      e.kind = Expr::Kind::PowGen;
      e.gpow = w;
      e.a = base;
      return mk(std::move(e));
    }
    return base;
  }

  ExprPtr atom() {
    char c = peek();
    if (c == '(') {
      advance();
      ExprPtr e = expr();
      if (!eat(')')) fail("expected ')'");
      return e;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return name();
    if (c == '\0') fail("unexpected end of input");
    fail(std::string("unexpected character '") + c + "'");
  }

  ExprPtr number() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isdigit(static_cast<unsigned char>(text[pos])) || text[pos] == '.'))
      advance();
    if (pos < text.size() && (text[pos] == 'e' || text[pos] == 'E')) {
      size_t save = pos;
      int scol = col;
      advance();
      if (pos < text.size() && (text[pos] == '+' || text[pos] == '-')) advance();
      if (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        while (pos < text.size() && std::isdigit(static_cast<unsigned char>(text[pos])))
          advance();
      } else {
        pos = save;
        col = scol;
      }
    }
    std::string tok = text.substr(start, pos - start);
    char* end = nullptr;
    double v = std::strtod(tok.c_str(), &end);
    if (end != tok.c_str() + tok.size()) fail("malformed number '" + tok + "'");
    return constant(cx(v, 0.0));
  }

  ExprPtr name() {
    skip_ws();
    size_t start = pos;
    while (pos < text.size() &&
           (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_'))
      advance();
    std::string id = text.substr(start, pos - start);
    if (id == "i") return constant(cx(0.0, 1.0));
    if (id == "exp" || id == "log") {
      if (!eat('(')) fail("expected '(' after " + id);
      ExprPtr arg = expr();
      if (!eat(')')) fail("expected ')'");
      return unary(id == "exp" ? Expr::Kind::Exp : Expr::Kind::Log, arg);
    }
    for (size_t k = 0; k < vars.size(); ++k) {
      if (vars[k] == id) {
        Expr e;
        e.kind = Expr::Kind::Var;
        e.var = static_cast<int>(k);
        return mk(std::move(e));
      }
    }
    fail("unknown name '" + id + "'");
  }

  // Constant folding for exponents only; rejects anything with a variable.
  static bool fold_constant(const Expr& e, cx* out) {
    cx a, b;
    switch (e.kind) {
      case Expr::Kind::Const:
        *out = e.value;
        return true;
      case Expr::Kind::Var:
        return false;
      case Expr::Kind::Neg:
        if (!fold_constant(*e.a, &a)) return false;
        *out = -a;
        return true;
      case Expr::Kind::Add:
      case Expr::Kind::Sub:
      case Expr::Kind::Mul:
      case Expr::Kind::Div:
        if (!fold_constant(*e.a, &a) || !fold_constant(*e.b, &b)) return false;
        switch (e.kind) {
          case Expr::Kind::Add: *out = a + b; break;
          case Expr::Kind::Sub: *out = a - b; break;
          case Expr::Kind::Mul: *out = a * b; break;
          default:
            if (b == cx(0)) return false;
            *out = a / b;
        }
        return true;
      case Expr::Kind::Exp:
        if (!fold_constant(*e.a, &a)) return false;
        *out = std::exp(a);
        return true;
      case Expr::Kind::Log:
        if (!fold_constant(*e.a, &a) || a == cx(0)) return false;
        *out = std::log(a);
        return true;
      case Expr::Kind::PowInt:
        if (!fold_constant(*e.a, &a)) return false;
        *out = std::pow(a, static_cast<double>(e.ipow));
        return true;
      case Expr::Kind::PowGen:
        if (!fold_constant(*e.a, &a)) return false;
        *out = std::pow(a, e.gpow);
        return true;
    }
    return false;
  }
};

}  // namespace

ExprPtr parse_expression(const std::string& text,
                         const std::vector<std::string>& var_names) {
  Parser p(text, var_names);
  return p.parse();
}

std::vector<std::string> w_var_names(int n) {
  std::vector<std::string> v;
  for (int i = 1; i <= n; ++i) v.push_back("z" + std::to_string(i));
  for (int i = 1; i <= n; ++i) v.push_back("t" + std::to_string(i));
  return v;
}

std::vector<std::string> observable_var_names(int n) {
  std::vector<std::string> v{"eps"};
  for (int i = 1; i <= n; ++i) v.push_back("z" + std::to_string(i));
  for (int i = 1; i <= n; ++i) v.push_back("t" + std::to_string(i));
  return v;
}

}  // namespace joycekit
