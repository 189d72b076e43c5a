#include "herm/expr.hpp"

#include <cmath>
#include <cstdio>
#include <functional>
#include <utility>
#include <vector>

namespace herm {

struct Expr::Node {
  Kind kind = Kind::Constant;
  Complex value{};
  int index = 0;              // Var/ConjVar; exponent for Pow
  std::vector<Expr> children;  // [lhs, rhs] or [arg]
  std::size_t size = 1;
  int max_index = 0;
};

namespace {

std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace

Expr make_binary(Expr::Kind kind, Expr a, Expr b);
Expr make_unary(Expr::Kind kind, Expr a);

Expr::Expr() {
  static const std::shared_ptr<const Node> zero = std::make_shared<Node>();
  node_ = zero;
}

Expr Expr::constant(Complex value) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Constant;
  n->value = value;
  return Expr(std::move(n));
}

Expr Expr::var(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Var;
  n->index = index;
  n->max_index = index;
  return Expr(std::move(n));
}

Expr Expr::conj_var(int index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::ConjVar;
  n->index = index;
  n->max_index = index;
  return Expr(std::move(n));
}

Expr::Kind Expr::kind() const { return node_->kind; }
Complex Expr::value() const { return node_->value; }
int Expr::index() const { return node_->index; }
int Expr::exponent() const { return node_->index; }
const Expr& Expr::lhs() const { return node_->children.at(0); }
const Expr& Expr::rhs() const { return node_->children.at(1); }
const Expr& Expr::arg() const { return node_->children.at(0); }
bool Expr::is_zero() const { return kind() == Kind::Constant && node_->value == Complex{}; }
bool Expr::is_one() const { return kind() == Kind::Constant && node_->value == Complex{1.0, 0.0}; }
int Expr::max_index() const { return node_->max_index; }
std::size_t Expr::size() const { return node_->size; }

bool operator==(const Expr& x, const Expr& y) {
  if (x.node_ == y.node_) return true;
  if (x.kind() != y.kind()) return false;
  switch (x.kind()) {
    case Expr::Kind::Constant:
      return x.value() == y.value();
    case Expr::Kind::Var:
    case Expr::Kind::ConjVar:
      return x.index() == y.index();
    case Expr::Kind::Pow:
      return x.exponent() == y.exponent() && x.arg() == y.arg();
    case Expr::Kind::Exp:
    case Expr::Kind::Log:
    case Expr::Kind::Conj:
    case Expr::Kind::Abs2:
      return x.arg() == y.arg();
    default:
      return x.lhs() == y.lhs() && x.rhs() == y.rhs();
  }
}

Expr make_binary(Expr::Kind kind, Expr a, Expr b) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->size = 1 + a.size() + b.size();
  n->max_index = std::max(a.max_index(), b.max_index());
  n->children = {std::move(a), std::move(b)};
  return Expr(std::move(n));
}

Expr make_unary(Expr::Kind kind, Expr a) {
  auto n = std::make_shared<Expr::Node>();
  n->kind = kind;
  n->size = 1 + a.size();
  n->max_index = a.max_index();
  n->children = {std::move(a)};
  return Expr(std::move(n));
}

Expr operator+(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() + b.value());
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  return make_binary(Expr::Kind::Add, a, b);
}

Expr operator-(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() - b.value());
  if (b.is_zero()) return a;
  return make_binary(Expr::Kind::Sub, a, b);
}

Expr operator-(const Expr& a) { return Expr() - a; }

Expr operator*(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant()) return Expr::constant(a.value() * b.value());
  if (a.is_zero() || b.is_zero()) return Expr();
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  return make_binary(Expr::Kind::Mul, a, b);
}

Expr operator/(const Expr& a, const Expr& b) {
  if (a.is_constant() && b.is_constant() && b.value() != Complex{}) return Expr::constant(a.value() / b.value());
  if (a.is_zero() && !b.is_zero()) return Expr();
  if (b.is_one()) return a;
  return make_binary(Expr::Kind::Div, a, b);
}

Expr pow(const Expr& base, int exponent) {
  if (exponent == 0) return Expr::constant(1.0);
  if (exponent == 1) return base;
  if (base.is_constant() && (exponent > 0 || base.value() != Complex{}))
    return Expr::constant(std::pow(base.value(), exponent));
  auto n = std::make_shared<Expr::Node>();
  n->kind = Expr::Kind::Pow;
  n->index = exponent;
  n->size = 1 + base.size();
  n->max_index = base.max_index();
  n->children = {base};
  return Expr(std::move(n));
}

Expr exp(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::exp(a.value()));
  return make_unary(Expr::Kind::Exp, a);
}

Expr log(const Expr& a) {
  if (a.is_constant() && a.value() != Complex{}) return Expr::constant(std::log(a.value()));
  return make_unary(Expr::Kind::Log, a);
}

Expr conj(const Expr& a) {
  switch (a.kind()) {
    case Expr::Kind::Constant:
      return Expr::constant(std::conj(a.value()));
    case Expr::Kind::Var:
      return Expr::conj_var(a.index());
    case Expr::Kind::ConjVar:
      return Expr::var(a.index());
    case Expr::Kind::Conj:
      return a.arg();
    case Expr::Kind::Abs2:
      return a;
    default:
      return make_unary(Expr::Kind::Conj, a);
  }
}

Expr abs2(const Expr& a) {
  if (a.is_constant()) return Expr::constant(std::norm(a.value()));
  return make_unary(Expr::Kind::Abs2, a);
}

// ---------------------------------------------------------------------------
// Printing

namespace {

// Binding strength of the printed form of a node.
int precedence(const Expr& e) {
  switch (e.kind()) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Pow:
      return 3;
    default:
      return 4;
  }
}

std::string print_constant(Complex v) {
  const double re = v.real();
  const double im = v.imag();
  if (im == 0.0) {
    if (std::signbit(re)) return "(-" + format_real(-re) + ")";
    return format_real(re);
  }
  std::string imag_part;
  if (im == 1.0) {
    imag_part = "i";
  } else if (im == -1.0) {
    imag_part = "-i";
  } else if (std::signbit(im)) {
    imag_part = "-" + format_real(-im) + "*i";
  } else {
    imag_part = format_real(im) + "*i";
  }
  if (re == 0.0 && !std::signbit(re)) {
    if (im == 1.0) return "i";
    return "(" + imag_part + ")";
  }
  std::string real_part = std::signbit(re) ? "-" + format_real(-re) : format_real(re);
  if (imag_part[0] == '-') return "(" + real_part + imag_part + ")";
  return "(" + real_part + "+" + imag_part + ")";
}

std::string print(const Expr& e);

std::string wrap(const Expr& child, bool parens) {
  std::string s = print(child);
  return parens ? "(" + s + ")" : s;
}

std::string print(const Expr& e) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant:
      return print_constant(e.value());
    case K::Var:
      return "z" + std::to_string(e.index());
    case K::ConjVar:
      return "conj(z" + std::to_string(e.index()) + ")";
    case K::Add:
      return wrap(e.lhs(), false) + "+" + wrap(e.rhs(), precedence(e.rhs()) <= 1);
    case K::Sub:
      return wrap(e.lhs(), false) + "-" + wrap(e.rhs(), precedence(e.rhs()) <= 1);
    case K::Mul:
      return wrap(e.lhs(), precedence(e.lhs()) < 2) + "*" + wrap(e.rhs(), precedence(e.rhs()) <= 2);
    case K::Div:
      return wrap(e.lhs(), precedence(e.lhs()) < 2) + "/" + wrap(e.rhs(), precedence(e.rhs()) <= 2);
    case K::Pow:
      return wrap(e.arg(), precedence(e.arg()) <= 3) + "^" + std::to_string(e.exponent());
    case K::Exp:
      return "exp(" + print(e.arg()) + ")";
    case K::Log:
      return "log(" + print(e.arg()) + ")";
    case K::Conj:
      return "conj(" + print(e.arg()) + ")";
    case K::Abs2:
      return "abs2(" + print(e.arg()) + ")";
  }
  return {};
}

}  // namespace

std::string Expr::str() const { return print(*this); }

// ---------------------------------------------------------------------------
// Differentiation

Expr wirtinger(const Expr& e, int index, bool conjugated) {
  using K = Expr::Kind;
  if (e.max_index() < index) return Expr();
  switch (e.kind()) {
    case K::Constant:
      return Expr();
    case K::Var:
      return (!conjugated && e.index() == index) ? Expr::constant(1.0) : Expr();
    case K::ConjVar:
      return (conjugated && e.index() == index) ? Expr::constant(1.0) : Expr();
    case K::Add:
      return wirtinger(e.lhs(), index, conjugated) + wirtinger(e.rhs(), index, conjugated);
    case K::Sub:
      return wirtinger(e.lhs(), index, conjugated) - wirtinger(e.rhs(), index, conjugated);
    case K::Mul:
      return wirtinger(e.lhs(), index, conjugated) * e.rhs() + e.lhs() * wirtinger(e.rhs(), index, conjugated);
    case K::Div: {
      const Expr& u = e.lhs();
      const Expr& v = e.rhs();
      Expr du = wirtinger(u, index, conjugated);
      Expr dv = wirtinger(v, index, conjugated);
      if (dv.is_zero()) return du / v;
      return (du * v - u * dv) / pow(v, 2);
    }
    case K::Pow: {
      const int k = e.exponent();
      Expr da = wirtinger(e.arg(), index, conjugated);
      return Expr::constant(static_cast<double>(k)) * pow(e.arg(), k - 1) * da;
    }
    case K::Exp:
      return e * wirtinger(e.arg(), index, conjugated);
    case K::Log:
      return wirtinger(e.arg(), index, conjugated) / e.arg();
    case K::Conj:
      // d/dz conj(f) = conj(d/dzbar f)
      return conj(wirtinger(e.arg(), index, !conjugated));
    case K::Abs2: {
      const Expr& f = e.arg();
      return wirtinger(f, index, conjugated) * conj(f) + f * conj(wirtinger(f, index, !conjugated));
    }
  }
  return Expr();
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

Complex eval_node(const Expr& e, std::span<const Complex> point) {
  using K = Expr::Kind;
  switch (e.kind()) {
    case K::Constant:
      return e.value();
    case K::Var:
      return point[static_cast<std::size_t>(e.index() - 1)];
    case K::ConjVar:
      return std::conj(point[static_cast<std::size_t>(e.index() - 1)]);
    case K::Add:
      return eval_node(e.lhs(), point) + eval_node(e.rhs(), point);
    case K::Sub:
      return eval_node(e.lhs(), point) - eval_node(e.rhs(), point);
    case K::Mul:
      return eval_node(e.lhs(), point) * eval_node(e.rhs(), point);
    case K::Div: {
      const Complex den = eval_node(e.rhs(), point);
      if (den == Complex{}) throw EvalError("division by zero", e.rhs().str());
      return eval_node(e.lhs(), point) / den;
    }
    case K::Pow: {
      const Complex base = eval_node(e.arg(), point);
      if (e.exponent() < 0 && base == Complex{}) throw EvalError("division by zero", e.arg().str());
      // repeated squaring keeps integer powers exact for small exponents
      int k = std::abs(e.exponent());
      Complex acc{1.0, 0.0};
      Complex b = base;
      while (k > 0) {
        if (k & 1) acc *= b;
        b *= b;
        k >>= 1;
      }
      return e.exponent() < 0 ? Complex{1.0, 0.0} / acc : acc;
    }
    case K::Exp:
      return std::exp(eval_node(e.arg(), point));
    case K::Log: {
      const Complex x = eval_node(e.arg(), point);
      if (x == Complex{}) throw EvalError("log of zero", e.arg().str());
      return std::log(x);
    }
    case K::Conj:
      return std::conj(eval_node(e.arg(), point));
    case K::Abs2:
      return std::norm(eval_node(e.arg(), point));
  }
  return {};
}

}  // namespace

Complex eval(const Expr& e, std::span<const Complex> point) {
  if (static_cast<std::size_t>(e.max_index()) > point.size())
    throw GeometryError("evaluation point has " + std::to_string(point.size()) + " coordinates, expression uses z" +
                        std::to_string(e.max_index()));
  const Complex v = eval_node(e, point);
  if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw EvalError("non-finite value", e.str());
  return v;
}

}  // namespace herm
