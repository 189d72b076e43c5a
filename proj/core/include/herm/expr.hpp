#pragma once

// Scalar expressions over chart coordinates z1..zn and their conjugates,
// with exact Wirtinger differentiation.
//
// Expr is an immutable handle to a shared node; copies are cheap and the
// tree can be evaluated from several threads at once.

#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "herm/error.hpp"

namespace herm {

class Expr {
 public:
  enum class Kind { Constant, Var, ConjVar, Add, Sub, Mul, Div, Pow, Exp, Log, Conj, Abs2 };

  /// The constant zero.
  Expr();

  static Expr constant(Complex value);
  /// `index` is 1-based, matching the `z<k>` spelling.
  static Expr var(int index);
  static Expr conj_var(int index);

  Kind kind() const;
  Complex value() const;    // Constant only
  int index() const;        // Var / ConjVar only
  int exponent() const;     // Pow only
  const Expr& lhs() const;  // binary nodes and Pow base
  const Expr& rhs() const;  // binary nodes
  const Expr& arg() const;  // unary nodes (Exp, Log, Conj, Abs2) and Pow base

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_zero() const;
  bool is_one() const;

  /// Largest variable index referenced, 0 for closed expressions.
  int max_index() const;
  /// Number of nodes, counting shared subtrees once per reference.
  std::size_t size() const;

  /// Canonical text; `parse(e.str(), n)` rebuilds an equal tree.
  std::string str() const;

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  struct Node;
  explicit Expr(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

  std::shared_ptr<const Node> node_;

  friend Expr make_binary(Expr::Kind, Expr, Expr);
  friend Expr make_unary(Expr::Kind, Expr);
  friend Expr pow(const Expr& base, int exponent);
};

// Builders. All perform local constant folding (0+x, 1*x, c1*c2, ...) and
// conj/abs2 normalisation; nothing more.
Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, int exponent);
Expr exp(const Expr& a);
Expr log(const Expr& a);
Expr conj(const Expr& a);
Expr abs2(const Expr& a);

/// Parses `source` against the grammar
///   expr   := term (('+'|'-') term)*
///   term   := factor (('*'|'/') factor)*
///   factor := '-' factor | base ('^' ['-'] INT)?
///   base   := NUMBER | 'i' | 'z' INT | conj(expr) | abs2(expr)
///           | exp(expr) | log(expr) | '(' expr ')'
/// Variables must satisfy 1 <= k <= dimension.
Expr parse(std::string_view source, int dimension);

/// d/dz_index (conjugated = false) or d/dzbar_index (conjugated = true).
Expr wirtinger(const Expr& e, int index, bool conjugated);

/// Evaluates at `point` (point[k-1] is z_k). Throws EvalError on division
/// by zero, log of zero, or a non-finite result.
Complex eval(const Expr& e, std::span<const Complex> point);

}  // namespace herm
