#pragma once

// Exterior algebra over a complex basis of 1-forms
//   Phi_0 .. Phi_{n-1}   (type (1,0): dz^a or phi_a)
//   Phi_n .. Phi_{2n-1}  (type (0,1): their conjugates)
// A form is stored densely by bitmask of basis indices; the coefficient of a
// sorted monomial equals the value of the form on the corresponding sorted
// tuple of dual vectors, i.e. (a ^ b)(X, Y) = a(X) b(Y) - a(Y) b(X).

#include <bit>
#include <cstdint>
#include <functional>
#include <vector>

#include "herm/error.hpp"
#include "herm/expr.hpp"

namespace herm {

inline bool coef_is_zero(const Complex& c) { return c == Complex{}; }
inline bool coef_is_zero(const Expr& e) { return e.is_zero(); }
inline Complex coef_conj(const Complex& c) { return std::conj(c); }
inline Expr coef_conj(const Expr& e) { return conj(e); }
inline Complex coef_one(const Complex&) { return {1.0, 0.0}; }
inline Expr coef_one(const Expr&) { return Expr::constant(1.0); }

template <class Coef>
class Form {
 public:
  using Mask = std::uint32_t;

  Form() = default;
  /// The zero form over `n` complex dimensions (2n basis 1-forms).
  explicit Form(int n) : n_(n), coef_(std::size_t{1} << (2 * n)) {}

  static Form scalar(int n, Coef c) {
    Form f(n);
    f.coef_[0] = std::move(c);
    return f;
  }
  /// Basis 1-form Phi_a, with `a` in [0, 2n).
  static Form basis(int n, int a) { return basis(n, a, coef_one(Coef{})); }
  static Form basis(int n, int a, Coef c) {
    Form f(n);
    f.coef_[Mask{1} << a] = std::move(c);
    return f;
  }

  int dim() const { return n_; }
  int nbasis() const { return 2 * n_; }
  std::size_t size() const { return coef_.size(); }
  const Coef& operator[](Mask m) const { return coef_[m]; }
  Coef& operator[](Mask m) { return coef_[m]; }

  /// Value on the basis dual vectors E_{idx[0]}, E_{idx[1]}, ...; antisymmetric
  /// in its arguments.
  Coef value(std::initializer_list<int> idx) const {
    Mask m = 0;
    int sign = 1;
    for (auto it = idx.begin(); it != idx.end(); ++it) {
      const Mask bit = Mask{1} << *it;
      if (m & bit) return Coef();
      // number of already placed indices greater than this one
      if (std::popcount(m & ~((bit << 1) - 1)) & 1) sign = -sign;
      m |= bit;
    }
    return sign > 0 ? coef_[m] : Coef() - coef_[m];
  }

  /// (p, q) type of a monomial.
  std::pair<int, int> bidegree(Mask m) const {
    const Mask hol = (Mask{1} << n_) - 1;
    return {std::popcount(m & hol), std::popcount(m & ~hol)};
  }

  /// Projection onto the (p, q) component.
  Form part(int p, int q) const {
    Form out(n_);
    for (Mask m = 0; m < coef_.size(); ++m)
      if (bidegree(m) == std::pair{p, q}) out.coef_[m] = coef_[m];
    return out;
  }

  Form& operator+=(const Form& o) {
    for (Mask m = 0; m < coef_.size(); ++m)
      if (!coef_is_zero(o.coef_[m])) coef_[m] = coef_[m] + o.coef_[m];
    return *this;
  }
  Form& operator-=(const Form& o) {
    for (Mask m = 0; m < coef_.size(); ++m)
      if (!coef_is_zero(o.coef_[m])) coef_[m] = coef_[m] - o.coef_[m];
    return *this;
  }
  friend Form operator+(Form a, const Form& b) { return a += b; }
  friend Form operator-(Form a, const Form& b) { return a -= b; }
  friend Form operator*(const Coef& s, const Form& a) {
    Form out(a.n_);
    for (Mask m = 0; m < a.coef_.size(); ++m)
      if (!coef_is_zero(a.coef_[m])) out.coef_[m] = s * a.coef_[m];
    return out;
  }

  friend Form wedge(const Form& a, const Form& b) {
    Form out(a.n_);
    for (Mask ma = 0; ma < a.coef_.size(); ++ma) {
      if (coef_is_zero(a.coef_[ma])) continue;
      for (Mask mb = 0; mb < b.coef_.size(); ++mb) {
        if ((ma & mb) || coef_is_zero(b.coef_[mb])) continue;
        const Coef prod = a.coef_[ma] * b.coef_[mb];
        if (reorder_sign(ma, mb) > 0)
          out.coef_[ma | mb] = out.coef_[ma | mb] + prod;
        else
          out.coef_[ma | mb] = out.coef_[ma | mb] - prod;
      }
    }
    return out;
  }

  /// Complex conjugate form: conj(a)(X) = conj(a(conj X)).
  Form conjugate() const {
    Form out(n_);
    const Mask hol = (Mask{1} << n_) - 1;
    for (Mask m = 0; m < coef_.size(); ++m) {
      if (coef_is_zero(coef_[m])) continue;
      const Mask hm = m & hol;
      const Mask am = (m >> n_) & hol;
      const Mask target = am | (hm << n_);
      // conj(Phi_A1 ^ ... ) lists the antiholomorphic images of the
      // holomorphic factors first; sort back into ascending order.
      const int sign = reorder_sign(hm << n_, am);
      const Coef c = coef_conj(coef_[m]);
      out.coef_[target] = sign > 0 ? c : Coef() - c;
    }
    return out;
  }

  /// Replaces each basis 1-form Phi_a by `images[a]` (a 1-form over the
  /// same or another basis of equal dimension) and expands.
  Form pullback(const std::vector<Form>& images) const {
    const int m_dim = images.empty() ? n_ : images.front().n_;
    Form out(m_dim);
    for (Mask m = 0; m < coef_.size(); ++m) {
      if (coef_is_zero(coef_[m])) continue;
      Form acc = Form::scalar(m_dim, coef_[m]);
      for (int a = 0; a < 2 * n_; ++a)
        if (m & (Mask{1} << a)) acc = wedge(acc, images[static_cast<std::size_t>(a)]);
      out += acc;
    }
    return out;
  }

  template <class F>
  auto map(F&& f) const {
    using Out = std::decay_t<decltype(f(coef_[0]))>;
    Form<Out> out(n_);
    for (Mask m = 0; m < coef_.size(); ++m)
      if (!coef_is_zero(coef_[m])) out[m] = f(coef_[m]);
    return out;
  }

  /// Sign of the permutation sorting (monomial a) ++ (monomial b).
  static int reorder_sign(Mask a, Mask b) {
    int inversions = 0;
    for (Mask rest = b; rest; rest &= rest - 1) {
      const Mask bit = rest & (~rest + 1);
      inversions += std::popcount(a & ~((bit << 1) - 1));
    }
    return (inversions & 1) ? -1 : 1;
  }

 private:
  int n_ = 0;
  std::vector<Coef> coef_;
};

using ComplexForm = Form<Complex>;
using ExprForm = Form<Expr>;

inline double max_abs(const ComplexForm& f) {
  double m = 0.0;
  for (std::uint32_t k = 0; k < f.size(); ++k) m = std::max(m, std::abs(f[k]));
  return m;
}

}  // namespace herm
