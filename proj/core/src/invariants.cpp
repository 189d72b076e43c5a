#include "herm/invariants.hpp"

#include "herm/connections.hpp"

namespace herm {

double holo_sect_curv(const Tensor& R, const CVector& X, double* imag_residual) {
  const int n = R.dims()[0];
  const double norm2 = X.squaredNorm();
  if (std::sqrt(norm2) <= 1e-12) throw GeometryError("holomorphic sectional curvature needs a nonzero vector");
  Complex acc{};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) acc += R(i, j, k, l) * X(i) * std::conj(X(j)) * X(k) * std::conj(X(l));
  acc /= norm2 * norm2;
  if (imag_residual) *imag_residual = std::abs(acc.imag());
  return acc.real();
}

Tensor symmetrize(const Tensor& R) {
  const int n = R.dims()[0];
  Tensor out = Tensor::cube(4, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          out(i, j, k, l) = 0.25 * (R(i, j, k, l) + R(k, j, i, l) + R(i, l, k, j) + R(k, l, i, j));
  return out;
}

Tensor constant_H_pattern(int n, double c) {
  Tensor out = Tensor::cube(4, n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      out(i, i, k, k) += c / 2;
      out(i, k, k, i) += c / 2;
    }
  return out;
}

double fitted_c(const Tensor& rhat) {
  const int n = rhat.dims()[0];
  Complex tr{};
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) tr += rhat(i, i, k, k);
  return 2.0 * tr.real() / (n * (n + 1));
}

ConstantHResult constant_H_test(const Tensor& rhat, double tol) {
  ConstantHResult out;
  out.c = fitted_c(rhat);
  const Residual r = max_residual(rhat - constant_H_pattern(rhat.dims()[0], out.c));
  out.deviation = r.value;
  out.worst = r.worst;
  out.flag = out.deviation < tol;
  return out;
}

RicciScalars ricci_and_scalars(const Tensor& R) {
  const int n = R.dims()[0];
  RicciScalars out{CMatrix::Zero(n, n), CMatrix::Zero(n, n), CMatrix::Zero(n, n)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < n; ++r) {
        out.rho1(i, j) += R(i, j, r, r);
        out.rho2(i, j) += R(r, r, i, j);
        out.rho3(i, j) += R(r, j, i, r);
      }
  out.s = out.rho1.trace();
  out.s_hat = out.rho3.trace();
  return out;
}

TorsionInvariants torsion_invariants(const GeometrySample& s) {
  const int n = s.n;
  TorsionInvariants out;
  out.eta = CVector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) out.eta(i) += s.T(k, k, i);

  // E_A(eta_i) from the raw derivatives of T
  CMatrix deta = CMatrix::Zero(n, 2 * n);
  for (int i = 0; i < n; ++i)
    for (int A = 0; A < 2 * n; ++A)
      for (int k = 0; k < n; ++k) deta(i, A) += s.dT(k, k, i, A);

  out.eta_cov = deta;
  for (int i = 0; i < n; ++i)
    for (int A = 0; A < 2 * n; ++A)
      for (int m = 0; m < n; ++m) out.eta_cov(i, A) -= s.theta(i, m, A) * out.eta(m);

  // (dbar eta)(e_a, ebar_b) = -ebar_b(eta_a) + sum_i eta_i dphi_i(e_a, ebar_b)
  out.dbar_eta = CMatrix::Zero(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      Complex v = -deta(a, n + b);
      for (int i = 0; i < n; ++i) v += out.eta(i) * s.dphi[static_cast<std::size_t>(i)].value({a, n + b});
      out.dbar_eta(a, b) = v;
    }

  for (int i = 0; i < n; ++i) out.chi += out.eta_cov(i, n + i);

  const Tensor cov = chern_covariant_T(s);
  out.xi = CMatrix::Zero(n, n);
  out.sigma = CMatrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int r = 0; r < n; ++r) {
        out.xi(i, j) += cov(j, i, r, n + r);
        for (int q = 0; q < n; ++q) out.sigma(i, j) += s.T(r, i, q) * std::conj(s.T(r, j, q));
      }
  out.T2 = s.T.norm2();
  out.eta2 = out.eta.squaredNorm();
  return out;
}

double skl_residual(const GeometrySample& s) {
  const int n = s.n;
  double r = std::max(s.rs.rs20.max_abs(), s.rs.rs02.max_abs());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) r = std::max(r, std::abs(s.rs.rs11(i, j, k, l) - s.rs.rs11(k, j, i, l)));
  return r;
}

ClassificationFlags classify(const GeometrySample& s, double tol) {
  ClassificationFlags f;
  f.torsion_residual = s.T.max_abs();
  f.pluriclosed_residual = max_abs(s.ddbar_omega);
  double eta_max = 0.0;
  for (int i = 0; i < s.n; ++i) {
    Complex e{};
    for (int k = 0; k < s.n; ++k) e += s.T(k, k, i);
    eta_max = std::max(eta_max, std::abs(e));
  }
  f.balanced_residual = eta_max;
  f.chern_flat_residual = s.R.max_abs();
  f.bismut_flat_residual = std::max({s.rs.rs11.max_abs(), s.rs.rs20.max_abs(), s.rs.rs02.max_abs()});
  f.skl_residual = skl_residual(s);
  const ConstantHResult h = constant_H_test(symmetrize(s.R), tol);
  f.constant_H_residual = h.deviation;
  f.c_estimate = h.c;

  f.kahler = f.torsion_residual < tol;
  f.pluriclosed = f.pluriclosed_residual < tol;
  f.balanced = f.balanced_residual < tol;
  f.chern_flat = f.chern_flat_residual < tol;
  f.bismut_flat = f.bismut_flat_residual < tol;
  f.skl = f.skl_residual < tol;
  f.constant_H = h.flag;
  return f;
}

std::vector<std::pair<std::string, bool>> flag_list(const ClassificationFlags& f) {
  return {{"kahler", f.kahler},           {"pluriclosed", f.pluriclosed}, {"balanced", f.balanced},
          {"chern_flat", f.chern_flat},   {"bismut_flat", f.bismut_flat}, {"skl", f.skl},
          {"constant_H", f.constant_H}};
}

}  // namespace herm
