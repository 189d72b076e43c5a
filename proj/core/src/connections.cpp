#include "herm/connections.hpp"

#include <algorithm>
#include <numeric>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "herm/geometry.hpp"
#include "herm/invariants.hpp"

namespace herm {

using Mask = ComplexForm::Mask;

ComplexForm one_form(const Tensor& coeffs, int i, int j, int n) {
  ComplexForm f(n);
  for (int A = 0; A < 2 * n; ++A) f[Mask{1} << A] = coeffs(i, j, A);
  return f;
}

std::vector<ComplexForm> structure_dphi(const Tensor& theta, const Tensor& T, int n) {
  std::vector<ComplexForm> out(static_cast<std::size_t>(n), ComplexForm(n));
  for (int i = 0; i < n; ++i) {
    ComplexForm& f = out[static_cast<std::size_t>(i)];
    for (int j = 0; j < n; ++j) f -= wedge(one_form(theta, j, i, n), ComplexForm::basis(n, j));
    for (int j = 0; j < n; ++j)
      for (int k = j + 1; k < n; ++k) f[(Mask{1} << j) | (Mask{1} << k)] += T(i, j, k);
  }
  return out;
}

Tensor covariant_T(const GeometrySample& s, const Tensor& conn) {
  const int n = s.n;
  Tensor out({n, n, n, 2 * n});
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        for (int A = 0; A < 2 * n; ++A) {
          Complex v = s.dT(j, i, k, A);
          for (int m = 0; m < n; ++m)
            v += -conn(i, m, A) * s.T(j, m, k) - conn(k, m, A) * s.T(j, i, m) + s.T(m, i, k) * conn(m, j, A);
          out(j, i, k, A) = v;
        }
  return out;
}

Tensor chern_covariant_T(const GeometrySample& s) { return covariant_T(s, s.theta); }

ChernData chern(const GeometrySample& s) {
  const int n = s.n;
  ChernData cd;
  cd.theta = s.theta;
  cd.T = s.T;
  cd.R = s.R;
  cd.cov_T = chern_covariant_T(s);
  Tensor compat({n, n, 2 * n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int A = 0; A < 2 * n; ++A) compat(i, j, A) = s.theta(i, j, A) + std::conj(s.theta(j, i, bar(A, n)));
  cd.compatibility = max_residual(compat);
  cd.structure = s.structure_residual;
  return cd;
}

Tensor strominger_gamma(const Tensor& T) {
  const int n = T.dims()[0];
  Tensor g({n, n, 2 * n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) {
        g(i, j, l) = T(j, i, l);
        g(i, j, n + l) = -std::conj(T(i, j, l));
      }
  return g;
}

namespace {

Tensor theta_s_of(const GeometrySample& s, const Tensor& gamma) {
  Tensor t = s.theta;
  t += gamma;
  return t;
}

// Phi_C(T^s(E_A, E_B)) = Phi_C(nabla^s_A E_B) - Phi_C(nabla^s_B E_A) + dPhi_C(E_A, E_B)
Tensor strominger_torsion(const GeometrySample& s, const Tensor& ts) {
  const int n = s.n, N = 2 * n;
  auto nabla = [&](int A, int B, int Cc) -> Complex {
    if (B < n) return Cc < n ? ts(B, Cc, A) : Complex{};
    return Cc >= n ? std::conj(ts(B - n, Cc - n, bar(A, n))) : Complex{};
  };
  Tensor out({N, N, N});
  for (int Cc = 0; Cc < N; ++Cc)
    for (int A = 0; A < N; ++A)
      for (int B = 0; B < N; ++B)
        out(Cc, A, B) = nabla(A, B, Cc) - nabla(B, A, Cc) + s.dphi[static_cast<std::size_t>(Cc)].value({A, B});
  return out;
}

}  // namespace

StromingerCurvature strominger_curvature(const GeometrySample& s) {
  const int n = s.n;
  const Tensor gamma = strominger_gamma(s.T);

  // E_B(gamma_ij(E_A))
  auto dgamma_coef = [&](int i, int j, int A, int B) -> Complex {
    if (A < n) return s.dT(j, i, A, B);
    return -std::conj(s.dT(i, j, A - n, bar(B, n)));
  };

  std::vector<std::vector<ComplexForm>> th(n, std::vector<ComplexForm>(n)), ga(n, std::vector<ComplexForm>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      th[i][j] = one_form(s.theta, i, j, n);
      ga[i][j] = one_form(gamma, i, j, n);
    }

  StromingerCurvature rs{Tensor::cube(4, n), Tensor::cube(4, n), Tensor::cube(4, n)};
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      ComplexForm F(n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) F[(Mask{1} << a) | (Mask{1} << (n + b))] += s.R(a, b, k, l);
      for (int A = 0; A < 2 * n; ++A) {
        ComplexForm dc(n);
        for (int B = 0; B < 2 * n; ++B) dc[Mask{1} << B] = dgamma_coef(k, l, A, B);
        F += wedge(dc, ComplexForm::basis(n, A));
        F += gamma(k, l, A) * s.dphi[static_cast<std::size_t>(A)];
      }
      for (int r = 0; r < n; ++r) {
        F -= wedge(th[k][r], ga[r][l]);
        F -= wedge(ga[k][r], th[r][l]);
        F -= wedge(ga[k][r], ga[r][l]);
      }
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          rs.rs11(i, j, k, l) = F.value({i, n + j});
          rs.rs20(i, j, k, l) = F.value({i, j});
          rs.rs02(i, j, k, l) = F.value({n + i, n + j});
        }
    }
  return rs;
}

StromingerData strominger(const GeometrySample& s) {
  const int n = s.n, N = 2 * n;
  StromingerData sd;
  sd.gamma = strominger_gamma(s.T);
  sd.theta_s = theta_s_of(s, sd.gamma);
  sd.Ts = strominger_torsion(s, sd.theta_s);
  sd.rs = s.rs;
  sd.cov_T = covariant_T(s, sd.theta_s);

  // <V, E_C> picks the E_{bar C} component of V
  Tensor skew({N, N, N});
  for (int A = 0; A < N; ++A)
    for (int B = 0; B < N; ++B)
      for (int Cc = 0; Cc < N; ++Cc) skew(A, B, Cc) = sd.Ts(bar(Cc, n), A, B) + sd.Ts(bar(B, n), A, Cc);
  sd.skew = max_residual(skew);

  Tensor eq20({N, n, n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        // T^s(e_i, e_j) = -sum_k T^k_{ij} e_k
        eq20(k, i, j) += std::abs(sd.Ts(k, i, j) + s.T(k, i, j)) + std::abs(sd.Ts(n + k, i, j));
        // T^s(e_i, ebar_j) = sum_k ( T^j_{ik} ebar_k - conj(T^i_{jk}) e_k )
        eq20(n + k, i, j) = std::abs(sd.Ts(n + k, i, n + j) - s.T(j, i, k)) +
                            std::abs(sd.Ts(k, i, n + j) + std::conj(s.T(i, j, k)));
      }
  sd.eq20 = max_residual(eq20);
  return sd;
}

// ---------------------------------------------------------------- admissible frames

AdmissibleFrame admissible_frame(const GeometrySample& s, double tol) {
  const int n = s.n;
  CVector eta = CVector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) eta(i) += s.T(k, k, i);
  const double lambda = eta.norm();
  if (lambda <= tol) throw GeometryError("Kähler: η = 0");
  if (skl_residual(s) >= tol) throw GeometryError("not SKL: Strominger curvature lacks the Kähler symmetries");

  // rows of U orthonormal with the last one conj(eta)/|eta|, so eta' = (0,..,0,lambda)
  const CVector v = eta.conjugate() / lambda;
  CMatrix M = CMatrix::Identity(n, n);
  M.col(0) = v;
  Eigen::HouseholderQR<CMatrix> qr(M);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
  const Complex phase = Q.col(0).dot(v);  // conj(q0) . v
  Q.col(0) *= phase / std::abs(phase);
  CMatrix U1(n, n);
  U1.row(n - 1) = Q.col(0).transpose();
  for (int i = 0; i + 1 < n; ++i) U1.row(i) = Q.col(i + 1).transpose();
  const GeometrySample s1 = change_frame(s, U1);

  AdmissibleFrame out;
  out.lambda = lambda;
  CMatrix V = CMatrix::Identity(n, n);
  if (n > 1) {
    const int m = n - 1;
    CMatrix A(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) A(i, j) = s1.T(j, i, n - 1);
    Eigen::ComplexSchur<CMatrix> schur(A);
    CMatrix Qs = schur.matrixU();
    const CMatrix S = schur.matrixT();
    const double off = (S - CMatrix(S.diagonal().asDiagonal())).norm();
    if (off <= tol * std::max(1.0, A.norm())) {
      // normal: Schur vectors are eigenvectors and may be reordered freely
      std::vector<int> order(static_cast<std::size_t>(m));
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int x, int y) {
        const Complex a = S(x, x), b = S(y, y);
        if (a.real() != b.real()) return a.real() > b.real();
        return a.imag() > b.imag();
      });
      CMatrix sorted(m, m);
      for (int c = 0; c < m; ++c) sorted.col(c) = Qs.col(order[static_cast<std::size_t>(c)]);
      Qs = sorted;
    } else {
      out.schur_fallback = true;
    }
    V.topLeftCorner(m, m) = Qs.adjoint();
  }
  out.U = V * U1;
  out.rotated = change_frame(s, out.U);
  const GeometrySample& r = out.rotated;

  out.a = CVector::Zero(n);
  for (int i = 0; i < n; ++i) out.a(i) = r.T(i, i, n - 1);
  double off2 = 0.0;
  Complex sum{};
  for (int i = 0; i + 1 < n; ++i) {
    sum += out.a(i);
    for (int j = 0; j + 1 < n; ++j)
      if (i != j) off2 += std::norm(r.T(j, i, n - 1));
  }
  out.offdiag = std::sqrt(off2);
  out.sum_residual = std::abs(sum - lambda);

  CVector eta_r = CVector::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) eta_r(i) += r.T(k, k, i);
  CVector target = CVector::Zero(n);
  target(n - 1) = lambda;
  out.eta_residual = (eta_r - target).cwiseAbs().maxCoeff();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      out.tn_residual = std::max(out.tn_residual, std::abs(r.T(n - 1, i, j)));
      for (int k = 0; k < n; ++k) out.rs_residual = std::max(out.rs_residual, std::abs(r.rs.rs11(i, j, k, n - 1)));
    }
  return out;
}

Theorem1Report theorem1_trace(const GeometrySample& s, double tol) {
  Theorem1Report rep;
  rep.frame = admissible_frame(s, tol);
  const GeometrySample& r = rep.frame.rotated;
  const int n = s.n, N = n - 1;
  const Tensor rhat = symmetrize(r.R);
  rep.rhat_nnnn = rhat(N, N, N, N).real();
  rep.rs_nnnn = r.rs.rs11(N, N, N, N).real();
  const CVector& a = rep.frame.a;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        rep.obstruction = std::max(rep.obstruction, std::abs((std::conj(a(k)) - std::conj(a(i))) * r.T(j, i, k)));
  for (int i = 0; i < N; ++i) rep.a_sum += a(i).real();

  const ConstantHResult h = constant_H_test(symmetrize(s.R), tol);
  rep.constant_H_possible = false;
  const bool trace_agrees = std::abs(rep.rhat_nnnn - rep.rs_nnnn) < tol;
  rep.consistent = !h.flag && rep.a_sum > tol && trace_agrees;
  rep.summary = rep.consistent
                    ? "non-Kähler SKL point: sum of a_i = lambda > 0, H is not constant"
                    : (h.flag ? "constant H on a non-Kähler SKL point contradicts the admissible-frame argument"
                              : "admissible-frame trace identities not satisfied");
  return rep;
}

}  // namespace herm
