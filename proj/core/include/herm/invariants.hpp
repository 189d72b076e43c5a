#pragma once

// Scalar and (1,1)-form invariants of a sample and the classification flags.

#include <string>
#include <vector>

#include "herm/sample.hpp"

namespace herm {

/// R_{X Xbar X Xbar} / |X|^4. Throws GeometryError when |X| <= 1e-12.
double holo_sect_curv(const Tensor& R, const CVector& X, double* imag_residual = nullptr);

/// Average of R over the Kähler-symmetry orbit of its index pairs.
Tensor symmetrize(const Tensor& R);

/// (c/2)(delta_ij delta_kl + delta_il delta_kj).
Tensor constant_H_pattern(int n, double c);

/// Best constant for R^ against the constant-H pattern in Frobenius norm,
/// (s + s^)/(n(n+1)) written in terms of R^. Equals R^_{1111} whenever H is
/// constant and does not depend on the frame.
double fitted_c(const Tensor& rhat);

struct ConstantHResult {
  bool flag = false;
  double c = 0.0;
  double deviation = 0.0;  // max |R^ - pattern(c)|
  std::vector<int> worst;
};
ConstantHResult constant_H_test(const Tensor& rhat, double tol);

struct RicciScalars {
  CMatrix rho1, rho2, rho3;
  Complex s{}, s_hat{};
};
RicciScalars ricci_and_scalars(const Tensor& R);

struct TorsionInvariants {
  CVector eta;         // eta_i = sum_k T^k_{ki}
  CMatrix eta_cov;     // eta_cov(i,A) = eta_{i;A}, A in [0, 2n)
  CMatrix dbar_eta;    // (dbar eta)(e_i, ebar_j) from frame derivatives and dphi
  Complex chi{};       // sum_i eta_{i, ibar}
  CMatrix xi;          // xi_{i jbar} = sum_r T^j_{ir, rbar}
  CMatrix sigma;       // sum_{r,s} T^r_{is} conj(T^r_{js})
  double T2 = 0.0;     // sum over ordered index triples
  double eta2 = 0.0;
};
TorsionInvariants torsion_invariants(const GeometrySample& s);

/// max |Rs20|, |Rs02| and max |Rs11_{i jbar k lbar} - Rs11_{k jbar i lbar}|.
double skl_residual(const GeometrySample& s);

struct ClassificationFlags {
  bool kahler = false;
  bool pluriclosed = false;
  bool balanced = false;
  bool chern_flat = false;
  bool bismut_flat = false;
  bool skl = false;
  bool constant_H = false;
  double c_estimate = 0.0;

  double torsion_residual = 0.0;
  double pluriclosed_residual = 0.0;
  double balanced_residual = 0.0;
  double chern_flat_residual = 0.0;
  double bismut_flat_residual = 0.0;
  double skl_residual = 0.0;
  double constant_H_residual = 0.0;
};
ClassificationFlags classify(const GeometrySample& s, double tol = 1e-8);

/// Flag names in a fixed order, paired with values.
std::vector<std::pair<std::string, bool>> flag_list(const ClassificationFlags& f);

}  // namespace herm
