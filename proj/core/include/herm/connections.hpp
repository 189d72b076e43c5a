#pragma once

// Chern and Strominger connection data in the unitary frame of a sample.

#include "herm/sample.hpp"

namespace herm {

/// Index of the conjugate frame vector: e_i <-> ebar_i.
inline int bar(int A, int n) { return A < n ? A + n : A - n; }

/// sum_A coeffs(i,j,A) Phi_A.
ComplexForm one_form(const Tensor& coeffs, int i, int j, int n);

/// Right side of the first structure equation,
/// -sum_j theta_ji ^ phi_j + tau_i, for i in [0, n).
std::vector<ComplexForm> structure_dphi(const Tensor& theta, const Tensor& T, int n);

struct ChernData {
  Tensor theta;  // theta(i,j,A)
  Tensor T;      // T(k,i,j)
  Tensor R;      // R(i,j,k,l)
  Tensor cov_T;  // cov_T(j,i,k,A) = T^j_{ik;A}, Chern covariant derivative
  Residual compatibility;  // theta_ij + conj(theta_ji)
  double structure = 0.0;  // see GeometrySample::structure_residual
};

ChernData chern(const GeometrySample& s);

/// T^j_{ik;A} = E_A(T^j_{ik}) - theta_im(E_A) T^j_{mk} - theta_km(E_A) T^j_{im}
///            + T^m_{ik} theta_mj(E_A), for the connection matrix `conn`.
Tensor covariant_T(const GeometrySample& s, const Tensor& conn);
Tensor chern_covariant_T(const GeometrySample& s);

struct StromingerData {
  Tensor gamma;    // gamma(i,j,A), theta^s - theta
  Tensor theta_s;  // theta^s(i,j,A)
  Tensor Ts;       // Ts(C,A,B) = Phi_C(T^s(E_A, E_B)), from theta^s and the brackets
  StromingerCurvature rs;
  Tensor cov_T;    // T^j_{ik|A}
  Residual skew;   // <T^s(x,y), z> + <T^s(x,z), y>
  Residual eq20;   // T^s against -T on (1,0)x(1,0) and the mixed formula on (1,0)x(0,1)
};

/// gamma_ij = sum_k ( T^j_{ik} phi_k - conj(T^i_{jk}) phibar_k ).
Tensor strominger_gamma(const Tensor& T);

/// Theta^s = dtheta^s - theta^s ^ theta^s, evaluated as
/// Theta + dgamma - theta ^ gamma - gamma ^ theta - gamma ^ gamma with Theta
/// built from R. Needs T, dT, theta, R and dphi of the sample.
StromingerCurvature strominger_curvature(const GeometrySample& s);

StromingerData strominger(const GeometrySample& s);

struct AdmissibleFrame {
  CMatrix U;         // e'_i = sum_a U(i,a) e_a
  double lambda = 0.0;
  CVector a;         // a_i = T'^i_{in}, a_n = 0
  GeometrySample rotated;
  double offdiag = 0.0;       // strictly off-diagonal norm of A' = (T'^j_{in})
  double eta_residual = 0.0;  // |eta' - (0,..,0,lambda)|
  double tn_residual = 0.0;   // max |T'^n_{**}|
  double rs_residual = 0.0;   // max |R^s'_{i jbar k nbar}|
  double sum_residual = 0.0;  // |sum_{i<n} a_i - lambda|
  bool schur_fallback = false;
};

/// Throws GeometryError("Kähler: η = 0") when |eta| <= tol.
AdmissibleFrame admissible_frame(const GeometrySample& s, double tol = 1e-8);

struct Theorem1Report {
  AdmissibleFrame frame;
  double rhat_nnnn = 0.0;
  double rs_nnnn = 0.0;
  double obstruction = 0.0;      // max |(conj a_k - conj a_i) T^j_{ik}|
  double a_sum = 0.0;            // sum_{i<n} a_i (real part)
  bool constant_H_possible = false;
  bool consistent = false;
  std::string summary;
};

Theorem1Report theorem1_trace(const GeometrySample& s, double tol = 1e-8);

}  // namespace herm
