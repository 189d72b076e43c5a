#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "herm/forms.hpp"
#include "herm/tensor.hpp"

namespace herm {

using CMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic>;
using CVector = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

enum class Backend { Chart, Lie };

/// Strominger curvature in every bidegree; Theta^s_{kl} is the curvature
/// 2-form of e_k along e_l.
///   rs11(i,j,k,l) = Theta^s_{kl}(e_i, ebar_j)   (R^s_{i jbar k lbar})
///   rs20(i,j,k,l) = Theta^s_{kl}(e_i, e_j)
///   rs02(i,j,k,l) = Theta^s_{kl}(ebar_i, ebar_j)
struct StromingerCurvature {
  Tensor rs11;
  Tensor rs20;
  Tensor rs02;
};

/// Pointwise first-order frame data in one unitary frame e_1..e_n, dual
/// coframe phi. Frame vectors are indexed A = 0..2n-1 with A < n meaning e_A
/// and A >= n meaning ebar_{A-n}.
struct GeometrySample {
  int n = 0;
  Backend backend = Backend::Chart;
  std::string point_id;
  std::vector<Complex> point;  // chart coordinates; empty on the Lie backend

  /// Chart: e_i = sum_a frame(i,a) d/dz_a. Lie: e_i = sum_a frame(i,a) x_a in
  /// terms of the input Lie frame.
  CMatrix frame;

  Tensor T;      // T(k,i,j)      = T^k_{ij}, antisymmetric in i,j
  Tensor theta;  // theta(i,j,A)  = theta_{ij}(E_A), with nabla e_i = sum_j theta_ij e_j
  Tensor dT;     // dT(k,i,j,A)   = E_A(T^k_{ij}), raw frame derivative
  Tensor R;      // R(i,j,k,l)    = R_{i jbar k lbar}
  StromingerCurvature rs;

  /// dPhi_A for the coframe, read off the brackets of the frame fields:
  /// dPhi_C(E_A, E_B) = -Phi_C([E_A, E_B]).
  std::vector<ComplexForm> dphi;

  ComplexForm ddbar_omega;  // sqrt(-1) d dbar omega, frame basis
  ComplexForm d_omega_pow;  // d (omega^{n-1}) holomorphic part, frame basis
  Complex q{};              // n sqrt(-1) ddbar(omega^{n-1}) = q omega^n

  /// Largest gap between dphi and the first structure equation
  /// dphi_i = -sum_j theta_ji ^ phi_j + tau_i. Zero exactly when theta is
  /// torsion-compatible: T has no (1,1) part and its (2,0) part is T.
  double structure_residual = 0.0;
  /// Largest (2,0)/(0,2) component of the Chern curvature form before it was
  /// projected to R (zero by construction on charts).
  double curvature_type_residual = 0.0;
};

}  // namespace herm
