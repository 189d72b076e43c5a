#pragma once

// Hermitian manifolds given either by a metric on a coordinate chart or by a
// Lie-Hermitian structure, and the pointwise GeometrySample both produce.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "herm/expr.hpp"
#include "herm/forms.hpp"
#include "herm/sample.hpp"

namespace herm {

inline constexpr int kMaxDimension = 4;

using Point = std::vector<Complex>;

/// g_{i jbar}(z) on an open set of C^n.
struct MetricChart {
  int n = 0;
  std::vector<std::vector<Expr>> metric;  // metric[i][j] = g_{i jbar}
  std::optional<Expr> exclude_where_zero;
  std::vector<Point> sample_points;
  /// Random points are drawn with |z| uniform in [shell_min, shell_max].
  double shell_min = 0.0;
  double shell_max = 1.0;
};

/// Left-invariant structure on a Lie group with frame x_1..x_n of (1,0)
/// vectors:
///   [x_i, x_j]    = sum_k C(k,i,j) x_k
///   [x_i, xbar_j] = sum_k ( P(k,i,j) x_k - conj(P(k,j,i)) xbar_k )
/// and constant metric h(i,j) = g(x_i, xbar_j).
struct LieHermitianStructure {
  int n = 0;
  Tensor C;
  Tensor P;
  CMatrix h;
};

/// Symbolic 2-jet of a chart metric and the exterior forms built from it.
/// Built once per chart; immutable afterwards.
struct ChartModel {
  explicit ChartModel(MetricChart chart);

  MetricChart chart;
  int n = 0;
  // d_a g, dbar_a g, d_b d_a g, dbar_b d_a g, each an n x n matrix of Expr
  std::vector<std::vector<std::vector<Expr>>> dg, dbg;
  std::vector<std::vector<std::vector<std::vector<Expr>>>> ddg, ddbg;

  ExprForm omega;           // sqrt(-1) sum g_{a bbar} dz^a ^ dzbar^b
  ExprForm ddbar_omega;     // sqrt(-1) d dbar omega
  ExprForm omega_pow;       // omega^{n-1}
  ExprForm d_omega_pow;     // d omega^{n-1}
  ExprForm ddbar_omega_pow; // d dbar omega^{n-1}
};

/// Coordinate-differential exterior derivatives on Expr-valued forms.
ExprForm partial(const ExprForm& f);
ExprForm partial_bar(const ExprForm& f);

class HermitianManifold {
 public:
  static HermitianManifold chart(std::string name, MetricChart chart);
  static HermitianManifold lie(std::string name, LieHermitianStructure lie);

  const std::string& name() const { return name_; }
  Backend backend() const { return lie_ ? Backend::Lie : Backend::Chart; }
  int dimension() const;

  const ChartModel& chart_model() const;
  const LieHermitianStructure& lie_structure() const;

  std::string description;
  /// Literature expectations keyed by flag name (kahler, pluriclosed, ...).
  std::vector<std::pair<std::string, bool>> expected_flags;

 private:
  std::string name_;
  std::shared_ptr<const ChartModel> chart_;
  std::shared_ptr<const LieHermitianStructure> lie_;
};

/// Complexified Jacobi identity over all triples from {x_i, xbar_j}.
struct JacobiReport {
  double residual = 0.0;
  std::vector<int> worst_triple;  // frame indices A,B,C in [0, 2n)
};
JacobiReport jacobi_residual(const LieHermitianStructure& lie);

/// Throws GeometryError when the point is invalid or the metric is not
/// positive definite there.
GeometrySample sample_chart(const ChartModel& model, const Point& point);
GeometrySample sample_lie(const LieHermitianStructure& lie);
GeometrySample sample(const HermitianManifold& m, const Point& point);

/// Rotates every tensorial field into e'_i = sum_a U(i,a) e_a.
GeometrySample change_frame(const GeometrySample& s, const CMatrix& U);

struct DdbarForms {
  ComplexForm ddbar_omega;  // sqrt(-1) d dbar omega in the unitary frame
  Complex q{};
};
DdbarForms ddbar_forms(const HermitianManifold& m, const Point& point);

/// Point validity for a chart: exclusion predicate non-zero, evaluation
/// regular, metric Hermitian and positive definite.
bool valid_chart_point(const ChartModel& model, const Point& point, std::string* why = nullptr);

/// Declared sample points first, then seeded random points by rejection
/// sampling (at most 1000 attempts per point). Lie manifolds are
/// homogeneous: every returned point is empty.
std::vector<Point> sample_points(const HermitianManifold& m, int count, std::uint64_t seed);

/// Exterior derivative of a form whose coefficients are constant in the
/// frame, by the Leibniz rule from dphi[A] = d(Phi_A).
ComplexForm d_frame_constant(const ComplexForm& f, const std::vector<ComplexForm>& dphi);

/// out(i0, i1, ..) = sum M0(i0,a0) M1(i1,a1) .. t(a0, a1, ..).
Tensor transform_axes(const Tensor& t, const std::vector<CMatrix>& m);

/// Brackets of the orthonormal Lie frame, [E_A, E_B] = sum_C out(C) E_C.
CVector lie_bracket(const Tensor& C, const Tensor& P, int A, int B);

/// Haar-random unitary matrix.
CMatrix random_unitary(int n, std::uint64_t seed);

}  // namespace herm
