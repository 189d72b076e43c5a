#pragma once

// Nelder-Mead search for constant holomorphic sectional curvature over
// parametric metric families.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "herm/geometry.hpp"
#include "herm/invariants.hpp"

namespace herm {

struct MetricFamily {
  enum class Kind { ConformalExponents, LieMetric };

  Kind kind = Kind::LieMetric;
  HermitianManifold base;
  int parameters = 0;
  std::vector<std::pair<double, double>> bounds;
  /// Conformal families: real functions theta_p; the metric is
  /// exp(sum_p b_p theta_p) g.
  std::vector<Expr> basis;
  std::vector<double> start;

  /// Lie families: h = L L* / det(L L*)^{1/n}, L lower triangular with
  /// diagonal exp(x_k) followed by the real and imaginary parts of the
  /// strictly lower entries, row by row.
  HermitianManifold instantiate(const std::vector<double>& params) const;
  bool in_bounds(const std::vector<double>& params) const;
};

/// Manifold document plus
///   "family": {"kind": "conformal-exponents" | "lie-metric", "parameters": p,
///              "bounds": [[lo, hi], ...], "basis": [expr, ...]?, "start": [..]?}
MetricFamily family_from_json(const nlohmann::json& doc);
MetricFamily load_family(const std::string& path);

struct SearchConfig {
  int points = 4;
  /// Unit directions per point used for the H range of the result; >= 2n.
  int directions = 0;
  std::uint64_t seed = 42;
  double weight = 1.0;  // pluriclosed penalty
  int iterations = 300;
  double tolerance = 1e-10;  // simplex diameter
  /// Where conjecture-relevant findings are written; empty disables writing
  /// (the result still carries the finding).
  std::string findings_dir = "findings";
};

/// Per-family state reused across evaluations: the sample points are fixed
/// once from the seed.
class DefectEvaluator {
 public:
  DefectEvaluator(const MetricFamily& family, const SearchConfig& cfg);
  /// Throws InputError when params leave the bounds.
  double operator()(const std::vector<double>& params) const;
  const std::vector<Point>& points() const { return points_; }

 private:
  const MetricFamily& family_;
  SearchConfig cfg_;
  std::vector<Point> points_;
};

double defect(const MetricFamily& family, const std::vector<double>& params, const SearchConfig& cfg);

struct SearchResult {
  std::string family;
  std::uint64_t seed = 0;
  std::vector<double> best_params;
  double best_defect = 0.0;
  double start_defect = 0.0;
  std::vector<double> trajectory;  // best-so-far defect after each iteration
  int evaluations = 0;
  ClassificationFlags flags;  // of the best metric, AND-ed over sample points
  double c_mean = 0.0;
  double h_min = 0.0, h_max = 0.0;
  bool finding = false;
  std::string finding_path;
  std::string verdict;
};

SearchResult minimize(const MetricFamily& family, const SearchConfig& cfg);

nlohmann::ordered_json result_to_json(const SearchResult& r);

}  // namespace herm
