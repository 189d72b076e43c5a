#pragma once

// Identity checks evaluated as residuals at sample points, gated on the
// hypotheses each identity needs.

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "herm/geometry.hpp"
#include "herm/invariants.hpp"

namespace herm {

enum class Gate { None, Pluriclosed, PluriclosedConstantH, ConstantH, Skl, SklNonKahler };
enum class Status { Pass, Fail, Skipped };

std::string gate_name(Gate g);
std::string status_name(Status s);

struct IdentityCheck {
  std::string id;
  Gate gate = Gate::None;
  Status status = Status::Skipped;
  double residual = 0.0;
  std::vector<int> worst_indices;  // point index first, then tensor indices
  int points_evaluated = 0;
  std::string note;
};

struct PointSummary {
  std::string id;
  Point point;
  ClassificationFlags flags;
  double s = 0.0, s_hat = 0.0, chi = 0.0, T2 = 0.0, eta2 = 0.0, q = 0.0;
};

struct IdentityReport {
  std::string manifold;
  Backend backend = Backend::Chart;
  double tolerance = 1e-8;
  std::uint64_t seed = 0;
  std::vector<PointSummary> points;
  std::vector<IdentityCheck> checks;
  bool ok() const;
  const IdentityCheck& check(const std::string& id) const;
};

struct SuiteOptions {
  double tol = 1e-8;
  std::uint64_t seed = 42;
  /// Random unitary frames per point for the frame-independence meta-check.
  int rotations = 1;
  /// 0 = one worker per hardware thread.
  unsigned threads = 0;
};

/// Every check id in report order.
const std::vector<std::string>& check_ids();
Gate check_gate(const std::string& id);

IdentityReport run_suite(const HermitianManifold& m, const std::vector<Point>& points, const SuiteOptions& opt = {});

/// Throws Error for an unknown id.
IdentityCheck check_single(const HermitianManifold& m, const Point& point, const std::string& id, double tol = 1e-8);

nlohmann::ordered_json report_to_json(const IdentityReport& r);

}  // namespace herm
