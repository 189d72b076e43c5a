#include "herm/catalog.hpp"

#include <map>

#include "herm/manifold_io.hpp"

namespace herm {

namespace {

// Shipped documents; data/catalog/ holds the same files.
const char* const kFlatTorus = R"json({
  "name": "flat_torus",
  "kind": "chart",
  "dimension": 2,
  "description": "Flat metric on C^2, descends to complex tori",
  "metric": [["1", "0"], ["0", "1"]],
  "sample_points": [[[0, 0], [0, 0]]],
  "sample_shell": [0, 1],
  "expected": {"kahler": true, "pluriclosed": true, "balanced": true, "chern_flat": true,
               "bismut_flat": true, "skl": true, "constant_H": true}
})json";

const char* const kFubiniStudy1 = R"json({
  "name": "fubini_study_1",
  "kind": "chart",
  "dimension": 1,
  "description": "Fubini-Study metric on CP^1 in an affine chart, H = 2",
  "metric": [["1/(1+abs2(z1))^2"]],
  "sample_points": [[[0, 0]], [[0.3, 0.1]]],
  "sample_shell": [0, 1.5],
  "expected": {"kahler": true, "pluriclosed": true, "balanced": true, "chern_flat": false,
               "skl": true, "constant_H": true}
})json";

const char* const kFubiniStudy2 = R"json({
  "name": "fubini_study_2",
  "kind": "chart",
  "dimension": 2,
  "description": "Fubini-Study metric on CP^2 in an affine chart, H = 2",
  "metric": [["1/(1+abs2(z1)+abs2(z2)) - abs2(z1)/(1+abs2(z1)+abs2(z2))^2",
              "-conj(z1)*z2/(1+abs2(z1)+abs2(z2))^2"],
             ["-conj(z2)*z1/(1+abs2(z1)+abs2(z2))^2",
              "1/(1+abs2(z1)+abs2(z2)) - abs2(z2)/(1+abs2(z1)+abs2(z2))^2"]],
  "sample_points": [[[0, 0], [0, 0]]],
  "sample_shell": [0, 1.5],
  "expected": {"kahler": true, "pluriclosed": true, "balanced": true, "chern_flat": false,
               "skl": true, "constant_H": true}
})json";

const char* const kComplexHyperbolic1 = R"json({
  "name": "complex_hyperbolic_1",
  "kind": "chart",
  "dimension": 1,
  "description": "Poincare metric on the unit disk, H = -2",
  "metric": [["1/(1-abs2(z1))^2"]],
  "exclude_where_zero": "1-abs2(z1)",
  "sample_points": [[[0, 0]]],
  "sample_shell": [0, 0.8],
  "expected": {"kahler": true, "pluriclosed": true, "balanced": true, "chern_flat": false,
               "skl": true, "constant_H": true}
})json";

const char* const kHopf = R"json({
  "name": "hopf",
  "kind": "chart",
  "dimension": 2,
  "description": "Hopf metric |z|^-2 on C^2 minus the origin, descends to the Hopf surface S^3 x S^1",
  "metric": [["1/(abs2(z1)+abs2(z2))", "0"], ["0", "1/(abs2(z1)+abs2(z2))"]],
  "exclude_where_zero": "abs2(z1)+abs2(z2)",
  "sample_points": [[[1, 0], [0, 0]]],
  "sample_shell": [0.5, 2],
  "expected": {"kahler": false, "pluriclosed": true, "balanced": false, "chern_flat": false,
               "bismut_flat": true, "skl": true, "constant_H": false}
})json";

// su(2) + R: x1 = a + i b with a central and b in su(2), x2 = c + i d with
// [b,c] = -d, [b,d] = c, [c,d] = -b. With h = I the metric is bi-invariant.
const char* const kSu2xR = R"json({
  "name": "su2xr",
  "kind": "lie",
  "dimension": 2,
  "description": "su(2) + R with bi-invariant metric and left-invariant complex structure (Hopf surface)",
  "C": [[[[0, 0], [0, 0]], [[0, 0], [0, 0]]],
        [[[0, 0], [-1, 0]], [[1, 0], [0, 0]]]],
  "P": [[[[0, 0], [0, 0]], [[0, 0], [1, 0]]],
        [[[0, 0], [0, 0]], [[-1, 0], [0, 0]]]],
  "h": [[[1, 0], [0, 0]], [[0, 0], [1, 0]]],
  "expected": {"kahler": false, "pluriclosed": true, "balanced": false, "chern_flat": false,
               "bismut_flat": true, "skl": true, "constant_H": false}
})json";

const char* const kIwasawa = R"json({
  "name": "iwasawa",
  "kind": "lie",
  "dimension": 3,
  "description": "Complex Heisenberg group, quotient is the Iwasawa manifold",
  "C": [[[[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]]],
        [[[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]]],
        [[[0, 0], [-1, 0], [0, 0]], [[1, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]]]],
  "P": [[[[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]]],
        [[[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]]],
        [[[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]], [[0, 0], [0, 0], [0, 0]]]],
  "h": [[[1, 0], [0, 0], [0, 0]], [[0, 0], [1, 0], [0, 0]], [[0, 0], [0, 0], [1, 0]]],
  "expected": {"kahler": false, "pluriclosed": false, "balanced": true, "chern_flat": true,
               "bismut_flat": false, "skl": false, "constant_H": true}
})json";

const std::map<std::string, nlohmann::json>& documents() {
  static const std::map<std::string, nlohmann::json> docs = [] {
    std::map<std::string, nlohmann::json> m;
    for (const char* src : {kFlatTorus, kFubiniStudy1, kFubiniStudy2, kComplexHyperbolic1, kHopf, kSu2xR, kIwasawa}) {
      nlohmann::json j = nlohmann::json::parse(src);
      m.emplace(j.at("name").get<std::string>(), std::move(j));
    }
    return m;
  }();
  return docs;
}

}  // namespace

std::vector<std::string> catalog_names() {
  return {"flat_torus", "fubini_study_1", "fubini_study_2", "complex_hyperbolic_1", "hopf", "su2xr", "iwasawa"};
}

const nlohmann::json& catalog_document(const std::string& name) {
  const auto& docs = documents();
  auto it = docs.find(name);
  if (it == docs.end()) throw InputError("", "unknown catalog entry '" + name + "'");
  return it->second;
}

HermitianManifold catalog_entry(const std::string& name) { return manifold_from_json(catalog_document(name)); }

}  // namespace herm
