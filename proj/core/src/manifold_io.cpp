#include "herm/manifold_io.hpp"

#include <fstream>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "herm/catalog.hpp"

namespace herm {

using nlohmann::json;

namespace {

std::string ptr(const std::string& base, const std::string& key) { return base + "/" + key; }
std::string ptr(const std::string& base, std::size_t k) { return base + "/" + std::to_string(k); }

const json& require(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.is_object()) throw InputError(where.empty() ? "/" : where, "expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw InputError(ptr(where, key), "missing required field");
  return *it;
}

const json& require_array(const json& j, std::size_t size, const std::string& where) {
  if (!j.is_array()) throw InputError(where, "expected an array");
  if (j.size() != size)
    throw InputError(where, "expected " + std::to_string(size) + " entries, found " + std::to_string(j.size()));
  return j;
}

std::string entry_name(int A, int n) {
  return A < n ? "e" + std::to_string(A + 1) : "ebar" + std::to_string(A - n + 1);
}

Tensor cube_from_json(const json& j, int n, const std::string& where) {
  Tensor t = Tensor::cube(3, n);
  require_array(j, static_cast<std::size_t>(n), where);
  for (int k = 0; k < n; ++k) {
    const std::string wk = ptr(where, static_cast<std::size_t>(k));
    require_array(j[static_cast<std::size_t>(k)], static_cast<std::size_t>(n), wk);
    for (int i = 0; i < n; ++i) {
      const std::string wi = ptr(wk, static_cast<std::size_t>(i));
      require_array(j[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)], static_cast<std::size_t>(n), wi);
      for (int l = 0; l < n; ++l)
        t(k, i, l) = complex_from_json(j[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(l)],
                                       ptr(wi, static_cast<std::size_t>(l)));
    }
  }
  return t;
}

void check_hermitian(const MetricChart& chart) {
  std::vector<Point> probes = chart.sample_points;
  std::mt19937_64 rng(0x5eed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(chart.shell_min, chart.shell_max);
  for (int k = 0; k < 20; ++k) {
    Point p(static_cast<std::size_t>(chart.n));
    double norm = 0.0;
    for (Complex& z : p) {
      z = Complex(normal(rng), normal(rng));
      norm += std::norm(z);
    }
    for (Complex& z : p) z *= radius(rng) / std::sqrt(norm);
    probes.push_back(p);
  }
  for (const Point& p : probes)
    for (int i = 0; i < chart.n; ++i)
      for (int j = i; j < chart.n; ++j) {
        Complex a, b;
        try {
          a = eval(chart.metric[i][j], p);
          b = eval(chart.metric[j][i], p);
        } catch (const EvalError&) {
          continue;
        }
        if (std::abs(a - std::conj(b)) > 1e-12 * std::max({1.0, std::abs(a), std::abs(b)}))
          throw InputError("/metric", "entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")/(" +
                                          std::to_string(j + 1) + "," + std::to_string(i + 1) +
                                          ") are not complex conjugates (Hermitian symmetry)");
      }
}

HermitianManifold chart_from_json(const json& doc, const std::string& name, int n) {
  MetricChart chart;
  chart.n = n;
  const json& metric = require_array(require(doc, "metric", ""), static_cast<std::size_t>(n), "/metric");
  chart.metric.assign(static_cast<std::size_t>(n), std::vector<Expr>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i) {
    const std::string wi = ptr("/metric", static_cast<std::size_t>(i));
    require_array(metric[static_cast<std::size_t>(i)], static_cast<std::size_t>(n), wi);
    for (int j = 0; j < n; ++j) {
      const std::string wj = ptr(wi, static_cast<std::size_t>(j));
      const json& e = metric[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
      if (!e.is_string()) throw InputError(wj, "expected an expression string");
      try {
        chart.metric[i][j] = parse(e.get<std::string>(), n);
      } catch (const ParseError& err) {
        throw InputError(wj, err.what());
      }
    }
  }
  if (auto it = doc.find("exclude_where_zero"); it != doc.end()) {
    if (!it->is_string()) throw InputError("/exclude_where_zero", "expected an expression string");
    try {
      chart.exclude_where_zero = parse(it->get<std::string>(), n);
    } catch (const ParseError& err) {
      throw InputError("/exclude_where_zero", err.what());
    }
  }
  if (auto it = doc.find("sample_shell"); it != doc.end()) {
    require_array(*it, 2, "/sample_shell");
    if (!(*it)[0].is_number() || !(*it)[1].is_number()) throw InputError("/sample_shell", "expected two numbers");
    chart.shell_min = (*it)[0].get<double>();
    chart.shell_max = (*it)[1].get<double>();
    if (chart.shell_min < 0 || chart.shell_max < chart.shell_min)
      throw InputError("/sample_shell", "expected 0 <= rmin <= rmax");
  }
  if (auto it = doc.find("sample_points"); it != doc.end()) {
    if (!it->is_array()) throw InputError("/sample_points", "expected an array of points");
    for (std::size_t k = 0; k < it->size(); ++k) {
      const std::string wk = ptr("/sample_points", k);
      require_array((*it)[k], static_cast<std::size_t>(n), wk);
      Point p;
      for (std::size_t a = 0; a < static_cast<std::size_t>(n); ++a) p.push_back(complex_from_json((*it)[k][a], ptr(wk, a)));
      chart.sample_points.push_back(std::move(p));
    }
  }
  check_hermitian(chart);

  HermitianManifold m = HermitianManifold::chart(name, chart);
  for (std::size_t k = 0; k < chart.sample_points.size(); ++k) {
    std::string why;
    if (!valid_chart_point(m.chart_model(), chart.sample_points[k], &why)) throw InputError(ptr("/sample_points", k), why);
  }
  return m;
}

HermitianManifold lie_from_json(const json& doc, const std::string& name, int n) {
  LieHermitianStructure lie;
  lie.n = n;
  lie.C = cube_from_json(require(doc, "C", ""), n, "/C");
  lie.P = cube_from_json(require(doc, "P", ""), n, "/P");
  const json& h = require_array(require(doc, "h", ""), static_cast<std::size_t>(n), "/h");
  lie.h = CMatrix(n, n);
  for (int i = 0; i < n; ++i) {
    const std::string wi = ptr("/h", static_cast<std::size_t>(i));
    require_array(h[static_cast<std::size_t>(i)], static_cast<std::size_t>(n), wi);
    for (int j = 0; j < n; ++j)
      lie.h(i, j) = complex_from_json(h[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], ptr(wi, static_cast<std::size_t>(j)));
  }

  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(lie.C(k, i, j) + lie.C(k, j, i)) > 1e-12)
          throw InputError("/C/" + std::to_string(k) + "/" + std::to_string(i) + "/" + std::to_string(j),
                           "structure constants must satisfy C[k][i][j] = -C[k][j][i]");
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (std::abs(lie.h(i, j) - std::conj(lie.h(j, i))) > 1e-12)
        throw InputError("/h/" + std::to_string(i) + "/" + std::to_string(j),
                         "h is not Hermitian: entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")/(" +
                             std::to_string(j + 1) + "," + std::to_string(i + 1) + ")");
  Eigen::SelfAdjointEigenSolver<CMatrix> es(lie.h, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().minCoeff() <= 1e-10) throw InputError("/h", "h is not positive definite");
  const JacobiReport jac = jacobi_residual(lie);
  if (jac.residual > 1e-12) {
    std::ostringstream msg;
    msg << "Jacobi identity violated (residual " << jac.residual << ", worst triple " << entry_name(jac.worst_triple[0], n)
        << ", " << entry_name(jac.worst_triple[1], n) << ", " << entry_name(jac.worst_triple[2], n) << ")";
    throw InputError("/C", msg.str());
  }
  return HermitianManifold::lie(name, std::move(lie));
}

}  // namespace

Complex complex_from_json(const json& j, const std::string& where) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
    return {j[0].get<double>(), j[1].get<double>()};
  throw InputError(where, "expected a complex number [re, im]");
}

json complex_to_json(Complex z) { return json::array({z.real(), z.imag()}); }

HermitianManifold manifold_from_json(const json& doc) {
  const json& name = require(doc, "name", "");
  if (!name.is_string()) throw InputError("/name", "expected a string");
  const json& kind = require(doc, "kind", "");
  if (!kind.is_string() || (kind != "chart" && kind != "lie")) throw InputError("/kind", "expected \"chart\" or \"lie\"");
  const json& dim = require(doc, "dimension", "");
  if (!dim.is_number_integer()) throw InputError("/dimension", "expected an integer");
  const int n = dim.get<int>();
  if (n < 1 || n > kMaxDimension)
    throw InputError("/dimension", "dimension must be between 1 and " + std::to_string(kMaxDimension));

  HermitianManifold m;
  try {
    m = kind == "chart" ? chart_from_json(doc, name.get<std::string>(), n) : lie_from_json(doc, name.get<std::string>(), n);
  } catch (const GeometryError& e) {
    throw InputError("", e.what());
  }
  if (auto it = doc.find("description"); it != doc.end() && it->is_string()) m.description = it->get<std::string>();
  if (auto it = doc.find("expected"); it != doc.end()) {
    if (!it->is_object()) throw InputError("/expected", "expected an object of flags");
    for (const auto& [key, value] : it->items()) {
      if (!value.is_boolean()) throw InputError("/expected/" + key, "expected a boolean");
      m.expected_flags.emplace_back(key, value.get<bool>());
    }
  }
  return m;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("", "cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw InputError("", path + ": invalid JSON at byte " + std::to_string(e.byte));
  }
}

HermitianManifold load_manifold(const std::string& src) {
  constexpr std::string_view prefix = "catalog:";
  if (src.rfind(prefix, 0) == 0) return catalog_entry(src.substr(prefix.size()));
  return manifold_from_json(read_json_file(src));
}

}  // namespace herm
