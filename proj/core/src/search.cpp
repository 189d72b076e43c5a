#include "herm/search.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>

#include "herm/manifold_io.hpp"

namespace herm {

using nlohmann::json;

HermitianManifold MetricFamily::instantiate(const std::vector<double>& params) const {
  if (!in_bounds(params)) throw InputError("/family/bounds", "parameters outside the family bounds");
  const int n = base.dimension();
  if (kind == Kind::LieMetric) {
    LieHermitianStructure lie = base.lie_structure();
    CMatrix L = CMatrix::Zero(n, n);
    std::size_t k = 0;
    for (int i = 0; i < n; ++i) L(i, i) = std::exp(params[k++]);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) {
        L(i, j) = Complex(params[k], params[k + 1]);
        k += 2;
      }
    CMatrix h = L * L.adjoint();
    // fixed volume, otherwise scaling alone drives the curvature to zero
    const double det = h.determinant().real();
    lie.h = h / std::pow(det, 1.0 / n);
    return HermitianManifold::lie(base.name(), std::move(lie));
  }
  MetricChart chart = base.chart_model().chart;
  Expr phase = Expr::constant(0.0);
  for (std::size_t p = 0; p < basis.size(); ++p) phase = phase + Expr::constant(params[p]) * basis[p];
  const Expr factor = exp(phase);
  for (auto& row : chart.metric)
    for (Expr& g : row) g = factor * g;
  return HermitianManifold::chart(base.name(), std::move(chart));
}

bool MetricFamily::in_bounds(const std::vector<double>& params) const {
  if (static_cast<int>(params.size()) != parameters) return false;
  for (std::size_t k = 0; k < params.size(); ++k)
    if (!(params[k] >= bounds[k].first && params[k] <= bounds[k].second)) return false;
  return true;
}

MetricFamily family_from_json(const json& doc) {
  MetricFamily f;
  if (!doc.is_object() || !doc.contains("family")) throw InputError("/family", "missing required field");
  const json& fam = doc.at("family");
  if (!fam.is_object()) throw InputError("/family", "expected an object");
  json base_doc = doc;
  base_doc.erase("family");
  f.base = manifold_from_json(base_doc);
  const int n = f.base.dimension();

  if (!fam.contains("kind") || !fam["kind"].is_string()) throw InputError("/family/kind", "expected a string");
  const std::string kind = fam["kind"].get<std::string>();
  if (kind == "lie-metric") {
    f.kind = MetricFamily::Kind::LieMetric;
    if (f.base.backend() != Backend::Lie) throw InputError("/family/kind", "lie-metric needs a Lie manifold");
  } else if (kind == "conformal-exponents") {
    f.kind = MetricFamily::Kind::ConformalExponents;
    if (f.base.backend() != Backend::Chart) throw InputError("/family/kind", "conformal-exponents needs a chart manifold");
  } else {
    throw InputError("/family/kind", "expected \"conformal-exponents\" or \"lie-metric\"");
  }

  if (!fam.contains("parameters") || !fam["parameters"].is_number_integer())
    throw InputError("/family/parameters", "expected an integer");
  f.parameters = fam["parameters"].get<int>();
  if (f.parameters < 1 || f.parameters > 20) throw InputError("/family/parameters", "expected 1..20 parameters");
  if (f.kind == MetricFamily::Kind::LieMetric && f.parameters != n * n)
    throw InputError("/family/parameters", "lie-metric on dimension " + std::to_string(n) + " has " +
                                               std::to_string(n * n) + " parameters");

  if (!fam.contains("bounds") || !fam["bounds"].is_array() || static_cast<int>(fam["bounds"].size()) != f.parameters)
    throw InputError("/family/bounds", "expected one [lo, hi] pair per parameter");
  for (std::size_t k = 0; k < fam["bounds"].size(); ++k) {
    const json& b = fam["bounds"][k];
    const std::string where = "/family/bounds/" + std::to_string(k);
    if (!b.is_array() || b.size() != 2 || !b[0].is_number() || !b[1].is_number()) throw InputError(where, "expected [lo, hi]");
    if (b[0].get<double>() > b[1].get<double>()) throw InputError(where, "lo > hi");
    f.bounds.emplace_back(b[0].get<double>(), b[1].get<double>());
  }

  if (f.kind == MetricFamily::Kind::ConformalExponents) {
    if (fam.contains("basis")) {
      const json& b = fam["basis"];
      if (!b.is_array() || static_cast<int>(b.size()) != f.parameters)
        throw InputError("/family/basis", "expected one expression per parameter");
      for (std::size_t k = 0; k < b.size(); ++k) {
        const std::string where = "/family/basis/" + std::to_string(k);
        if (!b[k].is_string()) throw InputError(where, "expected an expression string");
        try {
          f.basis.push_back(parse(b[k].get<std::string>(), n));
        } catch (const ParseError& e) {
          throw InputError(where, e.what());
        }
      }
    } else {
      Expr r2 = Expr::constant(0.0);
      for (int a = 1; a <= n; ++a) r2 = r2 + abs2(Expr::var(a));
      for (int p = 1; p <= f.parameters; ++p) f.basis.push_back(pow(r2, p));
    }
  }

  if (fam.contains("start")) {
    const json& s = fam["start"];
    if (!s.is_array() || static_cast<int>(s.size()) != f.parameters)
      throw InputError("/family/start", "expected one number per parameter");
    for (const json& v : s) {
      if (!v.is_number()) throw InputError("/family/start", "expected numbers");
      f.start.push_back(v.get<double>());
    }
  } else {
    for (const auto& [lo, hi] : f.bounds) f.start.push_back(std::clamp(0.0, lo, hi));
  }
  if (!f.in_bounds(f.start)) throw InputError("/family/start", "start lies outside the bounds");
  return f;
}

MetricFamily load_family(const std::string& path) { return family_from_json(read_json_file(path)); }

namespace {

struct PointData {
  Tensor rhat;
  double c = 0.0;
  double pluriclosed = 0.0;
};

PointData point_data(const HermitianManifold& m, const Point& p) {
  const GeometrySample s = sample(m, p);
  PointData d;
  d.rhat = symmetrize(s.R);
  d.c = fitted_c(d.rhat);
  d.pluriclosed = max_abs(s.ddbar_omega);
  return d;
}

double defect_of(const std::vector<PointData>& pts, double weight) {
  double c = 0.0;
  for (const PointData& d : pts) c += d.c;
  c /= static_cast<double>(pts.size());
  double dev = 0.0, plu = 0.0;
  for (const PointData& d : pts) {
    dev = std::max(dev, std::sqrt((d.rhat - constant_H_pattern(d.rhat.dims()[0], c)).norm2()));
    plu = std::max(plu, d.pluriclosed);
  }
  return dev + weight * plu;
}

}  // namespace

DefectEvaluator::DefectEvaluator(const MetricFamily& family, const SearchConfig& cfg) : family_(family), cfg_(cfg) {
  if (cfg.weight < 0) throw InputError("", "penalty weight must be non-negative");
  // a conformal factor never vanishes, so valid base points stay valid
  points_ = sample_points(family.base, cfg.points, cfg.seed);
}

double DefectEvaluator::operator()(const std::vector<double>& params) const {
  const HermitianManifold m = family_.instantiate(params);
  std::vector<PointData> pts;
  for (const Point& p : points_) pts.push_back(point_data(m, p));
  return defect_of(pts, cfg_.weight);
}

double defect(const MetricFamily& family, const std::vector<double>& params, const SearchConfig& cfg) {
  return DefectEvaluator(family, cfg)(params);
}

SearchResult minimize(const MetricFamily& family, const SearchConfig& cfg) {
  const DefectEvaluator f(family, cfg);
  const int p = family.parameters;
  SearchResult res;
  res.family = family.base.name();
  res.seed = cfg.seed;

  std::mt19937_64 rng(cfg.seed);
  std::normal_distribution<double> normal;
  std::uniform_int_distribution<int> coin(0, 1);

  auto clamp = [&](std::vector<double> x) {
    for (int k = 0; k < p; ++k) x[k] = std::clamp(x[k], family.bounds[k].first, family.bounds[k].second);
    return x;
  };
  auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    try {
      return f(x);
    } catch (const GeometryError&) {
      return 1e6;
    }
  };

  res.start_defect = eval(family.start);

  // seeded initial simplex around a jittered start
  std::vector<double> x0 = family.start;
  for (int k = 0; k < p; ++k) x0[k] += 0.02 * (family.bounds[k].second - family.bounds[k].first) * normal(rng);
  x0 = clamp(x0);
  std::vector<std::vector<double>> simplex{x0};
  for (int k = 0; k < p; ++k) {
    std::vector<double> v = x0;
    const double step = 0.1 * (family.bounds[k].second - family.bounds[k].first);
    v[k] += coin(rng) ? step : -step;
    v = clamp(v);
    if (v[k] == x0[k]) v[k] = std::clamp(x0[k] - step, family.bounds[k].first, family.bounds[k].second);
    simplex.push_back(v);
  }
  std::vector<double> fv;
  for (const auto& v : simplex) fv.push_back(eval(v));

  std::vector<double> best = family.start;
  double best_f = res.start_defect;
  auto note_best = [&](const std::vector<double>& x, double fx) {
    if (fx < best_f) {
      best_f = fx;
      best = x;
    }
  };
  for (std::size_t k = 0; k < simplex.size(); ++k) note_best(simplex[k], fv[k]);

  std::vector<int> order(static_cast<std::size_t>(p + 1));
  for (int it = 0; it < cfg.iterations; ++it) {
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return fv[a] < fv[b]; });
    const int lo = order.front(), hi = order.back(), second = order[static_cast<std::size_t>(p - 1)];

    double diam = 0.0;
    for (const auto& v : simplex) {
      double d = 0.0;
      for (int k = 0; k < p; ++k) d = std::max(d, std::abs(v[k] - simplex[lo][k]));
      diam = std::max(diam, d);
    }
    if (diam < cfg.tolerance) break;

    std::vector<double> centroid(static_cast<std::size_t>(p), 0.0);
    for (int v = 0; v <= p; ++v)
      if (v != hi)
        for (int k = 0; k < p; ++k) centroid[k] += simplex[v][k] / p;
    auto along = [&](double t) {
      std::vector<double> x(static_cast<std::size_t>(p));
      for (int k = 0; k < p; ++k) x[k] = centroid[k] + t * (simplex[hi][k] - centroid[k]);
      return clamp(x);
    };

    const std::vector<double> xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fv[lo]) {
      const std::vector<double> xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[hi] = xe;
        fv[hi] = fe;
      } else {
        simplex[hi] = xr;
        fv[hi] = fr;
      }
    } else if (fr < fv[second]) {
      simplex[hi] = xr;
      fv[hi] = fr;
    } else {
      const bool outside = fr < fv[hi];
      const std::vector<double> xc = along(outside ? -0.5 : 0.5);
      const double fc = eval(xc);
      if (fc < (outside ? fr : fv[hi])) {
        simplex[hi] = xc;
        fv[hi] = fc;
      } else {
        for (int v = 0; v <= p; ++v) {
          if (v == lo) continue;
          for (int k = 0; k < p; ++k) simplex[v][k] = simplex[lo][k] + 0.5 * (simplex[v][k] - simplex[lo][k]);
          fv[v] = eval(simplex[v]);
        }
      }
    }
    for (int v = 0; v <= p; ++v) note_best(simplex[v], fv[v]);
    res.trajectory.push_back(best_f);
  }

  res.best_params = best;
  res.best_defect = best_f;

  // classify the best metric at every sample point
  const HermitianManifold m = family.instantiate(best);
  const int n = m.dimension();
  const int dirs = std::max(cfg.directions, 2 * n);
  std::mt19937_64 drng(cfg.seed ^ 0xd1ec7105ULL);
  bool first = true;
  double c_sum = 0.0;
  res.h_min = std::numeric_limits<double>::infinity();
  res.h_max = -std::numeric_limits<double>::infinity();
  for (const Point& pt : f.points()) {
    const GeometrySample s = sample(m, pt);
    const ClassificationFlags fl = classify(s);
    c_sum += fl.c_estimate;
    for (int d = 0; d < dirs; ++d) {
      CVector X(n);
      for (int a = 0; a < n; ++a) X(a) = Complex(normal(drng), normal(drng));
      const double h = holo_sect_curv(s.R, X);
      res.h_min = std::min(res.h_min, h);
      res.h_max = std::max(res.h_max, h);
    }
    if (first) {
      res.flags = fl;
      first = false;
      continue;
    }
    res.flags.kahler = res.flags.kahler && fl.kahler;
    res.flags.pluriclosed = res.flags.pluriclosed && fl.pluriclosed;
    res.flags.balanced = res.flags.balanced && fl.balanced;
    res.flags.chern_flat = res.flags.chern_flat && fl.chern_flat;
    res.flags.bismut_flat = res.flags.bismut_flat && fl.bismut_flat;
    res.flags.skl = res.flags.skl && fl.skl;
    res.flags.constant_H = res.flags.constant_H && fl.constant_H;
  }
  res.c_mean = c_sum / static_cast<double>(f.points().size());
  res.flags.c_estimate = res.c_mean;

  // was the starting metric a non-Kähler SKL one?
  bool start_skl = true, start_kahler = true;
  {
    const HermitianManifold m0 = family.instantiate(family.start);
    for (const Point& pt : f.points()) {
      const ClassificationFlags fl = classify(sample(m0, pt));
      start_skl = start_skl && fl.skl;
      start_kahler = start_kahler && fl.kahler;
    }
  }

  std::ostringstream v;
  if (res.best_defect < 1e-6) {
    if (res.flags.kahler) {
      v << "constant H = " << res.c_mean << " reached at a Kähler metric";
    } else if (cfg.weight > 0 && std::abs(res.c_mean) > 1e-4) {
      res.finding = true;
      v << "conjecture-relevant finding: non-Kähler pluriclosed metric with constant H = " << res.c_mean;
    } else {
      v << "non-Kähler metric with constant H = " << res.c_mean << (cfg.weight > 0 ? "" : " (no pluriclosed penalty)");
    }
  } else {
    v << "no constant-H metric found (best defect " << res.best_defect << ")";
    if (start_skl && !start_kahler)
      v << "; consistent with SKL rigidity: a non-Kähler SKL metric never has constant H";
  }
  res.verdict = v.str();

  if (res.finding && !cfg.findings_dir.empty()) {
    std::filesystem::create_directories(cfg.findings_dir);
    const std::string path =
        (std::filesystem::path(cfg.findings_dir) / (res.family + "-seed" + std::to_string(cfg.seed) + ".json")).string();
    std::ofstream out(path);
    out << result_to_json(res).dump(2) << "\n";
    res.finding_path = path;
  }
  return res;
}

nlohmann::ordered_json result_to_json(const SearchResult& r) {
  nlohmann::ordered_json j;
  j["family"] = r.family;
  j["seed"] = r.seed;
  j["best_parameters"] = r.best_params;
  j["best_defect"] = r.best_defect;
  j["start_defect"] = r.start_defect;
  j["evaluations"] = r.evaluations;
  j["trajectory"] = r.trajectory;
  nlohmann::ordered_json fl;
  for (const auto& [name, value] : flag_list(r.flags)) fl[name] = value;
  j["flags"] = fl;
  j["c_mean"] = r.c_mean;
  j["H_range"] = {r.h_min, r.h_max};
  j["finding"] = r.finding;
  if (!r.finding_path.empty()) j["finding_path"] = r.finding_path;
  j["verdict"] = r.verdict;
  return j;
}

}  // namespace herm
