// hermcheck: catalog, classification, identity verification, curvature
// queries and constant-H searches from the command line.
//
// Exit codes: 0 all requested checks pass, 1 violations, 2 usage or input
// error.

#include <cstdio>
#include <iomanip>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "herm/catalog.hpp"
#include "herm/connections.hpp"
#include "herm/invariants.hpp"
#include "herm/manifold_io.hpp"
#include "herm/search.hpp"
#include "herm/suite.hpp"

namespace {

using namespace herm;
using nlohmann::ordered_json;

struct Common {
  int points = 8;
  std::uint64_t seed = 42;
  double tol = 1e-8;
  std::string format = "text";
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--points", c.points, "sample points")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", c.seed, "random seed");
  cmd->add_option("--tol", c.tol, "tolerance")->check(CLI::PositiveNumber);
  cmd->add_option("--format", c.format, "text or json")->check(CLI::IsMember({"text", "json"}));
}

double parse_real(const std::string& s, const std::string& raw) {
  if (s.empty() || s == "+") return 1.0;
  if (s == "-") return -1.0;
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size()) throw InputError("--at", "cannot read complex number '" + raw + "'");
  return v;
}

// "1", "-2.5", "i", "-i", "2i", "1-0.5i", "3e-2+1e-1*i"
Complex parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  if (s.empty()) throw InputError("--at", "empty coordinate");
  if (s.back() != 'i') return {parse_real(s, raw), 0.0};
  s.pop_back();
  if (!s.empty() && s.back() == '*') s.pop_back();
  std::size_t split = std::string::npos;
  for (std::size_t k = s.size(); k-- > 1;)
    if ((s[k] == '+' || s[k] == '-') && s[k - 1] != 'e' && s[k - 1] != 'E') {
      split = k;
      break;
    }
  if (split == std::string::npos) return {0.0, parse_real(s, raw)};
  return {parse_real(s.substr(0, split), raw), parse_real(s.substr(split), raw)};
}

Point parse_point(std::string s, int n) {
  s.erase(std::remove(s.begin(), s.end(), '('), s.end());
  s.erase(std::remove(s.begin(), s.end(), ')'), s.end());
  Point p;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, ',')) p.push_back(parse_complex(part));
  if (static_cast<int>(p.size()) != n)
    throw InputError("--at", "expected " + std::to_string(n) + " coordinates, found " + std::to_string(p.size()));
  return p;
}

std::string fmt_complex(Complex z) {
  std::ostringstream o;
  o << std::setprecision(10) << z.real();
  if (z.imag() != 0.0) o << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return o.str();
}

int cmd_catalog_list(std::ostream& out) {
  for (const std::string& name : catalog_names()) {
    const HermitianManifold m = catalog_entry(name);
    out << std::left << std::setw(22) << name << std::setw(7) << (m.backend() == Backend::Chart ? "chart" : "lie")
        << "n=" << m.dimension() << "  " << m.description << "\n";
  }
  return 0;
}

int cmd_catalog_show(const std::string& name, std::ostream& out) {
  out << catalog_document(name).dump(2) << "\n";
  return 0;
}

int cmd_classify(const std::string& src, const Common& c, std::ostream& out) {
  const HermitianManifold m = load_manifold(src);
  const std::vector<Point> pts = sample_points(m, c.points, c.seed);
  ordered_json j;
  j["manifold"] = m.name();
  j["tolerance"] = c.tol;
  ordered_json arr = ordered_json::array();
  ClassificationFlags all;
  bool first = true;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const GeometrySample s = sample(m, pts[k]);
    const ClassificationFlags f = classify(s, c.tol);
    const TorsionInvariants ti = torsion_invariants(s);
    const RicciScalars rc = ricci_and_scalars(s.R);
    ordered_json pj;
    pj["id"] = "p" + std::to_string(k);
    ordered_json coords = ordered_json::array();
    for (const Complex& z : pts[k]) coords.push_back(ordered_json::array({z.real(), z.imag()}));
    pj["point"] = coords;
    for (const auto& [name, value] : flag_list(f)) pj["flags"][name] = value;
    pj["c_estimate"] = f.c_estimate;
    pj["s"] = rc.s.real();
    pj["s_hat"] = rc.s_hat.real();
    pj["chi"] = ti.chi.real();
    pj["T2"] = ti.T2;
    pj["eta2"] = ti.eta2;
    arr.push_back(pj);
    if (first) {
      all = f;
      first = false;
    } else {
      all.kahler &= f.kahler;
      all.pluriclosed &= f.pluriclosed;
      all.balanced &= f.balanced;
      all.chern_flat &= f.chern_flat;
      all.bismut_flat &= f.bismut_flat;
      all.skl &= f.skl;
      all.constant_H &= f.constant_H;
    }
  }
  j["points"] = arr;
  for (const auto& [name, value] : flag_list(all)) j["flags"][name] = value;

  if (c.format == "json") {
    out << j.dump(2) << "\n";
    return 0;
  }
  out << m.name() << " (" << (m.backend() == Backend::Chart ? "chart" : "lie") << ", n=" << m.dimension() << ", "
      << pts.size() << " points)\n";
  for (const auto& [name, value] : flag_list(all)) out << "  " << std::left << std::setw(12) << name << (value ? "true" : "false") << "\n";
  for (const auto& pj : arr)
    out << "  " << pj["id"].get<std::string>() << ": c=" << pj["c_estimate"].get<double>() << " s=" << pj["s"].get<double>()
        << " s_hat=" << pj["s_hat"].get<double>() << " chi=" << pj["chi"].get<double>() << " |T|^2=" << pj["T2"].get<double>()
        << "\n";
  return 0;
}

int cmd_verify(const std::string& src, const Common& c, const std::string& only, std::ostream& out) {
  const HermitianManifold m = load_manifold(src);
  if (!only.empty()) check_gate(only);
  SuiteOptions opt;
  opt.tol = c.tol;
  opt.seed = c.seed;
  IdentityReport rep = run_suite(m, sample_points(m, c.points, c.seed), opt);
  if (!only.empty()) {
    const IdentityCheck chk = rep.check(only);
    rep.checks = {chk};
  }
  if (c.format == "json") {
    out << report_to_json(rep).dump(2) << "\n";
  } else {
    out << rep.manifold << ": " << rep.points.size() << " points, tolerance " << rep.tolerance << "\n";
    for (const IdentityCheck& chk : rep.checks) {
      out << "  " << std::left << std::setw(28) << chk.id << std::setw(9) << status_name(chk.status);
      if (chk.status == Status::Skipped)
        out << "(" << gate_name(chk.gate) << ")";
      else
        out << std::scientific << std::setprecision(2) << chk.residual << std::defaultfloat;
      if (!chk.note.empty() && chk.status != Status::Skipped) out << "  " << chk.note;
      out << "\n";
    }
    out << "verdict: " << (rep.ok() ? "ok" : "violations") << "\n";
  }
  return rep.ok() ? 0 : 1;
}

int cmd_curvature(const std::string& src, const std::string& at, const std::string& frame, const Common& c,
                  std::ostream& out) {
  const HermitianManifold m = load_manifold(src);
  const int n = m.dimension();
  Point p;
  if (m.backend() == Backend::Chart) {
    if (at.empty()) throw InputError("--at", "a point is required for chart manifolds");
    p = parse_point(at, n);
    std::string why;
    if (!valid_chart_point(m.chart_model(), p, &why)) throw InputError("--at", why);
  }
  const GeometrySample s = sample(m, p);
  Tensor R = s.R;
  if (frame == "coordinate") {
    const CMatrix inv = s.frame.inverse();
    R = transform_axes(s.R, {inv, inv.conjugate(), inv, inv.conjugate()});
  }
  const ClassificationFlags f = classify(s, c.tol);

  ordered_json j;
  j["manifold"] = m.name();
  j["frame"] = frame;
  ordered_json coords = ordered_json::array();
  for (const Complex& z : p) coords.push_back(ordered_json::array({z.real(), z.imag()}));
  j["point"] = coords;
  ordered_json entries = ordered_json::array();
  for (std::size_t k = 0; k < R.size(); ++k) {
    const Complex z = R.data()[k];
    if (std::abs(z) < 1e-14) continue;
    std::vector<int> idx = R.unravel(k);
    for (int& v : idx) ++v;
    entries.push_back({{"index", idx}, {"value", {z.real(), z.imag()}}});
  }
  j["R"] = entries;
  ordered_json hs = ordered_json::array();
  for (int a = 0; a < n; ++a) hs.push_back(holo_sect_curv(s.R, CVector::Unit(n, a)));
  j["H_unitary_basis"] = hs;
  j["c_estimate"] = f.c_estimate;
  for (const auto& [name, value] : flag_list(f)) j["flags"][name] = value;

  if (c.format == "json") {
    out << j.dump(2) << "\n";
    return 0;
  }
  out << m.name() << ": Chern curvature R_{i jbar k lbar} in the " << frame << " frame\n";
  for (const auto& e : entries) {
    const auto& idx = e["index"];
    out << "  R[" << idx[0] << "," << idx[1] << "," << idx[2] << "," << idx[3]
        << "] = " << fmt_complex({e["value"][0].get<double>(), e["value"][1].get<double>()}) << "\n";
  }
  out << "  H(e_a) =";
  for (const auto& h : hs) out << " " << h.get<double>();
  out << "\n  fitted c = " << f.c_estimate << (f.constant_H ? " (H constant)" : " (H not constant)") << "\n";
  return 0;
}

int cmd_search(const std::string& path, int iters, std::uint64_t seed, double weight, int points,
               const std::string& findings, const std::string& format, std::ostream& out) {
  const MetricFamily fam = load_family(path);
  SearchConfig cfg;
  cfg.iterations = iters;
  cfg.seed = seed;
  cfg.weight = weight;
  cfg.points = points;
  cfg.findings_dir = findings;
  const SearchResult r = minimize(fam, cfg);
  if (format == "json") {
    out << result_to_json(r).dump(2) << "\n";
  } else {
    out << r.family << ": " << r.trajectory.size() << " iterations, " << r.evaluations << " evaluations\n"
        << "  start defect " << r.start_defect << "\n  best defect  " << r.best_defect << "\n  best params ";
    for (double v : r.best_params) out << " " << v;
    out << "\n  H range [" << r.h_min << ", " << r.h_max << "]\n  " << r.verdict << "\n";
    if (!r.finding_path.empty()) out << "  finding written to " << r.finding_path << "\n";
  }
  return r.finding ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hermitian curvature identities and classification"};
  app.require_subcommand(1);

  auto* catalog = app.add_subcommand("catalog", "built-in manifolds");
  catalog->require_subcommand(1);
  catalog->add_subcommand("list", "list entries");
  std::string show_name;
  auto* show = catalog->add_subcommand("show", "print an entry as JSON");
  show->add_option("name", show_name)->required();

  Common classify_opts, verify_opts, curv_opts;
  std::string classify_src, verify_src, curv_src, check_id, at, frame = "unitary";

  auto* classify_cmd = app.add_subcommand("classify", "classification flags at sample points");
  classify_cmd->add_option("src", classify_src, "file path or catalog:<name>")->required();
  add_common(classify_cmd, classify_opts);

  auto* verify_cmd = app.add_subcommand("verify", "run the identity suite");
  verify_cmd->add_option("src", verify_src, "file path or catalog:<name>")->required();
  add_common(verify_cmd, verify_opts);
  verify_cmd->add_option("--check", check_id, "report a single check");

  auto* curv_cmd = app.add_subcommand("curvature", "Chern curvature at a point");
  curv_cmd->add_option("src", curv_src, "file path or catalog:<name>")->required();
  curv_cmd->add_option("--at", at, "complex tuple, e.g. \"(1, 0.5-2i)\"");
  curv_cmd->add_option("--frame", frame, "unitary or coordinate")->check(CLI::IsMember({"unitary", "coordinate"}));
  curv_cmd->add_option("--tol", curv_opts.tol, "tolerance")->check(CLI::PositiveNumber);
  curv_cmd->add_option("--format", curv_opts.format, "text or json")->check(CLI::IsMember({"text", "json"}));

  std::string family_path, findings = "findings", search_format = "text";
  int iters = 300, search_points = 4;
  std::uint64_t search_seed = 42;
  double weight = 1.0;
  auto* search_cmd = app.add_subcommand("search", "Nelder-Mead search for constant H over a metric family");
  search_cmd->add_option("family", family_path, "family JSON file")->required();
  search_cmd->add_option("--iters", iters, "iteration budget")->check(CLI::PositiveNumber);
  search_cmd->add_option("--seed", search_seed, "random seed");
  search_cmd->add_option("--weight", weight, "pluriclosed penalty weight")->check(CLI::NonNegativeNumber);
  search_cmd->add_option("--points", search_points, "sample points")->check(CLI::PositiveNumber);
  search_cmd->add_option("--findings-dir", findings, "where findings are written");
  search_cmd->add_option("--format", search_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    if (catalog->parsed()) return show->parsed() ? cmd_catalog_show(show_name, std::cout) : cmd_catalog_list(std::cout);
    if (classify_cmd->parsed()) return cmd_classify(classify_src, classify_opts, std::cout);
    if (verify_cmd->parsed()) return cmd_verify(verify_src, verify_opts, check_id, std::cout);
    if (curv_cmd->parsed()) return cmd_curvature(curv_src, at, frame, curv_opts, std::cout);
    if (search_cmd->parsed())
      return cmd_search(family_path, iters, search_seed, weight, search_points, findings, search_format, std::cout);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
