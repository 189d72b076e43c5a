#include "herm/suite.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "herm/connections.hpp"

namespace herm {

namespace {

// Everything a check may look at, computed once per point and frame.
struct PointEval {
  GeometrySample s;
  ClassificationFlags flags;
  TorsionInvariants ti;
  RicciScalars rc;
  Tensor cov;  // Chern T^j_{ik;A}
  StromingerData sd;
  Tensor S;  // S(i,j,k,l) = sum_r T^r_{ik} conj(T^r_{jl})
  Tensor rhat;
};

PointEval evaluate(const GeometrySample& s, double tol) {
  PointEval e;
  e.s = s;
  e.flags = classify(s, tol);
  e.ti = torsion_invariants(s);
  e.rc = ricci_and_scalars(s.R);
  e.cov = chern_covariant_T(s);
  e.sd = strominger(s);
  const int n = s.n;
  e.S = Tensor::cube(4, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          for (int r = 0; r < n; ++r) e.S(i, j, k, l) += s.T(r, i, k) * std::conj(s.T(r, j, l));
  e.rhat = symmetrize(s.R);
  return e;
}

struct CheckOut {
  Residual r;
  bool ok = true;  // extra pass condition beyond the residual
  std::string note;
};

using CheckFn = std::function<CheckOut(const PointEval&, double)>;

struct CheckDef {
  std::string id;
  Gate gate;
  CheckFn fn;
};

// Fills a rank-4 tensor from f(i,j,k,l).
template <class F>
Tensor build4(int n, F&& f) {
  Tensor t = Tensor::cube(4, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) t(i, j, k, l) = f(i, j, k, l);
  return t;
}

Residual matrix_residual(const CMatrix& m) {
  Tensor t(std::vector<int>{static_cast<int>(m.rows()), static_cast<int>(m.cols())});
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j) t(i, j) = m(i, j);
  return max_residual(t);
}

Residual scalar_residual(double v) { return Residual{std::abs(v), {}}; }

CheckOut of(Residual r) { return CheckOut{std::move(r), true, {}}; }

// Four-term curvature combination minus the torsion square.
Tensor lemma1_tensor(const PointEval& e) {
  const Tensor& R = e.s.R;
  return build4(e.s.n, [&](int i, int j, int k, int l) {
    return R(i, j, k, l) + R(k, l, i, j) - R(k, j, i, l) - R(i, l, k, j) - e.S(i, j, k, l);
  });
}

ComplexForm eta_form(const PointEval& e) {
  const int n = e.s.n;
  ComplexForm f(n);
  for (int i = 0; i < n; ++i) f[ComplexForm::Mask{1} << i] = e.ti.eta(i);
  return f;
}

ComplexForm omega_power(int n, int p) {
  ComplexForm omega(n);
  for (int i = 0; i < n; ++i) omega += wedge(ComplexForm::basis(n, i, kI), ComplexForm::basis(n, n + i));
  ComplexForm out = ComplexForm::scalar(n, 1.0);
  for (int k = 0; k < p; ++k) out = wedge(out, omega);
  return out;
}

// the (1,1) matrix M_{i jbar} of sqrt(-1)/2 (d etabar -+ dbar eta)
CMatrix half_eta_combo(const CMatrix& D, double sign_dbar) {
  const int n = static_cast<int>(D.rows());
  CMatrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = 0.5 * (-std::conj(D(j, i)) + sign_dbar * D(i, j));
  return M;
}

const std::vector<CheckDef>& definitions() {
  static const std::vector<CheckDef> defs = [] {
    std::vector<CheckDef> d;
    auto add = [&](std::string id, Gate g, CheckFn fn) { d.push_back({std::move(id), g, std::move(fn)}); };

    add("chern_compat", Gate::None, [](const PointEval& e, double) { return of(chern(e.s).compatibility); });
    add("chern_structure", Gate::None, [](const PointEval& e, double) { return of(scalar_residual(e.s.structure_residual)); });
    add("curvature_hermitian", Gate::None, [](const PointEval& e, double) {
      const Tensor& R = e.s.R;
      Residual r = max_residual(build4(e.s.n, [&](int i, int j, int k, int l) { return R(i, j, k, l) - std::conj(R(j, i, l, k)); }));
      r.absorb(scalar_residual(e.s.curvature_type_residual));
      return of(r);
    });

    add("lemma1", Gate::Pluriclosed, [](const PointEval& e, double) { return of(max_residual(lemma1_tensor(e))); });
    add("lemma1_ddbar", Gate::None, [](const PointEval& e, double) {
      // sqrt(-1) d dbar omega (e_i, e_k, ebar_j, ebar_l) = -(curvature combination - torsion square),
      // so the combination vanishes exactly where the metric is pluriclosed
      const int n = e.s.n;
      const Tensor L = lemma1_tensor(e);
      Tensor t = Tensor::cube(4, n);
      for (int i = 0; i < n; ++i)
        for (int k = i + 1; k < n; ++k)
          for (int j = 0; j < n; ++j)
            for (int l = j + 1; l < n; ++l) t(i, j, k, l) = e.s.ddbar_omega.value({i, k, n + j, n + l}) + L(i, j, k, l);
      CheckOut out = of(max_residual(t));
      std::ostringstream note;
      note << "max |curvature combination| " << L.max_abs() << ", max |ddbar omega| " << max_abs(e.s.ddbar_omega);
      out.note = note.str();
      return out;
    });
    add("lemma2", Gate::None, [](const PointEval& e, double) {
      const Tensor& R = e.s.R;
      const int n = e.s.n;
      return of(max_residual(
          build4(n, [&](int i, int j, int k, int l) { return R(k, j, i, l) - R(i, j, k, l) - e.cov(l, i, k, n + j); })));
    });
    add("lemma3", Gate::None, [](const PointEval& e, double) {
      Residual r = scalar_residual(std::abs(e.s.q - (e.ti.eta2 - e.ti.chi)));
      r.absorb(scalar_residual(e.ti.chi.imag()));
      r.absorb(scalar_residual(e.s.q.imag()));
      return of(r);
    });
    add("eq6", Gate::None,
        [](const PointEval& e, double) { return of(scalar_residual(std::abs(e.rc.s - e.rc.s_hat - e.ti.chi))); });
    add("lemma4_eq7", Gate::None, [](const PointEval& e, double) {
      const int n = e.s.n;
      CMatrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = e.ti.eta_cov(i, n + j) + e.ti.dbar_eta(i, j);
      return of(matrix_residual(m));
    });
    add("lemma4_eq8", Gate::None,
        [](const PointEval& e, double) { return of(matrix_residual(e.rc.rho3 - e.rc.rho1 - e.ti.dbar_eta)); });
    add("gauduchon_eta", Gate::None, [](const PointEval& e, double) {
      const int n = e.s.n;
      const ComplexForm lhs = e.s.d_omega_pow + wedge(eta_form(e), omega_power(n, n - 1));
      return of(scalar_residual(max_abs(lhs)));
    });
    add("sigma_psd", Gate::None, [](const PointEval& e, double) {
      const CMatrix& sig = e.ti.sigma;
      Residual r = matrix_residual(sig - sig.adjoint());
      Eigen::SelfAdjointEigenSolver<CMatrix> es(0.5 * (sig + sig.adjoint()), Eigen::EigenvaluesOnly);
      r.absorb(scalar_residual(std::max(0.0, -es.eigenvalues().minCoeff())));
      r.absorb(scalar_residual(sig.trace().real() - e.ti.T2));
      return of(r);
    });

    add("thm2_eq11", Gate::Pluriclosed, [](const PointEval& e, double) {
      const int n = e.s.n;
      return of(max_residual(build4(n, [&](int i, int j, int k, int l) {
        return e.cov(j, i, k, n + l) - e.cov(l, i, k, n + j) - e.S(i, j, k, l);
      })));
    });
    add("thm2_eq13", Gate::Pluriclosed, [](const PointEval& e, double) {
      const int n = e.s.n;
      CMatrix m(n, n);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = e.ti.xi(i, j) + e.ti.eta_cov(i, n + j) - e.ti.sigma(i, j);
      Residual r = matrix_residual(m);
      r.absorb(scalar_residual(std::abs(2.0 * e.ti.chi - e.ti.T2)));
      return of(r);
    });
    add("thm2_eq12", Gate::PluriclosedConstantH, [](const PointEval& e, double) {
      const int n = e.s.n;
      const double c = e.flags.c_estimate;
      const Tensor P = constant_H_pattern(n, c);
      return of(max_residual(build4(n, [&](int i, int j, int k, int l) {
        return e.s.R(i, j, k, l) - P(i, j, k, l) + 0.25 * e.S(i, j, k, l) +
               0.5 * (e.cov(l, i, k, n + j) + std::conj(e.cov(k, j, l, n + i)));
      })));
    });
    const auto ricci_check = [](int which) {
      return [which](const PointEval& e, double) {
        const int n = e.s.n;
        const double c = e.flags.c_estimate;
        const CMatrix id = CMatrix::Identity(n, n) * (c * (n + 1) / 2.0);
        const CMatrix& D = e.ti.dbar_eta;
        const CMatrix& sig = e.ti.sigma;
        CMatrix res;
        if (which == 1) res = e.rc.rho1 - (id - 0.25 * sig + half_eta_combo(D, -1.0));
        if (which == 2) res = e.rc.rho2 - (id + 0.75 * sig - half_eta_combo(D, -1.0));
        if (which == 3) res = e.rc.rho3 - (id - 0.25 * sig + half_eta_combo(D, +1.0));
        return of(matrix_residual(res));
      };
    };
    add("thm2_eq14", Gate::PluriclosedConstantH, ricci_check(1));
    add("thm2_eq15", Gate::PluriclosedConstantH, ricci_check(2));
    add("thm2_eq16", Gate::PluriclosedConstantH, ricci_check(3));
    add("eq17", Gate::ConstantH, [](const PointEval& e, double) {
      const int n = e.s.n;
      const Tensor& R = e.s.R;
      return of(max_residual(build4(n, [&](int i, int j, int k, int l) {
        return R(k, l, i, j) - R(i, j, k, l) - e.cov(l, i, k, n + j) - std::conj(e.cov(i, j, l, n + k));
      })));
    });
    add("eq18", Gate::PluriclosedConstantH, [](const PointEval& e, double) {
      const int n = e.s.n;
      const Tensor& R = e.s.R;
      const Tensor P = constant_H_pattern(n, e.flags.c_estimate);
      return of(max_residual(build4(n, [&](int i, int j, int k, int l) {
        return R(k, l, i, j) + R(i, j, k, l) - 2.0 * P(i, j, k, l) - 0.5 * e.S(i, j, k, l);
      })));
    });

    add("eq20", Gate::None, [](const PointEval& e, double) { return of(e.sd.eq20); });
    add("strominger_skew", Gate::None, [](const PointEval& e, double) { return of(e.sd.skew); });
    add("eq21", Gate::None, [](const PointEval& e, double) {
      const int n = e.s.n;
      const Tensor& T = e.s.T;
      // indices (j, i, k, l) as in T^j_{ik|lbar}
      Tensor t = Tensor::cube(4, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              Complex q{};
              for (int r = 0; r < n; ++r)
                q += T(j, k, r) * std::conj(T(i, l, r)) - T(j, i, r) * std::conj(T(k, l, r)) -
                     T(r, i, k) * std::conj(T(r, j, l));
              t(j, i, k, l) = e.sd.cov_T(j, i, k, n + l) - e.cov(j, i, k, n + l) - q;
            }
      return of(max_residual(t));
    });
    add("lemma5_eq22", Gate::None, [](const PointEval& e, double) {
      const int n = e.s.n;
      const Tensor& T = e.s.T;
      return of(max_residual(build4(n, [&](int i, int j, int k, int l) {
        Complex q{};
        for (int r = 0; r < n; ++r) q += T(r, i, k) * std::conj(T(r, j, l)) - T(l, i, r) * std::conj(T(k, j, r));
        return e.s.rs.rs11(i, j, k, l) - e.s.R(i, j, k, l) - e.cov(l, i, k, n + j) - std::conj(e.cov(k, j, l, n + i)) - q;
      })));
    });

    add("strominger_parallel_torsion", Gate::Skl, [](const PointEval& e, double) { return of(max_residual(e.sd.cov_T)); });
    add("eq23", Gate::Skl, [](const PointEval& e, double) {
      const int n = e.s.n;
      const Tensor& T = e.s.T;
      Tensor t = Tensor::cube(4, n);
      for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              Complex q{};
              for (int r = 0; r < n; ++r)
                q += -T(j, k, r) * std::conj(T(i, l, r)) + T(j, i, r) * std::conj(T(k, l, r)) +
                     T(r, i, k) * std::conj(T(r, j, l));
              t(j, i, k, l) = e.cov(j, i, k, n + l) - q;
            }
      return of(max_residual(t));
    });
    add("lemma6_eq24", Gate::Skl, [](const PointEval& e, double) {
      const int n = e.s.n;
      const Tensor& T = e.s.T;
      return of(max_residual(build4(n, [&](int i, int j, int k, int l) {
        Complex q{};
        for (int r = 0; r < n; ++r)
          q += T(l, i, r) * std::conj(T(k, j, r)) - T(r, i, k) * std::conj(T(r, j, l)) -
               T(j, i, r) * std::conj(T(k, l, r)) - T(l, k, r) * std::conj(T(i, j, r));
        return e.s.rs.rs11(i, j, k, l) - e.s.R(i, j, k, l) - q;
      })));
    });
    add("eq25", Gate::Skl, [](const PointEval& e, double) { return of(max_residual(symmetrize(e.s.rs.rs11) - e.s.rs.rs11)); });
    add("lemma7_eq26", Gate::Skl, [](const PointEval& e, double) {
      const int n = e.s.n;
      const Tensor& T = e.s.T;
      return of(max_residual(build4(n, [&](int i, int j, int k, int l) {
        Complex q{};
        for (int r = 0; r < n; ++r)
          q += T(j, i, r) * std::conj(T(k, l, r)) + T(l, i, r) * std::conj(T(k, j, r)) +
               T(j, k, r) * std::conj(T(i, l, r)) + T(l, k, r) * std::conj(T(i, j, r));
        // symmetrizing the lemma6_eq24 quadratic term averages these four, hence the 1/4
        return e.s.rs.rs11(i, j, k, l) - e.rhat(i, j, k, l) + 0.25 * q;
      })));
    });

    add("lemma8", Gate::SklNonKahler, [](const PointEval& e, double tol) {
      CheckOut out;
      try {
        const AdmissibleFrame af = admissible_frame(e.s, tol);
        out.r.value = std::max({af.offdiag, af.eta_residual, af.tn_residual, af.rs_residual, af.sum_residual});
        out.ok = af.lambda > tol;
        std::ostringstream note;
        note << "lambda " << af.lambda << ", a = (";
        for (int i = 0; i < af.a.size(); ++i) note << (i ? ", " : "") << af.a(i).real() << (af.a(i).imag() >= 0 ? "+" : "") << af.a(i).imag() << "i";
        note << ")";
        if (af.schur_fallback) note << ", non-normal Schur fallback";
        out.note = note.str();
      } catch (const GeometryError& err) {
        out.r.value = 1.0;
        out.ok = false;
        out.note = err.what();
      }
      return out;
    });
    add("theorem1_trace", Gate::SklNonKahler, [](const PointEval& e, double tol) {
      CheckOut out;
      try {
        const Theorem1Report rep = theorem1_trace(e.s, tol);
        out.r.value = std::abs(rep.rhat_nnnn - rep.rs_nnnn);
        out.ok = rep.consistent;
        out.note = rep.summary;
      } catch (const GeometryError& err) {
        out.r.value = 1.0;
        out.ok = false;
        out.note = err.what();
      }
      return out;
    });
    return d;
  }();
  return defs;
}

// checks that span all points rather than one
const std::vector<std::pair<std::string, Gate>> kManifoldChecks = {
    {"lemma8_constancy", Gate::SklNonKahler},
    {"expected_flags", Gate::None},
    {"frame_independence", Gate::None},
};

bool gate_open(Gate g, const ClassificationFlags& f) {
  switch (g) {
    case Gate::None: return true;
    case Gate::Pluriclosed: return f.pluriclosed;
    case Gate::PluriclosedConstantH: return f.pluriclosed && f.constant_H;
    case Gate::ConstantH: return f.constant_H;
    case Gate::Skl: return f.skl;
    case Gate::SklNonKahler: return f.skl && !f.kahler;
  }
  return false;
}

std::uint64_t mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> scalar_invariants(const PointEval& e) {
  return {e.rc.s.real(), e.rc.s.imag(),  e.rc.s_hat.real(), e.rc.s_hat.imag(), e.ti.chi.real(), e.ti.chi.imag(),
          e.ti.T2,       e.ti.eta2,      e.s.q.real(),      e.s.q.imag(),      e.flags.c_estimate};
}

struct PointOutcome {
  PointSummary summary;
  std::vector<std::optional<CheckOut>> checks;  // nullopt = gate closed
  Residual frame_drift;
  std::vector<std::string> flag_mismatch;
  std::optional<CVector> a;  // admissible-frame constants at non-Kähler SKL points
};

PointOutcome run_point(const HermitianManifold& m, const Point& p, std::size_t index, const SuiteOptions& opt) {
  const auto& defs = definitions();
  PointOutcome out;
  const GeometrySample s = sample(m, p);
  const PointEval e = evaluate(s, opt.tol);

  out.summary.id = "p" + std::to_string(index);
  out.summary.point = p;
  out.summary.flags = e.flags;
  out.summary.s = e.rc.s.real();
  out.summary.s_hat = e.rc.s_hat.real();
  out.summary.chi = e.ti.chi.real();
  out.summary.T2 = e.ti.T2;
  out.summary.eta2 = e.ti.eta2;
  out.summary.q = e.s.q.real();

  out.checks.resize(defs.size());
  for (std::size_t c = 0; c < defs.size(); ++c)
    if (gate_open(defs[c].gate, e.flags)) out.checks[c] = defs[c].fn(e, opt.tol);

  // same ungated residuals and scalars in rotated frames
  const std::vector<double> base = scalar_invariants(e);
  for (int rot = 0; rot < opt.rotations; ++rot) {
    const CMatrix U = random_unitary(s.n, mix(opt.seed ^ mix(index * 1000003ULL + static_cast<std::uint64_t>(rot))));
    const PointEval er = evaluate(change_frame(s, U), opt.tol);
    for (std::size_t c = 0; c < defs.size(); ++c) {
      if (defs[c].gate != Gate::None) continue;
      const double d = std::abs(defs[c].fn(er, opt.tol).r.value - out.checks[c]->r.value);
      out.frame_drift.absorb(Residual{d, {rot, static_cast<int>(c)}});
    }
    const std::vector<double> rotated = scalar_invariants(er);
    for (std::size_t k = 0; k < base.size(); ++k)
      out.frame_drift.absorb(Residual{std::abs(rotated[k] - base[k]), {rot, static_cast<int>(defs.size() + k)}});
  }

  for (const auto& [name, expected] : m.expected_flags)
    for (const auto& [fname, value] : flag_list(e.flags))
      if (fname == name && value != expected) out.flag_mismatch.push_back(name);

  if (e.flags.skl && !e.flags.kahler) {
    try {
      out.a = admissible_frame(s, opt.tol).a;
    } catch (const GeometryError&) {
    }
  }
  return out;
}

IdentityCheck aggregate(const std::string& id, Gate gate, const std::vector<std::optional<CheckOut>>& per_point,
                        double tol) {
  IdentityCheck chk;
  chk.id = id;
  chk.gate = gate;
  bool ok = true;
  bool any = false;
  std::vector<std::string> notes;
  for (std::size_t p = 0; p < per_point.size(); ++p) {
    if (!per_point[p]) continue;
    const CheckOut& co = *per_point[p];
    if (!any || co.r.value > chk.residual) {
      chk.residual = co.r.value;
      chk.worst_indices = {static_cast<int>(p)};
      chk.worst_indices.insert(chk.worst_indices.end(), co.r.worst.begin(), co.r.worst.end());
    }
    any = true;
    ok = ok && co.ok;
    ++chk.points_evaluated;
    if (!co.note.empty() && (notes.empty() || notes.back() != co.note)) notes.push_back(co.note);
  }
  if (!any) {
    chk.status = Status::Skipped;
    chk.note = "gate " + gate_name(gate) + " closed at every point";
    return chk;
  }
  chk.status = ok && chk.residual < tol ? Status::Pass : Status::Fail;
  if (!notes.empty()) chk.note = notes.front();
  return chk;
}

}  // namespace

std::string gate_name(Gate g) {
  switch (g) {
    case Gate::None: return "none";
    case Gate::Pluriclosed: return "pluriclosed";
    case Gate::PluriclosedConstantH: return "pluriclosed+constant_H";
    case Gate::ConstantH: return "constant_H";
    case Gate::Skl: return "skl";
    case Gate::SklNonKahler: return "skl+non_kahler";
  }
  return "?";
}

std::string status_name(Status s) {
  switch (s) {
    case Status::Pass: return "pass";
    case Status::Fail: return "fail";
    case Status::Skipped: return "skipped";
  }
  return "?";
}

bool IdentityReport::ok() const {
  return std::none_of(checks.begin(), checks.end(), [](const IdentityCheck& c) { return c.status == Status::Fail; });
}

const IdentityCheck& IdentityReport::check(const std::string& id) const {
  for (const IdentityCheck& c : checks)
    if (c.id == id) return c;
  throw Error("no check '" + id + "' in report");
}

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids = [] {
    std::vector<std::string> v;
    for (const CheckDef& d : definitions()) v.push_back(d.id);
    for (const auto& [id, gate] : kManifoldChecks) v.push_back(id);
    return v;
  }();
  return ids;
}

Gate check_gate(const std::string& id) {
  for (const CheckDef& d : definitions())
    if (d.id == id) return d.gate;
  for (const auto& [mid, gate] : kManifoldChecks)
    if (mid == id) return gate;
  throw Error("unknown check id '" + id + "'");
}

IdentityReport run_suite(const HermitianManifold& m, const std::vector<Point>& points, const SuiteOptions& opt) {
  if (points.empty()) throw GeometryError("at least one sample point is required");
  const auto& defs = definitions();

  std::vector<PointOutcome> outcomes(points.size());
  std::vector<std::exception_ptr> errors(points.size());
  unsigned workers = opt.threads ? opt.threads : std::max(1u, std::thread::hardware_concurrency());
  workers = std::min<unsigned>(workers, static_cast<unsigned>(points.size()));
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t k; (k = next++) < points.size();) {
      try {
        outcomes[k] = run_point(m, points[k], k, opt);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < workers; ++w) pool.emplace_back(work);
  work();
  for (std::thread& t : pool) t.join();
  for (const auto& err : errors)
    if (err) std::rethrow_exception(err);

  IdentityReport rep;
  rep.manifold = m.name();
  rep.backend = m.backend();
  rep.tolerance = opt.tol;
  rep.seed = opt.seed;
  for (const PointOutcome& o : outcomes) rep.points.push_back(o.summary);

  for (std::size_t c = 0; c < defs.size(); ++c) {
    std::vector<std::optional<CheckOut>> per_point;
    for (const PointOutcome& o : outcomes) per_point.push_back(o.checks[c]);
    rep.checks.push_back(aggregate(defs[c].id, defs[c].gate, per_point, opt.tol));
  }

  {
    // a_i are constants: compare every point against the first
    IdentityCheck chk;
    chk.id = "lemma8_constancy";
    chk.gate = Gate::SklNonKahler;
    std::optional<CVector> first;
    for (std::size_t p = 0; p < outcomes.size(); ++p) {
      if (!outcomes[p].a) continue;
      ++chk.points_evaluated;
      if (!first) {
        first = outcomes[p].a;
        continue;
      }
      const double d = (*outcomes[p].a - *first).cwiseAbs().maxCoeff();
      if (d > chk.residual) {
        chk.residual = d;
        chk.worst_indices = {static_cast<int>(p)};
      }
    }
    if (chk.points_evaluated == 0) {
      chk.status = Status::Skipped;
      chk.note = "gate " + gate_name(chk.gate) + " closed at every point";
    } else {
      chk.status = chk.residual < opt.tol ? Status::Pass : Status::Fail;
      if (chk.points_evaluated == 1) chk.note = "single point: constancy not tested";
    }
    rep.checks.push_back(chk);
  }
  {
    IdentityCheck chk;
    chk.id = "expected_flags";
    chk.gate = Gate::None;
    std::vector<std::string> bad;
    for (std::size_t p = 0; p < outcomes.size(); ++p) {
      ++chk.points_evaluated;
      for (const std::string& f : outcomes[p].flag_mismatch) {
        if (bad.empty()) chk.worst_indices = {static_cast<int>(p)};
        bad.push_back(f);
      }
    }
    chk.residual = static_cast<double>(bad.size());
    chk.status = bad.empty() ? Status::Pass : Status::Fail;
    if (m.expected_flags.empty())
      chk.note = "no expectations declared";
    else if (!bad.empty())
      chk.note = "mismatched flag " + bad.front();
    rep.checks.push_back(chk);
  }
  {
    IdentityCheck chk;
    chk.id = "frame_independence";
    chk.gate = Gate::None;
    Residual worst;
    for (std::size_t p = 0; p < outcomes.size(); ++p) {
      Residual r = outcomes[p].frame_drift;
      if (r.worst.empty()) continue;
      r.worst.insert(r.worst.begin(), static_cast<int>(p));
      worst.absorb(r);
      ++chk.points_evaluated;
    }
    chk.residual = worst.value;
    chk.worst_indices = worst.worst;
    chk.status = chk.residual < std::min(1e-9, opt.tol) ? Status::Pass : Status::Fail;
    chk.note = std::to_string(opt.rotations) + " random unitary frame(s) per point";
    rep.checks.push_back(chk);
  }
  return rep;
}

IdentityCheck check_single(const HermitianManifold& m, const Point& point, const std::string& id, double tol) {
  check_gate(id);  // throws on unknown ids
  SuiteOptions opt;
  opt.tol = tol;
  opt.threads = 1;
  const IdentityReport rep = run_suite(m, {point}, opt);
  return rep.check(id);
}

nlohmann::ordered_json report_to_json(const IdentityReport& r) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["manifold"] = r.manifold;
  j["backend"] = r.backend == Backend::Chart ? "chart" : "lie";
  j["tolerance"] = r.tolerance;
  j["seed"] = r.seed;
  ordered_json pts = ordered_json::array();
  ordered_json flags = ordered_json::object();
  for (const PointSummary& p : r.points) {
    ordered_json pj;
    pj["id"] = p.id;
    ordered_json coords = ordered_json::array();
    for (const Complex& z : p.point) coords.push_back(ordered_json::array({z.real(), z.imag()}));
    pj["point"] = coords;
    pj["s"] = p.s;
    pj["s_hat"] = p.s_hat;
    pj["chi"] = p.chi;
    pj["T2"] = p.T2;
    pj["eta2"] = p.eta2;
    pj["q"] = p.q;
    pj["c_estimate"] = p.flags.c_estimate;
    pts.push_back(pj);
    ordered_json fj;
    for (const auto& [name, value] : flag_list(p.flags)) fj[name] = value;
    flags[p.id] = fj;
  }
  j["points"] = pts;
  ordered_json checks = ordered_json::array();
  for (const IdentityCheck& c : r.checks) {
    ordered_json cj;
    cj["id"] = c.id;
    cj["gate"] = gate_name(c.gate);
    cj["status"] = status_name(c.status);
    cj["residual"] = c.residual;
    cj["worst_indices"] = c.worst_indices;
    cj["points_evaluated"] = c.points_evaluated;
    if (!c.note.empty()) cj["note"] = c.note;
    checks.push_back(cj);
  }
  j["checks"] = checks;
  j["flags"] = flags;
  j["verdict"] = r.ok() ? "ok" : "violations";
  return j;
}

}  // namespace herm
