#include "herm/geometry.hpp"

#include <random>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "herm/connections.hpp"

namespace herm {

using Mask = ComplexForm::Mask;

// ---------------------------------------------------------------- manifolds

HermitianManifold HermitianManifold::chart(std::string name, MetricChart chart) {
  HermitianManifold m;
  m.name_ = std::move(name);
  m.chart_ = std::make_shared<const ChartModel>(std::move(chart));
  return m;
}

HermitianManifold HermitianManifold::lie(std::string name, LieHermitianStructure lie) {
  if (lie.n < 1 || lie.n > kMaxDimension)
    throw GeometryError("Lie dimension " + std::to_string(lie.n) + " outside the supported range");
  const std::vector<int> dims{lie.n, lie.n, lie.n};
  if (lie.C.dims() != dims || lie.P.dims() != dims) throw GeometryError("structure constants must be n x n x n");
  if (lie.h.rows() != lie.n || lie.h.cols() != lie.n) throw GeometryError("metric h must be n x n");
  HermitianManifold m;
  m.name_ = std::move(name);
  m.lie_ = std::make_shared<const LieHermitianStructure>(std::move(lie));
  return m;
}

int HermitianManifold::dimension() const { return lie_ ? lie_->n : chart_->n; }

const ChartModel& HermitianManifold::chart_model() const {
  if (!chart_) throw GeometryError(name_ + " is not a chart manifold");
  return *chart_;
}

const LieHermitianStructure& HermitianManifold::lie_structure() const {
  if (!lie_) throw GeometryError(name_ + " is not a Lie-Hermitian manifold");
  return *lie_;
}

// ---------------------------------------------------------------- helpers

Tensor transform_axes(const Tensor& t, const std::vector<CMatrix>& m) {
  Tensor cur = t;
  const int rank = t.rank();
  for (int ax = 0; ax < rank; ++ax) {
    const CMatrix& M = m[static_cast<std::size_t>(ax)];
    std::vector<int> dims = cur.dims();
    dims[static_cast<std::size_t>(ax)] = static_cast<int>(M.rows());
    Tensor out(dims);
    std::vector<int> src;
    for (std::size_t f = 0; f < out.size(); ++f) {
      std::vector<int> idx = out.unravel(f);
      src = idx;
      Complex acc{};
      const int i = idx[static_cast<std::size_t>(ax)];
      for (int a = 0; a < M.cols(); ++a) {
        if (M(i, a) == Complex{}) continue;
        src[static_cast<std::size_t>(ax)] = a;
        acc += M(i, a) * cur.at(src);
      }
      out.data()[f] = acc;
    }
    cur = std::move(out);
  }
  return cur;
}

ComplexForm d_frame_constant(const ComplexForm& f, const std::vector<ComplexForm>& dphi) {
  const int n = f.dim();
  ComplexForm out(n);
  for (Mask m = 0; m < f.size(); ++m) {
    if (f[m] == Complex{}) continue;
    std::vector<int> idx;
    for (int a = 0; a < 2 * n; ++a)
      if (m & (Mask{1} << a)) idx.push_back(a);
    // d(Phi_a1 ^ ... ^ Phi_ak) = sum_j (-1)^j Phi_a1 ^ .. dPhi_aj .. ^ Phi_ak
    for (std::size_t j = 0; j < idx.size(); ++j) {
      ComplexForm term = ComplexForm::scalar(n, f[m]);
      for (std::size_t p = 0; p < idx.size(); ++p)
        term = wedge(term, p == j ? dphi[static_cast<std::size_t>(idx[p])] : ComplexForm::basis(n, idx[p]));
      if (j % 2) out -= term;
      else out += term;
    }
  }
  return out;
}

CVector lie_bracket(const Tensor& C, const Tensor& P, int A, int B) {
  const int n = C.dims()[0];
  CVector out = CVector::Zero(2 * n);
  const bool ha = A < n, hb = B < n;
  const int i = ha ? A : A - n, j = hb ? B : B - n;
  for (int k = 0; k < n; ++k) {
    if (ha && hb) {
      out(k) = C(k, i, j);
    } else if (ha && !hb) {
      out(k) = P(k, i, j);
      out(n + k) = -std::conj(P(k, j, i));
    } else if (!ha && hb) {
      out(k) = -P(k, j, i);
      out(n + k) = std::conj(P(k, i, j));
    } else {
      out(n + k) = std::conj(C(k, i, j));
    }
  }
  return out;
}

namespace {

CMatrix transpose(const CMatrix& m) { return m.transpose(); }
CMatrix conjugate(const CMatrix& m) { return m.conjugate(); }

/// Lower triangle with the diagonal halved.
CMatrix lower_half(const CMatrix& m) {
  CMatrix out = m.triangularView<Eigen::StrictlyLower>();
  out.diagonal() = 0.5 * m.diagonal();
  return out;
}

CMatrix eval_matrix(const std::vector<std::vector<Expr>>& e, const Point& p) {
  const int n = static_cast<int>(e.size());
  CMatrix out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = eval(e[i][j], p);
  return out;
}

ComplexForm kahler_form(int n) {
  ComplexForm w(n);
  for (int i = 0; i < n; ++i) w[(Mask{1} << i) | (Mask{1} << (n + i))] = kI;
  return w;
}

Complex top_coefficient(const ComplexForm& f) { return f[static_cast<Mask>(f.size() - 1)]; }

ComplexForm power(const ComplexForm& w, int k) {
  ComplexForm out = ComplexForm::scalar(w.dim(), 1.0);
  for (int j = 0; j < k; ++j) out = wedge(out, w);
  return out;
}

/// Coordinate differentials in terms of the unitary coframe of e_i = sum u(i,a) d_a.
std::vector<ComplexForm> coordinate_images(const CMatrix& u) {
  const int n = static_cast<int>(u.rows());
  std::vector<ComplexForm> images(static_cast<std::size_t>(2 * n), ComplexForm(n));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) {
      images[static_cast<std::size_t>(a)][Mask{1} << i] = u(i, a);
      images[static_cast<std::size_t>(n + a)][Mask{1} << (n + i)] = std::conj(u(i, a));
    }
  return images;
}

std::vector<ComplexForm> lie_dphi(const Tensor& C, const Tensor& P) {
  const int n = C.dims()[0];
  std::vector<ComplexForm> d(static_cast<std::size_t>(2 * n), ComplexForm(n));
  for (int A = 0; A < 2 * n; ++A)
    for (int B = A + 1; B < 2 * n; ++B) {
      const CVector br = lie_bracket(C, P, A, B);
      for (int K = 0; K < 2 * n; ++K) d[static_cast<std::size_t>(K)][(Mask{1} << A) | (Mask{1} << B)] = -br(K);
    }
  return d;
}

struct FrameForms {
  ComplexForm ddbar_omega;
  ComplexForm d_omega_pow;
  Complex q{};
};

FrameForms chart_forms(const ChartModel& model, const Point& p, const CMatrix& u) {
  const int n = model.n;
  auto value = [&](const ExprForm& f) { return f.map([&](const Expr& e) { return eval(e, p); }); };
  const auto images = coordinate_images(u);
  FrameForms out;
  out.ddbar_omega = value(model.ddbar_omega).pullback(images);
  out.d_omega_pow = value(model.d_omega_pow).pullback(images);
  // n sqrt(-1) ddbar(omega^{n-1}) = q omega^n, compared on the top monomial
  const ComplexForm omega = value(model.omega);
  const Complex top = top_coefficient(power(omega, n));
  out.q = static_cast<double>(n) * kI * top_coefficient(value(model.ddbar_omega_pow)) / top;
  return out;
}

FrameForms invariant_forms(int n, const std::vector<ComplexForm>& dphi) {
  const ComplexForm omega = kahler_form(n);
  // d splits as del + delbar on each (p,q) component
  auto del = [&](const ComplexForm& f, bool holomorphic) {
    ComplexForm out(n);
    for (int p = 0; p <= n; ++p)
      for (int q = 0; q <= n; ++q) {
        const ComplexForm d = d_frame_constant(f.part(p, q), dphi);
        out += holomorphic ? d.part(p + 1, q) : d.part(p, q + 1);
      }
    return out;
  };
  FrameForms out;
  out.ddbar_omega = kI * del(del(omega, false), true);
  const ComplexForm wp = power(omega, n - 1);
  out.d_omega_pow = del(wp, true);
  const ComplexForm dd = del(del(wp, false), true);
  out.q = static_cast<double>(n) * kI * top_coefficient(dd) / top_coefficient(power(omega, n));
  return out;
}

void finish_sample(GeometrySample& s) {
  const auto structure = structure_dphi(s.theta, s.T, s.n);
  double worst = 0.0;
  for (int i = 0; i < s.n; ++i) worst = std::max(worst, max_abs(structure[static_cast<std::size_t>(i)] - s.dphi[static_cast<std::size_t>(i)]));
  s.structure_residual = worst;
  s.rs = strominger_curvature(s);
}

}  // namespace

// ---------------------------------------------------------------- validity

bool valid_chart_point(const ChartModel& model, const Point& p, std::string* why) {
  auto fail = [&](std::string msg) {
    if (why) *why = std::move(msg);
    return false;
  };
  if (static_cast<int>(p.size()) != model.n)
    return fail("point has " + std::to_string(p.size()) + " coordinates, expected " + std::to_string(model.n));
  try {
    if (model.chart.exclude_where_zero && std::abs(eval(*model.chart.exclude_where_zero, p)) < 1e-12)
      return fail("point lies on the excluded set");
    const CMatrix G = eval_matrix(model.chart.metric, p);
    const double scale = std::max(1.0, G.cwiseAbs().maxCoeff());
    for (int i = 0; i < model.n; ++i)
      for (int j = 0; j < model.n; ++j)
        if (std::abs(G(i, j) - std::conj(G(j, i))) > 1e-12 * scale)
          return fail("metric is not Hermitian at entries (" + std::to_string(i + 1) + "," + std::to_string(j + 1) +
                      ")/(" + std::to_string(j + 1) + "," + std::to_string(i + 1) + ")");
    Eigen::SelfAdjointEigenSolver<CMatrix> es(G, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() <= 1e-10) return fail("metric is not positive definite");
  } catch (const EvalError& e) {
    return fail(e.what());
  }
  return true;
}

// ---------------------------------------------------------------- chart backend

GeometrySample sample_chart(const ChartModel& model, const Point& p) {
  std::string why;
  if (!valid_chart_point(model, p, &why)) throw GeometryError("invalid point: " + why);
  const int n = model.n;

  const CMatrix G = eval_matrix(model.chart.metric, p);
  std::vector<CMatrix> dG(n), dbG(n);
  std::vector<std::vector<CMatrix>> ddG(n, std::vector<CMatrix>(n)), ddbG(n, std::vector<CMatrix>(n));
  for (int d = 0; d < n; ++d) {
    dG[d] = eval_matrix(model.dg[d], p);
    dbG[d] = eval_matrix(model.dbg[d], p);
    for (int a = 0; a < n; ++a) {
      ddG[d][a] = eval_matrix(model.ddg[d][a], p);
      ddbG[d][a] = eval_matrix(model.ddbg[d][a], p);
    }
  }

  const CMatrix Ginv = G.inverse();
  Eigen::LLT<CMatrix> llt(G);
  if (llt.info() != Eigen::Success) throw GeometryError("metric is not positive definite");
  const CMatrix C = llt.matrixL();
  const CMatrix u = C.triangularView<Eigen::Lower>().solve(CMatrix::Identity(n, n));

  // coordinate Chern data: Gamma(k,i,j) = Gamma^k_{ij}, nabla_{d_i} d_j = Gamma^k_{ij} d_k
  Tensor Gamma = Tensor::cube(3, n);
  std::vector<Tensor> dGamma(n, Tensor::cube(3, n)), dbGamma(n, Tensor::cube(3, n));
  for (int d = 0; d < n; ++d) {
    const CMatrix dGinv = -Ginv * dG[d] * Ginv;
    const CMatrix dbGinv = -Ginv * dbG[d] * Ginv;
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          Complex a{}, b{};
          for (int l = 0; l < n; ++l) {
            a += ddG[d][i](j, l) * Ginv(l, k) + dG[i](j, l) * dGinv(l, k);
            b += ddbG[d][i](j, l) * Ginv(l, k) + dG[i](j, l) * dbGinv(l, k);
          }
          dGamma[d](k, i, j) = a;
          dbGamma[d](k, i, j) = b;
        }
  }
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        Complex a{};
        for (int l = 0; l < n; ++l) a += dG[i](j, l) * Ginv(l, k);
        Gamma(k, i, j) = a;
      }
  auto torsion_of = [n](const Tensor& g) {
    Tensor t = Tensor::cube(3, n);
    for (int k = 0; k < n; ++k)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) t(k, i, j) = g(k, i, j) - g(k, j, i);
    return t;
  };
  const Tensor Tc = torsion_of(Gamma);
  Tensor Rc = Tensor::cube(4, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex a{};
          for (int m = 0; m < n; ++m) a -= dbGamma[j](m, i, k) * G(m, l);
          Rc(i, j, k, l) = a;
        }

  // derivatives of the frame: d C = C Phi(u dG u^*), d u = -u dC u
  std::vector<CMatrix> dC(n), dbC(n), du(n), dbu(n);
  for (int d = 0; d < n; ++d) {
    dC[d] = C * lower_half(u * dG[d] * u.adjoint());
    dbC[d] = C * lower_half(u * dbG[d] * u.adjoint());
    du[d] = -u * dC[d] * u;
    dbu[d] = -u * dbC[d] * u;
  }
  // eu[k](i,a) = e_k(u(i,a)), ebu[k](i,a) = ebar_k(u(i,a))
  std::vector<CMatrix> eu(n, CMatrix::Zero(n, n)), ebu(n, CMatrix::Zero(n, n));
  for (int k = 0; k < n; ++k)
    for (int d = 0; d < n; ++d) {
      eu[k] += u(k, d) * du[d];
      ebu[k] += std::conj(u(k, d)) * dbu[d];
    }

  GeometrySample s;
  s.n = n;
  s.backend = Backend::Chart;
  s.point = p;
  s.frame = u;

  s.theta = Tensor({n, n, 2 * n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        Complex hol{}, anti{};
        for (int a = 0; a < n; ++a) {
          Complex coef = eu[k](i, a);
          for (int b = 0; b < n; ++b)
            for (int c = 0; c < n; ++c) coef += u(i, b) * Gamma(a, c, b) * u(k, c);
          hol += coef * C(a, j);
          anti += ebu[k](i, a) * C(a, j);
        }
        s.theta(i, j, k) = hol;
        s.theta(i, j, n + k) = anti;
      }

  const CMatrix Ct = transpose(C);
  s.T = transform_axes(Tc, {Ct, u, u});

  // raw frame derivatives of T by the product rule along d_d and dbar_d
  auto coordinate_derivative = [&](int d, bool conjugated) {
    const CMatrix& Du = conjugated ? dbu[d] : du[d];
    const CMatrix& DC = conjugated ? dbC[d] : dC[d];
    const Tensor DT = torsion_of(conjugated ? dbGamma[d] : dGamma[d]);
    return transform_axes(Tc, {Ct, Du, u}) + transform_axes(Tc, {Ct, u, Du}) + transform_axes(DT, {Ct, u, u}) +
           transform_axes(Tc, {transpose(DC), u, u});
  };
  std::vector<Tensor> DT(n), DbT(n);
  for (int d = 0; d < n; ++d) {
    DT[d] = coordinate_derivative(d, false);
    DbT[d] = coordinate_derivative(d, true);
  }
  s.dT = Tensor({n, n, n, 2 * n});
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          Complex a{}, b{};
          for (int d = 0; d < n; ++d) {
            a += u(l, d) * DT[d](k, i, j);
            b += std::conj(u(l, d)) * DbT[d](k, i, j);
          }
          s.dT(k, i, j, l) = a;
          s.dT(k, i, j, n + l) = b;
        }

  const CMatrix ub = conjugate(u);
  s.R = transform_axes(Rc, {u, ub, u, ub});

  // dphi_k(E_A, E_B) = -phi_k([E_A, E_B]) with
  //   [e_a, e_b]    = sum_d (e_a u(b,d) - e_b u(a,d)) d_d
  //   [e_a, ebar_b] = sum_d (-ebar_b u(a,d)) d_d + (..) dbar_d
  std::vector<ComplexForm> dphi(static_cast<std::size_t>(2 * n), ComplexForm(n));
  for (int k = 0; k < n; ++k) {
    ComplexForm& f = dphi[static_cast<std::size_t>(k)];
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        Complex hh{}, hb{};
        for (int d = 0; d < n; ++d) {
          hh -= (eu[a](b, d) - eu[b](a, d)) * C(d, k);
          hb += ebu[b](a, d) * C(d, k);
        }
        if (a < b) f[(Mask{1} << a) | (Mask{1} << b)] = hh;
        f[(Mask{1} << a) | (Mask{1} << (n + b))] = hb;
      }
    dphi[static_cast<std::size_t>(n + k)] = f.conjugate();
  }
  s.dphi = std::move(dphi);

  const FrameForms forms = chart_forms(model, p, u);
  s.ddbar_omega = forms.ddbar_omega;
  s.d_omega_pow = forms.d_omega_pow;
  s.q = forms.q;
  s.curvature_type_residual = 0.0;
  finish_sample(s);
  return s;
}

// ---------------------------------------------------------------- Lie backend

JacobiReport jacobi_residual(const LieHermitianStructure& lie) {
  const int n = lie.n;
  JacobiReport rep;
  rep.worst_triple = {0, 0, 0};
  auto bracket_vec = [&](const CVector& x, int B) {
    CVector out = CVector::Zero(2 * n);
    for (int A = 0; A < 2 * n; ++A)
      if (x(A) != Complex{}) out += x(A) * lie_bracket(lie.C, lie.P, A, B);
    return out;
  };
  for (int A = 0; A < 2 * n; ++A)
    for (int B = 0; B < 2 * n; ++B)
      for (int Cc = 0; Cc < 2 * n; ++Cc) {
        const CVector j = bracket_vec(lie_bracket(lie.C, lie.P, A, B), Cc) +
                          bracket_vec(lie_bracket(lie.C, lie.P, B, Cc), A) +
                          bracket_vec(lie_bracket(lie.C, lie.P, Cc, A), B);
        const double r = j.cwiseAbs().maxCoeff();
        if (r > rep.residual) {
          rep.residual = r;
          rep.worst_triple = {A, B, Cc};
        }
      }
  return rep;
}

GeometrySample sample_lie(const LieHermitianStructure& lie) {
  const int n = lie.n;
  double scale = 1.0;
  for (const Complex& z : lie.C.data()) scale = std::max(scale, std::abs(z));
  for (const Complex& z : lie.P.data()) scale = std::max(scale, std::abs(z));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        if (std::abs(lie.C(k, i, j) + lie.C(k, j, i)) > 1e-12 * scale)
          throw GeometryError("structure constants C are not antisymmetric");
  const JacobiReport jac = jacobi_residual(lie);
  if (jac.residual > 1e-12 * scale * scale) throw GeometryError("Jacobi identity violated");
  if ((lie.h - lie.h.adjoint()).cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, lie.h.cwiseAbs().maxCoeff()))
    throw GeometryError("metric h is not Hermitian");
  Eigen::LLT<CMatrix> llt(lie.h);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(lie.h, Eigen::EigenvaluesOnly);
  if (llt.info() != Eigen::Success || es.eigenvalues().minCoeff() <= 1e-10)
    throw GeometryError("metric h is not positive definite");
  const CMatrix Cc = llt.matrixL();
  const CMatrix u = Cc.triangularView<Eigen::Lower>().solve(CMatrix::Identity(n, n));
  const CMatrix Ct = transpose(Cc);
  const Tensor C = transform_axes(lie.C, {Ct, u, u});
  const Tensor P = transform_axes(lie.P, {Ct, u, conjugate(u)});

  GeometrySample s;
  s.n = n;
  s.backend = Backend::Lie;
  s.frame = u;

  // nabla_{ebar_k} e_i = [ebar_k, e_i]^{1,0}; the e_k part follows from
  // metric compatibility.
  s.theta = Tensor({n, n, 2 * n});
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        s.theta(i, j, n + k) = -P(j, i, k);
        s.theta(i, j, k) = std::conj(P(i, j, k));
      }
  s.T = Tensor::cube(3, n);
  for (int m = 0; m < n; ++m)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) s.T(m, i, j) = s.theta(j, m, i) - s.theta(i, m, j) - C(m, i, j);
  s.dT = Tensor({n, n, n, 2 * n});

  s.dphi = lie_dphi(C, P);

  // Theta = dtheta - theta ^ theta
  s.R = Tensor::cube(4, n);
  double type_residual = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      ComplexForm Theta = d_frame_constant(one_form(s.theta, i, j, n), s.dphi);
      for (int r = 0; r < n; ++r) Theta -= wedge(one_form(s.theta, i, r, n), one_form(s.theta, r, j, n));
      type_residual = std::max({type_residual, max_abs(Theta.part(2, 0)), max_abs(Theta.part(0, 2))});
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s.R(k, l, i, j) = Theta.value({k, n + l});
    }
  s.curvature_type_residual = type_residual;

  const FrameForms forms = invariant_forms(n, s.dphi);
  s.ddbar_omega = forms.ddbar_omega;
  s.d_omega_pow = forms.d_omega_pow;
  s.q = forms.q;
  finish_sample(s);
  return s;
}

GeometrySample sample(const HermitianManifold& m, const Point& p) {
  GeometrySample s = m.backend() == Backend::Lie ? sample_lie(m.lie_structure()) : sample_chart(m.chart_model(), p);
  return s;
}

DdbarForms ddbar_forms(const HermitianManifold& m, const Point& p) {
  if (m.dimension() > kMaxDimension) throw GeometryError("dimension above the supported bound for omega^{n-1}");
  const GeometrySample s = sample(m, p);
  return {s.ddbar_omega, s.q};
}

// ---------------------------------------------------------------- frames

GeometrySample change_frame(const GeometrySample& s, const CMatrix& U) {
  const int n = s.n;
  if (U.rows() != n || U.cols() != n) throw GeometryError("frame change must be n x n");
  if ((U * U.adjoint() - CMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > 1e-12)
    throw GeometryError("frame change is not unitary");
  const CMatrix Ub = conjugate(U);
  CMatrix W = CMatrix::Zero(2 * n, 2 * n);
  W.topLeftCorner(n, n) = U;
  W.bottomRightCorner(n, n) = Ub;

  GeometrySample out = s;
  out.frame = U * s.frame;
  out.T = transform_axes(s.T, {Ub, U, U});
  out.theta = transform_axes(s.theta, {U, Ub, W});
  out.dT = transform_axes(s.dT, {Ub, U, U, W});
  out.R = transform_axes(s.R, {U, Ub, U, Ub});
  out.rs.rs11 = transform_axes(s.rs.rs11, {U, Ub, U, Ub});
  out.rs.rs20 = transform_axes(s.rs.rs20, {U, U, U, Ub});
  out.rs.rs02 = transform_axes(s.rs.rs02, {Ub, Ub, U, Ub});

  // phi_a = sum_i U(i,a) phi'_i
  std::vector<ComplexForm> images(static_cast<std::size_t>(2 * n), ComplexForm(n));
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < n; ++i) {
      images[static_cast<std::size_t>(a)][Mask{1} << i] = U(i, a);
      images[static_cast<std::size_t>(n + a)][Mask{1} << (n + i)] = Ub(i, a);
    }
  out.ddbar_omega = s.ddbar_omega.pullback(images);
  out.d_omega_pow = s.d_omega_pow.pullback(images);
  // phi'_i = sum_a conj(U(i,a)) phi_a
  for (int i = 0; i < n; ++i) {
    ComplexForm acc(n);
    for (int a = 0; a < n; ++a) acc += Ub(i, a) * s.dphi[static_cast<std::size_t>(a)];
    out.dphi[static_cast<std::size_t>(i)] = acc.pullback(images);
    out.dphi[static_cast<std::size_t>(n + i)] = out.dphi[static_cast<std::size_t>(i)].conjugate();
  }
  return out;
}

CMatrix random_unitary(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  CMatrix Z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) Z(i, j) = Complex(normal(rng), normal(rng));
  Eigen::HouseholderQR<CMatrix> qr(Z);
  CMatrix Q = qr.householderQ() * CMatrix::Identity(n, n);
  const CMatrix R = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const double r = std::abs(R(j, j));
    if (r > 0) Q.col(j) *= R(j, j) / r;
  }
  return Q;
}

std::vector<Point> sample_points(const HermitianManifold& m, int count, std::uint64_t seed) {
  if (count < 1) throw GeometryError("at least one sample point is required");
  if (m.backend() == Backend::Lie) return std::vector<Point>(static_cast<std::size_t>(count));

  const ChartModel& model = m.chart_model();
  const int n = model.n;
  std::vector<Point> out;
  for (const Point& p : model.chart.sample_points) {
    if (static_cast<int>(out.size()) == count) return out;
    std::string why;
    if (!valid_chart_point(model, p, &why)) throw GeometryError("declared sample point is invalid: " + why);
    out.push_back(p);
  }
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> radius(model.chart.shell_min, model.chart.shell_max);
  while (static_cast<int>(out.size()) < count) {
    bool found = false;
    for (int attempt = 0; attempt < 1000 && !found; ++attempt) {
      Point p(static_cast<std::size_t>(n));
      double norm = 0.0;
      for (Complex& z : p) {
        z = Complex(normal(rng), normal(rng));
        norm += std::norm(z);
      }
      norm = std::sqrt(norm);
      const double r = radius(rng);
      for (Complex& z : p) z *= norm > 0 ? r / norm : 0.0;
      if (valid_chart_point(model, p)) {
        out.push_back(std::move(p));
        found = true;
      }
    }
    if (!found) throw GeometryError("no valid sample point found after 1000 attempts");
  }
  return out;
}

}  // namespace herm
