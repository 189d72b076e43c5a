#include "herm/geometry.hpp"

namespace herm {

namespace {

// d(f dz^I) = sum_a D_a f Phi_a ^ dz^I with D_a = d/dz_a (or d/dzbar_a),
// Phi_a at position `offset + a`.
ExprForm apply_d(const ExprForm& f, bool conjugated) {
  const int n = f.dim();
  const int offset = conjugated ? n : 0;
  ExprForm out(n);
  using Mask = ExprForm::Mask;
  for (Mask m = 0; m < f.size(); ++m) {
    if (f[m].is_zero()) continue;
    for (int a = 0; a < n; ++a) {
      const Mask bit = Mask{1} << (offset + a);
      if (m & bit) continue;
      Expr d = wirtinger(f[m], a + 1, conjugated);
      if (d.is_zero()) continue;
      if (ExprForm::reorder_sign(bit, m) > 0)
        out[m | bit] = out[m | bit] + d;
      else
        out[m | bit] = out[m | bit] - d;
    }
  }
  return out;
}

}  // namespace

ExprForm partial(const ExprForm& f) { return apply_d(f, false); }
ExprForm partial_bar(const ExprForm& f) { return apply_d(f, true); }

ChartModel::ChartModel(MetricChart c) : chart(std::move(c)), n(chart.n) {
  if (n < 1 || n > kMaxDimension)
    throw GeometryError("chart dimension " + std::to_string(n) + " outside the supported range 1.." +
                        std::to_string(kMaxDimension));
  if (static_cast<int>(chart.metric.size()) != n)
    throw GeometryError("metric must have " + std::to_string(n) + " rows");
  for (const auto& row : chart.metric)
    if (static_cast<int>(row.size()) != n) throw GeometryError("metric must be square");

  const auto& g = chart.metric;
  auto matrix = [&] { return std::vector<std::vector<Expr>>(n, std::vector<Expr>(n)); };

  dg.resize(n);
  dbg.resize(n);
  ddg.resize(n);
  ddbg.resize(n);
  for (int a = 0; a < n; ++a) {
    dg[a] = matrix();
    dbg[a] = matrix();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        dg[a][i][j] = wirtinger(g[i][j], a + 1, false);
        dbg[a][i][j] = wirtinger(g[i][j], a + 1, true);
      }
  }
  for (int b = 0; b < n; ++b) {
    ddg[b].resize(n);
    ddbg[b].resize(n);
    for (int a = 0; a < n; ++a) {
      ddg[b][a] = matrix();
      ddbg[b][a] = matrix();
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          ddg[b][a][i][j] = wirtinger(dg[a][i][j], b + 1, false);
          ddbg[b][a][i][j] = wirtinger(dg[a][i][j], b + 1, true);
        }
    }
  }

  const Expr sqrt_m1 = Expr::constant(kI);
  omega = ExprForm(n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) omega[(1u << a) | (1u << (n + b))] = sqrt_m1 * g[a][b];

  ddbar_omega = sqrt_m1 * partial(partial_bar(omega));

  omega_pow = ExprForm::scalar(n, Expr::constant(1.0));
  for (int k = 1; k < n; ++k) omega_pow = wedge(omega_pow, omega);
  d_omega_pow = partial(omega_pow);
  ddbar_omega_pow = partial(partial_bar(omega_pow));
}

}  // namespace herm
