#pragma once

// Finite-difference reference for chart metrics. Works in coordinates only:
// no frames, no connection forms, nothing shared with the engine beyond
// evaluating the metric entries.

#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

#include "herm/geometry.hpp"

namespace oracle {

using herm::Complex;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

inline Mat metric(const herm::MetricChart& c, const herm::Point& p) {
  Mat g(c.n, c.n);
  for (int i = 0; i < c.n; ++i)
    for (int j = 0; j < c.n; ++j) g(i, j) = herm::eval(c.metric[i][j], p);
  return g;
}

// real direction d: d < n moves Re z_d, d >= n moves Im z_{d-n}
inline herm::Point shift(herm::Point p, int n, int d, double t) {
  p[d % n] += d < n ? Complex(t, 0) : Complex(0, t);
  return p;
}

// sixth-order central difference of a matrix-valued function
template <class F>
Mat diff(F&& f, const herm::Point& p, int n, int d, double h) {
  static const double w[] = {45.0, -9.0, 1.0};
  Mat acc = Mat::Zero(n, n);
  for (int s = 1; s <= 3; ++s) acc += w[s - 1] * (f(shift(p, n, d, s * h)) - f(shift(p, n, d, -s * h)));
  return acc / (60.0 * h);
}

struct Jet {
  int n = 0;
  Mat g, ginv, w;                // w = conj(ginv), the inverse metric on (1,0)-covectors
  std::vector<Mat> dg, dbg;      // d_a g, dbar_a g
  std::vector<std::vector<Mat>> ddbg;  // d_a dbar_b g
};

inline Jet jet(const herm::MetricChart& c, const herm::Point& p, double h = 1e-2) {
  const int n = c.n;
  auto G = [&](const herm::Point& q) { return metric(c, q); };
  Jet j;
  j.n = n;
  j.g = G(p);
  j.ginv = j.g.inverse();
  j.w = j.ginv.conjugate();
  std::vector<Mat> real(2 * n);
  for (int d = 0; d < 2 * n; ++d) real[d] = diff(G, p, n, d, h);
  const Complex I(0, 1);
  for (int a = 0; a < n; ++a) {
    j.dg.push_back(0.5 * (real[a] - I * real[n + a]));
    j.dbg.push_back(0.5 * (real[a] + I * real[n + a]));
  }
  // second derivatives by nesting the stencil
  std::vector<std::vector<Mat>> second(2 * n, std::vector<Mat>(2 * n));
  for (int u = 0; u < 2 * n; ++u)
    for (int v = 0; v < 2 * n; ++v)
      second[u][v] = diff([&](const herm::Point& q) { return diff(G, q, n, v, h); }, p, n, u, h);
  j.ddbg.assign(n, std::vector<Mat>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      j.ddbg[a][b] = 0.25 * (second[a][b] + I * second[a][n + b] - I * second[n + a][b] + second[n + a][n + b]);
  return j;
}

// R(a,b,c,d) = R(d_a, dbar_b, d_c, dbar_d)
inline std::vector<Complex> curvature(const Jet& j) {
  const int n = j.n;
  std::vector<Complex> R(static_cast<std::size_t>(n * n * n * n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          Complex v = -j.ddbg[a][b](c, d);
          for (int p = 0; p < n; ++p)
            for (int q = 0; q < n; ++q) v += j.dg[a](c, q) * j.ginv(q, p) * j.dbg[b](p, d);
          R[((a * n + b) * n + c) * n + d] = v;
        }
  return R;
}

inline double holomorphic_sectional(const Jet& j, const std::vector<Complex>& R, const Vec& v) {
  const int n = j.n;
  Complex num = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d)
          num += R[((a * n + b) * n + c) * n + d] * v(a) * std::conj(v(b)) * v(c) * std::conj(v(d));
  const double norm = (v.transpose() * j.g * v.conjugate())(0, 0).real();
  return num.real() / (norm * norm);
}

// Evaluates f(jet) while halving the step from 2e-2 and keeps the value
// where successive halvings agree best: truncation error falls like h^6
// until roundoff takes over, and the crossover depends on how fast the
// metric varies near the point.
template <class F>
std::vector<double> converged(const herm::MetricChart& c, const herm::Point& p, F&& f) {
  std::vector<double> prev = f(jet(c, p, 2e-2)), best = prev;
  double best_gap = 1e300;
  for (double h = 1e-2; h > 2e-4; h /= 2) {
    std::vector<double> cur = f(jet(c, p, h));
    double gap = 0.0;
    for (std::size_t k = 0; k < cur.size(); ++k) gap = std::max(gap, std::abs(cur[k] - prev[k]));
    if (gap < best_gap) {
      best_gap = gap;
      best = cur;
    }
    prev = std::move(cur);
  }
  return best;
}

struct Scalars {
  double s = 0, s_hat = 0, T2 = 0, eta2 = 0;
};

inline Scalars scalars(const Jet& j) {
  const int n = j.n;
  const std::vector<Complex> R = curvature(j);
  Scalars out;
  Complex s = 0, sh = 0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        for (int d = 0; d < n; ++d) {
          const Complex r = R[((a * n + b) * n + c) * n + d];
          s += r * j.w(a, b) * j.w(c, d);
          sh += r * j.w(a, d) * j.w(c, b);
        }
  out.s = s.real();
  out.s_hat = sh.real();

  // T^k_{ij} = Gamma^k_{ij} - Gamma^k_{ji}, Gamma^k_{ij} = g^{k lbar} d_i g_{j lbar}
  auto gamma = [&](int k, int i, int jj) {
    Complex v = 0;
    for (int l = 0; l < n; ++l) v += j.dg[i](jj, l) * j.ginv(l, k);
    return v;
  };
  std::vector<Complex> T(static_cast<std::size_t>(n * n * n));
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int jj = 0; jj < n; ++jj) T[(k * n + i) * n + jj] = gamma(k, i, jj) - gamma(k, jj, i);
  Complex t2 = 0;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      for (int i = 0; i < n; ++i)
        for (int p = 0; p < n; ++p)
          for (int jj = 0; jj < n; ++jj)
            for (int q = 0; q < n; ++q)
              t2 += T[(k * n + i) * n + jj] * std::conj(T[(l * n + p) * n + q]) * j.g(k, l) * j.w(i, p) * j.w(jj, q);
  out.T2 = t2.real();
  Vec eta = Vec::Zero(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) eta(i) += T[(k * n + k) * n + i];
  out.eta2 = (eta.transpose() * j.w * eta.conjugate())(0, 0).real();
  return out;
}

}  // namespace oracle
