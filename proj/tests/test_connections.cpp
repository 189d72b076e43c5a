#include <gtest/gtest.h>

#include "herm/catalog.hpp"
#include "herm/connections.hpp"
#include "herm/geometry.hpp"
#include "herm/invariants.hpp"

using namespace herm;

namespace {

GeometrySample first_sample(const std::string& name, std::uint64_t seed = 3) {
  const HermitianManifold m = catalog_entry(name);
  return sample(m, sample_points(m, 1, seed).front());
}

GeometrySample hopf_at_10() { return sample(catalog_entry("hopf"), Point{{1, 0}, {0, 0}}); }

// R_{k jbar i lbar} - R_{i jbar k lbar} - T^l_{ik, jbar}, written out here
// rather than taken from the suite.
double bianchi_residual(const GeometrySample& s) {
  const int n = s.n;
  const Tensor cov = chern_covariant_T(s);
  double worst = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst, std::abs(s.R(k, j, i, l) - s.R(i, j, k, l) - cov(l, i, k, n + j)));
  return worst;
}

}  // namespace

TEST(Connections, ChernIsMetricAndTorsionCompatible) {
  for (const auto& name : catalog_names()) {
    const GeometrySample s = first_sample(name);
    const ChernData cd = chern(s);
    EXPECT_LT(cd.compatibility.value, 1e-10) << name;
    EXPECT_LT(cd.structure, 1e-10) << name;
  }
}

TEST(Connections, BianchiIdentityOnEveryEntry) {
  for (const auto& name : catalog_names())
    for (std::uint64_t seed : {1u, 2u, 3u}) EXPECT_LT(bianchi_residual(first_sample(name, seed)), 1e-9) << name;
}

TEST(Connections, StromingerReducesToChernWhenKahler) {
  for (const auto& name : {"flat_torus", "fubini_study_1", "fubini_study_2", "complex_hyperbolic_1"}) {
    const GeometrySample s = first_sample(name);
    EXPECT_LT(strominger_gamma(s.T).max_abs(), 1e-12) << name;
    EXPECT_LT(max_residual(s.rs.rs11 - s.R).value, 1e-10) << name;
    EXPECT_LT(s.rs.rs20.max_abs(), 1e-10) << name;
    EXPECT_LT(s.rs.rs02.max_abs(), 1e-10) << name;
  }
}

TEST(Connections, HopfIsBismutFlatOnBothBackends) {
  for (const GeometrySample& s : {hopf_at_10(), first_sample("hopf", 9), sample(catalog_entry("su2xr"), Point{})}) {
    const StromingerData sd = strominger(s);
    EXPECT_LT(sd.rs.rs11.max_abs(), 1e-10);
    EXPECT_LT(sd.rs.rs20.max_abs(), 1e-10);
    EXPECT_LT(sd.rs.rs02.max_abs(), 1e-10);
    EXPECT_LT(sd.skew.value, 1e-10);
    EXPECT_LT(sd.eq20.value, 1e-10);
    // parallel torsion
    EXPECT_LT(sd.cov_T.max_abs(), 1e-10);
  }
}

TEST(Connections, AdmissibleFrameOnHopf) {
  const AdmissibleFrame af = admissible_frame(hopf_at_10());
  EXPECT_NEAR(af.lambda, 1.0, 1e-12);
  ASSERT_EQ(af.a.size(), 2);
  EXPECT_NEAR(std::abs(af.a(0) - Complex(1, 0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(af.a(1)), 0.0, 1e-12);
  // e'_1, e'_2 are e_2, e_1 up to phases
  EXPECT_NEAR(std::abs(af.U(0, 1)), 1.0, 1e-12);
  EXPECT_NEAR(std::abs(af.U(1, 0)), 1.0, 1e-12);
  EXPECT_LT(std::max({af.offdiag, af.eta_residual, af.tn_residual, af.rs_residual, af.sum_residual}), 1e-10);
  EXPECT_FALSE(af.schur_fallback);
}

TEST(Connections, AdmissibleFrameMatchesAcrossBackends) {
  const AdmissibleFrame a = admissible_frame(hopf_at_10());
  const AdmissibleFrame b = admissible_frame(sample(catalog_entry("su2xr"), Point{}));
  EXPECT_NEAR(a.lambda, b.lambda, 1e-10);
  EXPECT_LT((a.a - b.a).norm(), 1e-10);
}

TEST(Connections, AdmissibleFrameRejectsKahler) {
  try {
    admissible_frame(first_sample("fubini_study_2"));
    FAIL() << "expected GeometryError";
  } catch (const GeometryError& e) {
    EXPECT_NE(std::string(e.what()).find("η = 0"), std::string::npos);
  }
}

// The same lambda and a at every sample point of the Hopf chart, in any
// starting frame.
TEST(Connections, AdmissibleDataIsFrameAndPointIndependent) {
  const HermitianManifold m = catalog_entry("hopf");
  for (const Point& p : sample_points(m, 5, 21)) {
    const GeometrySample s = sample(m, p);
    for (std::uint64_t seed : {5u, 6u}) {
      const AdmissibleFrame af = admissible_frame(change_frame(s, random_unitary(2, seed)));
      EXPECT_NEAR(af.lambda, 1.0, 1e-10);
      EXPECT_NEAR(std::abs(af.a(0) - Complex(1, 0)), 0.0, 1e-10);
      EXPECT_NEAR(std::abs(af.a(1)), 0.0, 1e-10);
    }
  }
}

TEST(Connections, RigidityTraceOnHopf) {
  const Theorem1Report rep = theorem1_trace(hopf_at_10());
  EXPECT_NEAR(rep.rhat_nnnn, 0.0, 1e-12);
  EXPECT_NEAR(rep.rs_nnnn, 0.0, 1e-12);
  EXPECT_NEAR(rep.a_sum, rep.frame.lambda, 1e-12);
  EXPECT_GT(rep.a_sum, 0.0);
  EXPECT_FALSE(rep.constant_H_possible);
  EXPECT_TRUE(rep.consistent);
  EXPECT_FALSE(rep.summary.empty());
}

// On SKL metrics Rs = Rhat - 1/4 (sum of four quadratic torsion terms).
// Dropping the 1/4 misses by 3 on the Hopf surface.
TEST(Connections, SymmetrizedSklIdentityNeedsQuarter) {
  const GeometrySample s = hopf_at_10();
  const Tensor rhat = symmetrize(s.R);
  const int n = s.n;
  double unscaled = 0.0, corrected = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          Complex q{};
          for (int r = 0; r < n; ++r)
            q += s.T(j, i, r) * std::conj(s.T(k, l, r)) + s.T(l, i, r) * std::conj(s.T(k, j, r)) +
                 s.T(j, k, r) * std::conj(s.T(i, l, r)) + s.T(l, k, r) * std::conj(s.T(i, j, r));
          const Complex base = s.rs.rs11(i, j, k, l) - rhat(i, j, k, l);
          unscaled = std::max(unscaled, std::abs(base + q));
          corrected = std::max(corrected, std::abs(base + 0.25 * q));
        }
  EXPECT_NEAR(unscaled, 3.0, 1e-12);
  EXPECT_LT(corrected, 1e-12);
}
