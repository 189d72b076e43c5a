#include <random>

#include <gtest/gtest.h>

#include "herm/catalog.hpp"
#include "herm/geometry.hpp"
#include "herm/invariants.hpp"
#include "oracle.hpp"

using namespace herm;

namespace {

CVector random_vector(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  CVector v(n);
  for (int i = 0; i < n; ++i) v(i) = Complex(N(rng), N(rng));
  return v;
}

// c from the oracle: H of the single coordinate direction.
double oracle_c(const HermitianManifold& m, const Point& p) {
  return oracle::converged(m.chart_model().chart, p, [](const oracle::Jet& jet) {
    oracle::Vec e(1);
    e(0) = 1.0;
    return std::vector<double>{oracle::holomorphic_sectional(jet, oracle::curvature(jet), e)};
  })[0];
}

}  // namespace

TEST(Invariants, FubiniStudyAndHyperbolicConstants) {
  for (const auto& [name, c] : std::vector<std::pair<std::string, double>>{
           {"fubini_study_1", 2.0}, {"complex_hyperbolic_1", -2.0}, {"fubini_study_2", 2.0}, {"flat_torus", 0.0}}) {
    const HermitianManifold m = catalog_entry(name);
    for (const Point& p : sample_points(m, 6, 8)) {
      const GeometrySample s = sample(m, p);
      const ClassificationFlags f = classify(s);
      EXPECT_TRUE(f.constant_H) << name;
      EXPECT_NEAR(f.c_estimate, c, 1e-10) << name;
      if (m.dimension() == 1) EXPECT_NEAR(oracle_c(m, p), c, 1e-8) << name;
    }
  }
}

TEST(Invariants, FlagsMatchExpectations) {
  for (const auto& name : catalog_names()) {
    const HermitianManifold m = catalog_entry(name);
    ASSERT_FALSE(m.expected_flags.empty()) << name;
    for (const Point& p : sample_points(m, 3, 4)) {
      const auto flags = flag_list(classify(sample(m, p)));
      for (const auto& [key, want] : m.expected_flags) {
        bool found = false;
        for (const auto& [k, v] : flags)
          if (k == key) {
            found = true;
            EXPECT_EQ(v, want) << name << " " << key;
          }
        EXPECT_TRUE(found) << key;
      }
    }
  }
}

TEST(Invariants, IwasawaIsBalancedNotPluriclosed) {
  const ClassificationFlags f = classify(sample(catalog_entry("iwasawa"), Point{}));
  EXPECT_TRUE(f.balanced);
  EXPECT_FALSE(f.pluriclosed);
  EXPECT_TRUE(f.chern_flat);
  EXPECT_FALSE(f.kahler);
}

TEST(Invariants, RicciTracesAndSigma) {
  for (const auto& name : catalog_names()) {
    const HermitianManifold m = catalog_entry(name);
    for (const Point& p : sample_points(m, 3, 12)) {
      const GeometrySample s = sample(m, p);
      const RicciScalars rs = ricci_and_scalars(s.R);
      EXPECT_NEAR(std::abs(rs.rho1.trace() - rs.s), 0.0, 1e-10) << name;
      EXPECT_NEAR(std::abs(rs.rho2.trace() - rs.s), 0.0, 1e-10) << name;
      EXPECT_NEAR(std::abs(rs.rho3.trace() - rs.s_hat), 0.0, 1e-10) << name;
      const TorsionInvariants ti = torsion_invariants(s);
      EXPECT_LT((ti.sigma - ti.sigma.adjoint()).norm(), 1e-12) << name;
      Eigen::SelfAdjointEigenSolver<CMatrix> es(ti.sigma);
      EXPECT_GT(es.eigenvalues().minCoeff(), -1e-10) << name;
      EXPECT_NEAR(ti.eta2, ti.eta.squaredNorm(), 1e-12);
    }
  }
}

TEST(Invariants, SymmetrizeIsProjection) {
  const GeometrySample s = sample(catalog_entry("hopf"), Point{{0.3, 0.2}, {-0.5, 1.1}});
  const Tensor rhat = symmetrize(s.R);
  EXPECT_LT(max_residual(symmetrize(rhat) - rhat).value, 1e-13);
  // H only sees the symmetrized tensor
  std::mt19937_64 rng(1);
  for (int t = 0; t < 10; ++t) {
    const CVector X = random_vector(2, rng);
    EXPECT_NEAR(holo_sect_curv(rhat, X), holo_sect_curv(s.R, X), 1e-12);
  }
}

TEST(Invariants, ConstantHPatternHasConstantH) {
  std::mt19937_64 rng(2);
  for (int n = 1; n <= 3; ++n) {
    const Tensor pat = constant_H_pattern(n, -1.5);
    EXPECT_NEAR(fitted_c(pat), -1.5, 1e-13);
    for (int t = 0; t < 5; ++t) EXPECT_NEAR(holo_sect_curv(pat, random_vector(n, rng)), -1.5, 1e-12);
    const ConstantHResult r = constant_H_test(pat, 1e-8);
    EXPECT_TRUE(r.flag);
    EXPECT_NEAR(r.c, -1.5, 1e-13);
  }
}

TEST(Invariants, FittedCIsFrameIndependent) {
  const GeometrySample s = sample(catalog_entry("hopf"), Point{{0.3, 0.2}, {-0.5, 1.1}});
  const double c = fitted_c(symmetrize(s.R));
  for (std::uint64_t seed = 0; seed < 5; ++seed)
    EXPECT_NEAR(fitted_c(symmetrize(change_frame(s, random_unitary(2, seed)).R)), c, 1e-12);
  EXPECT_FALSE(constant_H_test(symmetrize(s.R), 1e-8).flag);
}

TEST(Invariants, ZeroVectorIsRejected) {
  EXPECT_THROW(holo_sect_curv(constant_H_pattern(2, 1.0), CVector::Zero(2)), GeometryError);
}
