#include <random>

#include <gtest/gtest.h>

#include "herm/forms.hpp"

using namespace herm;

namespace {

ComplexForm random_form(int n, int degree, std::mt19937_64& rng) {
  std::normal_distribution<double> N;
  ComplexForm f(n);
  for (std::uint32_t m = 0; m < f.size(); ++m)
    if (std::popcount(m) == degree) f[m] = Complex(N(rng), N(rng));
  return f;
}

double gap(const ComplexForm& a, const ComplexForm& b) { return max_abs(a - b); }

}  // namespace

TEST(Forms, GradedCommutativity) {
  std::mt19937_64 rng(11);
  for (int n = 1; n <= 3; ++n)
    for (int p = 0; p <= 3; ++p)
      for (int q = 0; q <= 3; ++q) {
        if (p + q > 2 * n) continue;
        const ComplexForm a = random_form(n, p, rng), b = random_form(n, q, rng);
        const Complex sign = ((p * q) % 2) ? -1.0 : 1.0;
        EXPECT_LT(gap(wedge(a, b), sign * wedge(b, a)), 1e-12) << n << " " << p << " " << q;
      }
}

TEST(Forms, WedgeIsAssociative) {
  std::mt19937_64 rng(12);
  for (int t = 0; t < 20; ++t) {
    const int n = 2 + t % 2;
    const ComplexForm a = random_form(n, 1 + t % 2, rng), b = random_form(n, 1, rng), c = random_form(n, 2, rng);
    EXPECT_LT(gap(wedge(wedge(a, b), c), wedge(a, wedge(b, c))), 1e-11);
  }
}

TEST(Forms, OddFormSquaresToZero) {
  std::mt19937_64 rng(13);
  const ComplexForm a = random_form(3, 1, rng), c = random_form(3, 3, rng);
  EXPECT_LT(max_abs(wedge(a, a)), 1e-12);
  EXPECT_LT(max_abs(wedge(c, c)), 1e-12);
}

TEST(Forms, ValueIsAntisymmetric) {
  ComplexForm f = wedge(ComplexForm::basis(2, 0), ComplexForm::basis(2, 3));
  EXPECT_EQ(f.value({0, 3}), Complex(1, 0));
  EXPECT_EQ(f.value({3, 0}), Complex(-1, 0));
  EXPECT_EQ(f.value({0, 0}), Complex(0, 0));
}

TEST(Forms, ConjugateIsInvolutionAndSwapsType) {
  std::mt19937_64 rng(14);
  for (int deg = 1; deg <= 4; ++deg) {
    const ComplexForm a = random_form(2, deg, rng);
    EXPECT_LT(gap(a.conjugate().conjugate(), a), 1e-15);
    for (int p = 0; p <= deg; ++p) EXPECT_LT(gap(a.part(p, deg - p).conjugate(), a.conjugate().part(deg - p, p)), 1e-15);
  }
  // conj(a ^ b) = conj a ^ conj b
  const ComplexForm a = random_form(2, 1, rng), b = random_form(2, 2, rng);
  EXPECT_LT(gap(wedge(a, b).conjugate(), wedge(a.conjugate(), b.conjugate())), 1e-12);
}

TEST(Forms, KahlerFormIsReal) {
  // sqrt(-1) sum phi_i ^ phibar_i is real
  const int n = 3;
  ComplexForm w(n);
  for (int i = 0; i < n; ++i) w += kI * wedge(ComplexForm::basis(n, i), ComplexForm::basis(n, i + n));
  EXPECT_LT(gap(w.conjugate(), w), 1e-15);
}

TEST(Forms, PullbackRespectsWedge) {
  std::mt19937_64 rng(15);
  std::vector<ComplexForm> images;
  for (int a = 0; a < 4; ++a) images.push_back(random_form(2, 1, rng));
  const ComplexForm a = random_form(2, 1, rng), b = random_form(2, 2, rng);
  EXPECT_LT(gap(wedge(a, b).pullback(images), wedge(a.pullback(images), b.pullback(images))), 1e-11);
}
