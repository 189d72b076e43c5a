#include <random>

#include <gtest/gtest.h>

#include "herm/expr.hpp"

using namespace herm;

namespace {

// Random expression trees over z1, z2 whose values stay moderate on the
// unit polydisk: divisions and logs only ever see 1 + abs2(...).
struct ExprGen {
  std::mt19937_64 rng;
  explicit ExprGen(std::uint64_t seed) : rng(seed) {}

  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }
  int pick(int k) { return std::uniform_int_distribution<int>(0, k - 1)(rng); }

  Expr leaf() {
    switch (pick(3)) {
      case 0: return Expr::constant({uniform(-1, 1), uniform(-1, 1)});
      case 1: return Expr::var(1 + pick(2));
      default: return Expr::conj_var(1 + pick(2));
    }
  }

  Expr tree(int depth) {
    if (depth == 0 || pick(4) == 0) return leaf();
    const Expr a = tree(depth - 1);
    switch (pick(9)) {
      case 0: return a + tree(depth - 1);
      case 1: return a - tree(depth - 1);
      case 2: return a * tree(depth - 1);
      case 3: return a / (Expr::constant(1.0) + abs2(tree(depth - 1)));
      case 4: return pow(a, pick(4));
      case 5: return exp(Expr::constant(0.3) * a);
      case 6: return log(Expr::constant(1.0) + abs2(a));
      case 7: return conj(a);
      default: return abs2(a);
    }
  }

  std::vector<Complex> point() { return {{uniform(-0.7, 0.7), uniform(-0.7, 0.7)}, {uniform(-0.7, 0.7), uniform(-0.7, 0.7)}}; }
};

// Wirtinger derivative by central differences in the real and imaginary
// directions.
Complex fd_wirtinger(const Expr& e, std::vector<Complex> p, int index, bool conjugated) {
  const double h = 1e-5;
  auto at = [&](Complex dz) {
    std::vector<Complex> q = p;
    q[static_cast<std::size_t>(index - 1)] += dz;
    return eval(e, q);
  };
  const Complex dx = (at({h, 0}) - at({-h, 0})) / (2 * h);
  const Complex dy = (at({0, h}) - at({0, -h})) / (2 * h);
  const Complex I(0, 1);
  return conjugated ? 0.5 * (dx + I * dy) : 0.5 * (dx - I * dy);
}

}  // namespace

TEST(Expr, WirtingerMatchesFiniteDifferences) {
  ExprGen gen(20240611);
  int compared = 0;
  for (int t = 0; t < 300; ++t) {
    const Expr e = gen.tree(4);
    const auto p = gen.point();
    for (int index = 1; index <= 2; ++index)
      for (bool c : {false, true}) {
        const Complex exact = eval(wirtinger(e, index, c), p);
        const Complex approx = fd_wirtinger(e, p, index, c);
        EXPECT_NEAR(std::abs(exact - approx), 0.0, 1e-6 * std::max(1.0, std::abs(exact))) << e.str();
        ++compared;
      }
  }
  EXPECT_EQ(compared, 1200);
}

TEST(Expr, ConjugateEvaluatesToComplexConjugate) {
  ExprGen gen(7);
  for (int t = 0; t < 200; ++t) {
    const Expr e = gen.tree(4);
    const auto p = gen.point();
    const Complex v = eval(e, p);
    EXPECT_NEAR(std::abs(eval(conj(e), p) - std::conj(v)), 0.0, 1e-12 * std::max(1.0, std::abs(v)));
  }
}

TEST(Expr, DerivativeOfConjugateSwapsFlag) {
  ExprGen gen(99);
  for (int t = 0; t < 100; ++t) {
    const Expr e = gen.tree(3);
    const auto p = gen.point();
    // d/dz conj(f) = conj(d/dzbar f)
    const Complex lhs = eval(wirtinger(conj(e), 1, false), p);
    const Complex rhs = std::conj(eval(wirtinger(e, 1, true), p));
    EXPECT_NEAR(std::abs(lhs - rhs), 0.0, 1e-10 * std::max(1.0, std::abs(rhs)));
  }
}

TEST(Expr, MixedPartialsCommute) {
  ExprGen gen(31337);
  for (int t = 0; t < 100; ++t) {
    const Expr e = gen.tree(3);
    const auto p = gen.point();
    const Complex a = eval(wirtinger(wirtinger(e, 1, false), 2, true), p);
    const Complex b = eval(wirtinger(wirtinger(e, 2, true), 1, false), p);
    EXPECT_NEAR(std::abs(a - b), 0.0, 1e-9 * std::max(1.0, std::abs(a)));
  }
}

TEST(Expr, BasicDerivatives) {
  const Expr z1 = Expr::var(1), z2 = Expr::var(2);
  const std::vector<Complex> p{{0.3, -0.2}, {1.1, 0.4}};
  EXPECT_EQ(eval(wirtinger(z1, 1, false), p), Complex(1, 0));
  EXPECT_EQ(eval(wirtinger(z1, 2, false), p), Complex(0, 0));
  EXPECT_EQ(eval(wirtinger(conj(z1), 1, false), p), Complex(0, 0));
  EXPECT_EQ(eval(wirtinger(conj(z1), 1, true), p), Complex(1, 0));
  // d/dz1 |z1|^2 = conj(z1)
  EXPECT_NEAR(std::abs(eval(wirtinger(abs2(z1), 1, false), p) - std::conj(p[0])), 0.0, 1e-15);
  // d/dz1 (z1 z2)^3 = 3 z1^2 z2^3
  const Complex want = 3.0 * p[0] * p[0] * p[1] * p[1] * p[1];
  EXPECT_NEAR(std::abs(eval(wirtinger(pow(z1 * z2, 3), 1, false), p) - want), 0.0, 1e-13);
}

TEST(Expr, PrintParseRoundTrip) {
  ExprGen gen(4242);
  for (int t = 0; t < 200; ++t) {
    const Expr e = gen.tree(4);
    const Expr back = parse(e.str(), 2);
    const auto p = gen.point();
    EXPECT_NEAR(std::abs(eval(back, p) - eval(e, p)), 0.0, 1e-12 * std::max(1.0, std::abs(eval(e, p)))) << e.str();
  }
}

TEST(Expr, ParseBuildsExpectedTrees) {
  const Expr e = parse("1/(1+abs2(z1))^2", 1);
  ASSERT_EQ(e.kind(), Expr::Kind::Div);
  EXPECT_EQ(e.rhs().kind(), Expr::Kind::Pow);
  EXPECT_EQ(e.rhs().exponent(), 2);
  EXPECT_EQ(e.rhs().lhs().kind(), Expr::Kind::Add);
  const Expr m = parse("conj(z2)*z1", 2);
  ASSERT_EQ(m.kind(), Expr::Kind::Mul);
  EXPECT_EQ(m.lhs().kind(), Expr::Kind::ConjVar);
  EXPECT_EQ(m.lhs().index(), 2);
  EXPECT_EQ(m.rhs().kind(), Expr::Kind::Var);
}

TEST(Expr, ParsesGrammar) {
  const std::vector<Complex> p{{2, 0}, {0, 1}};
  EXPECT_NEAR(std::abs(eval(parse("1/(1+abs2(z1))^2", 2), p) - Complex(1.0 / 25, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval(parse("-z1^-2 + 2*i*z2", 2), p) - Complex(-0.25 - 2, 0)), 0.0, 1e-15);
  EXPECT_NEAR(std::abs(eval(parse("exp(log(z1)) * conj(z2)", 2), p) - Complex(0, -2)), 0.0, 1e-14);
  EXPECT_NEAR(std::abs(eval(parse("1.5e-1 * z1", 2), p) - Complex(0.3, 0)), 0.0, 1e-15);
}

TEST(Expr, ParseErrorsCarryOffsets) {
  try {
    parse("z1 +* z2", 2);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
    EXPECT_FALSE(e.expected().empty());
  }
  try {
    parse("z1 + z3", 2);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 5u);
  }
  try {
    parse("z1 +", 1);
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 4u);
  }
  EXPECT_THROW(parse("(z1", 1), ParseError);
  EXPECT_THROW(parse("z1 ^ 0.5", 1), ParseError);
  EXPECT_THROW(parse("sin(z1)", 1), ParseError);
}

TEST(Expr, SingularEvaluationNamesSubtree) {
  const Expr e = parse("1/(abs2(z1))", 1);
  try {
    eval(e, std::vector<Complex>{{0, 0}});
    FAIL() << "expected an evaluation error";
  } catch (const EvalError& err) {
    EXPECT_NE(err.subtree().find("abs2"), std::string::npos);
  }
}
