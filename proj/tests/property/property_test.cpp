#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bianchi.hpp"
#include "gen.hpp"
#include "oracles.hpp"
#include "psc/exprcore/calculus.hpp"
#include "psc/exprcore/eval.hpp"
#include "psc/exprcore/parse.hpp"
#include "psc/tensorcalc/curvature.hpp"

using namespace psc;

namespace {

constexpr int kCases = 1000;
using fuzz::Gen;

bool near(long double a, long double b, long double rel) {
  if (!std::isfinite(static_cast<double>(a)) || !std::isfinite(static_cast<double>(b))) return false;
  return std::fabs(a - b) <= rel * (std::fabs(a) + std::fabs(b)) + 1e-9L;
}

}  // namespace

TEST(Property, NormalizeIsIdempotent) {
  Gen g(1);
  for (int i = 0; i < kCases; ++i) {
    const Expr e = g.expr(3);
    const Expr n = normalize(e);
    ASSERT_EQ(normalize(n), n) << to_string(e);
  }
}

TEST(Property, PrintParseRoundTrip) {
  Gen g(2);
  for (int i = 0; i < kCases; ++i) {
    const Expr n = normalize(g.expr(3));
    ASSERT_EQ(normalize(parse(to_string(n))), n) << to_string(n);
  }
}

TEST(Property, NormalizePreservesValue) {
  Gen g(3);
  for (int i = 0; i < kCases; ++i) {
    const Expr e = g.expr(3);
    const Expr n = normalize(e);
    for (int k = 0; k < 20; ++k) {
      const NumericBindings b = g.point();
      ASSERT_TRUE(near(eval_num(e, b), eval_num(n, b), 1e-8L)) << to_string(e) << "  ->  " << to_string(n);
    }
  }
}

TEST(Property, EqualsAgreesWithRandomEvaluation) {
  Gen g(4);
  for (int i = 0; i < kCases; ++i) {
    const Expr a = g.expr(2);
    const Expr w = g.expr(1);
    // an equal rewrite and a perturbed one
    const Expr same = a * (Expr(1) + w * w) / (Expr(1) + w * w) + sin(w) * sin(w) + cos(w) * cos(w) - Expr(1);
    const Expr other = a + Expr(1) / (Expr(3) + w * w);
    ASSERT_TRUE(equals(a, same)) << to_string(a);
    ASSERT_FALSE(equals(a, other)) << to_string(a);
    bool differs = false;
    for (int k = 0; k < 20; ++k) {
      const NumericBindings b = g.point();
      ASSERT_TRUE(near(eval_num(a, b), eval_num(same, b), 1e-8L));
      differs = differs || !near(eval_num(a, b), eval_num(other, b), 1e-8L);
    }
    ASSERT_TRUE(differs);
  }
}

TEST(Property, ProbableEqualityOnRationalFunctions) {
  Gen g(5);
  ProbableEqualityOptions opt;
  opt.trials = 20;
  for (int i = 0; i < kCases; ++i) {
    // rational expressions only, so exact evaluation applies
    Expr a = g.leaf();
    for (int k = 0; k < 3; ++k) {
      const Expr l = g.leaf(), m = g.leaf();
      a = g.pick(2) ? a * l + m : a / (Expr(2) + l * l);
    }
    // b equals a exactly when the random factor happens to be 1 + x^2
    const Expr l = g.leaf();
    const Expr b = normalize(a * (Expr(1) + l * l)) / (Expr(1) + Expr::symbol("x") * Expr::symbol("x"));
    opt.seed = static_cast<std::uint64_t>(i) + 1;
    bool exact = false;
    try {
      exact = equals(a, b);
    } catch (const std::exception& e) {
      FAIL() << to_string(a) << " vs " << to_string(b) << ": " << e.what();
    }
    ASSERT_EQ(exact, probably_equal(a, b, {}, opt) == ProbableEquality::ProbablyEqual) << to_string(a) << " vs " << to_string(b);
  }
}

TEST(Property, DerivativeMatchesFiniteDifferences) {
  Gen g(6);
  const Expr x = Expr::symbol("x");
  int checked = 0;
  for (int i = 0; i < kCases; ++i) {
    const Expr e = g.expr(3);
    const Expr d = differentiate(e, x);
    NumericBindings b = g.point();
    const long double x0 = b.symbols["x"];
    const long double h = 1e-5L;
    b.set("x", x0 + h);
    const long double fp = eval_num(e, b);
    b.set("x", x0 - h);
    const long double fm = eval_num(e, b);
    b.set("x", x0);
    const long double exact = eval_num(d, b);
    const long double fd = (fp - fm) / (2 * h);
    const long double scale = std::max<long double>(1, std::fabs(eval_num(e, b)));
    ASSERT_LE(std::fabs(exact - fd), 1e-5L * std::max(std::fabs(exact), scale)) << to_string(e);
    ++checked;
  }
  EXPECT_EQ(checked, kCases);
}

namespace {

TensorField random_form(Gen& g, const ChartRef& c, int k) {
  TensorField w = TensorField::form(c, k);
  for (const Index& idx : ordered_subsets(static_cast<int>(c->dim()), k))
    if (g.pick(3)) w.set(idx, g.expr(2));
  return w;
}

TensorField random_vector(Gen& g, const ChartRef& c) {
  std::vector<Expr> comps;
  for (std::size_t i = 0; i < c->dim(); ++i) comps.push_back(g.pick(4) ? g.expr(2) : Expr(0));
  return TensorField::vector(c, comps);
}

}  // namespace

TEST(Property, ExteriorDerivativeSquaresToZero) {
  Gen g(7);
  auto c = make_chart({"x", "y", "z"});
  for (int i = 0; i < kCases; ++i) {
    const int k = g.pick(2);
    const TensorField w = random_form(g, c, k);
    ASSERT_TRUE(normalized(exterior_derivative(exterior_derivative(w))).is_zero());
  }
}

TEST(Property, CartanIdentity) {
  Gen g(8);
  auto c = make_chart({"x", "y", "z"});
  for (int i = 0; i < kCases; ++i) {
    const int k = 1 + g.pick(2);
    const TensorField w = random_form(g, c, k);
    const TensorField X = random_vector(g, c);
    const TensorField lhs = lie_derivative(X, w);
    const TensorField rhs = add(interior_product(X, exterior_derivative(w)), exterior_derivative(interior_product(X, w)));
    ASSERT_TRUE(equals(lhs, rhs));
  }
}

TEST(Property, BracketJacobiOnVectorFields) {
  Gen g(9);
  auto c = make_chart({"x", "y", "z"});
  for (int i = 0; i < kCases; ++i) {
    auto small = [&] {
      std::vector<Expr> v;
      for (int a = 0; a < 3; ++a) v.push_back(g.pick(3) ? g.expr(1) : Expr(0));
      return TensorField::vector(c, v);
    };
    const TensorField A = small(), B = small(), C = small();
    const TensorField j = add(add(lie_bracket(A, lie_bracket(B, C)), lie_bracket(B, lie_bracket(C, A))),
                              lie_bracket(C, lie_bracket(A, B)));
    ASSERT_TRUE(normalized(j).is_zero());
  }
}

TEST(Property, CohomologyInvariantUnderRandomBasisChange) {
  std::mt19937_64 rng(10);
  std::uniform_int_distribution<int> d(-3, 3);
  const auto types = bianchi::types();
  for (int i = 0; i < kCases; ++i) {
    const auto& t = types[static_cast<std::size_t>(i) % types.size()];
    const LieAlgebra L = bianchi::algebra(t);
    ExprMatrix M(3, std::vector<Expr>(3));
    Expr det(0);
    while (det.is_zero()) {
      for (auto& r : M)
        for (auto& e : r) e = Expr(static_cast<long>(d(rng)));
      det = normalize(M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) - M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                      M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]));
    }
    const LieAlgebra L2 = change_basis(L, M);
    ASSERT_TRUE(d_squared_zero(L2));
    const int k = 1 + i % 3;
    ASSERT_EQ(relative_cohomology(L2, Subalgebra{}, k).dimension, oracle::betti(bianchi::constants(t), k)) << t.name;
  }
}

TEST(Property, ContractedBianchiOnRandomMetrics) {
  Gen g(11);
  auto c = make_chart({"x", "y"});
  for (int i = 0; i < 100; ++i) {
    // conformally flat and warped metrics with positive factors
    TensorField m = TensorField::symmetric2(c);
    const Expr f = g.leaf(), h = g.leaf();
    m.set({0, 0}, Expr(1) + f * f);
    m.set({1, 1}, exp(h / Expr(2)));
    if (g.pick(2)) m.set({0, 1}, Expr(1) / (Expr(2) + f * f));
    const CurvatureBundle cb = curvature_suite(m, 1);
    for (const Expr& e : einstein_divergence(cb)) ASSERT_TRUE(is_zero(e));
  }
}
