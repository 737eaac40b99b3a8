#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"
#include "psc/exprcore/calculus.hpp"
#include "psc/exprcore/eval.hpp"
#include "psc/exprcore/parse.hpp"
#include "psc/tensorcalc/curvature.hpp"

using namespace psc;

namespace {

Expr P(const std::string& s) { return parse(s); }

TensorField vf(const ChartRef& c, std::vector<std::string> comps) {
  std::vector<Expr> e;
  for (auto& s : comps) e.push_back(P(s));
  return TensorField::vector(c, e);
}

TensorField one_form(const ChartRef& c, std::vector<std::string> comps) {
  TensorField w = TensorField::form(c, 1);
  for (std::size_t i = 0; i < comps.size(); ++i) w.set({static_cast<int>(i)}, P(comps[i]));
  return w;
}

TensorField homogeneous_metric(const ChartRef& ch) {
  TensorField g = TensorField::symmetric2(ch);
  g.set({0, 2}, P("d*exp(-s*x4)/2"));
  g.set({1, 1}, P("c*exp(-2*s*x4)"));
  g.set({1, 2}, P("c*x1*exp(-2*s*x4)"));
  g.set({2, 2}, P("c*x1^2*exp(-2*s*x4)"));
  g.set({1, 3}, P("b*exp(-s*x4)/2"));
  g.set({2, 3}, P("b*x1*exp(-s*x4)/2"));
  g.set({3, 3}, P("a"));
  return g;
}

}  // namespace

TEST(TensorField, SymmetryStorage) {
  auto c = make_chart({"x", "y"});
  TensorField w = TensorField::form(c, 2);
  w.set({1, 0}, P("x"));
  EXPECT_TRUE(equals(w.get({0, 1}), P("-x")));
  EXPECT_TRUE(w.get({0, 0}).is_zero());
  TensorField g = TensorField::symmetric2(c);
  g.set({1, 0}, P("y"));
  EXPECT_TRUE(equals(g.get({0, 1}), P("y")));
}

TEST(LieBracket, Examples) {
  auto c = make_chart({"x", "y"});
  EXPECT_TRUE(lie_bracket(vf(c, {"1", "0"}), vf(c, {"0", "1"})).is_zero());
  EXPECT_TRUE(equals(lie_bracket(vf(c, {"0", "x"}), vf(c, {"y", "0"})), vf(c, {"x", "-y"})));
  auto h = make_chart({"x1", "x2", "x3", "x4"});
  EXPECT_TRUE(equals(lie_bracket(vf(h, {"0", "0", "1", "0"}), vf(h, {"-1", "x3", "0", "0"})), vf(h, {"0", "1", "0", "0"})));
}

TEST(ExteriorDerivative, Examples) {
  auto c = make_chart({"x", "y", "z"});
  TensorField w = one_form(c, {"0", "x", "0"});
  TensorField dw = exterior_derivative(w);
  EXPECT_TRUE(equals(dw.get({0, 1}), Expr(1)));
  EXPECT_TRUE(exterior_derivative(one_form(c, {"x", "y", "z"})).is_zero());
  auto r = make_chart({"r"});
  EXPECT_TRUE(exterior_derivative(one_form(r, {"f(r)"})).is_zero());
}

TEST(InteriorProduct, Examples) {
  auto c = make_chart({"x", "y", "z"});
  TensorField vol = TensorField::form(c, 3);
  vol.set({0, 1, 2}, Expr(1));
  const TensorField xy = wedge(vf(c, {"1", "0", "0"}), vf(c, {"0", "1", "0"}));
  const TensorField out = interior_product(xy, vol);
  ASSERT_EQ(out.down(), 1);
  EXPECT_TRUE(equals(out, one_form(c, {"0", "0", "1"})));
  TensorField dxdy = TensorField::form(c, 2);
  dxdy.set({0, 1}, Expr(1));
  EXPECT_TRUE(equals(interior_product(vf(c, {"1", "0", "0"}), dxdy), one_form(c, {"0", "1", "0"})));
}

TEST(InteriorProduct, HomogeneousChiGivesScalar) {
  auto h = make_chart({"x1", "x2", "x3", "x4"});
  std::vector<TensorField> X{vf(h, {"0", "1", "0", "0"}), vf(h, {"0", "0", "1", "0"}), vf(h, {"-1", "x3", "0", "0"}),
                             vf(h, {"s*x1", "s*x2", "0", "1"})};
  const TensorField chi = scale(P("2*k*exp(2*s*x4)"), wedge(X));
  TensorField vol = TensorField::form(h, 4);
  vol.set({0, 1, 2, 3}, Expr(1));
  const TensorField s = interior_product(chi, vol);
  EXPECT_EQ(s.rank(), 0);
  // iterated contraction on the decomposable: ι_{X4}ι_{X3}ι_{X2}ι_{X1} vol
  TensorField t = vol;
  for (const TensorField& x : X) t = interior_product(x, t);
  EXPECT_TRUE(equals(s.get({}), normalize(P("2*k*exp(2*s*x4)") * t.get({}))));
}

TEST(LieDerivative, Examples) {
  auto c = make_chart({"x", "y"});
  TensorField T(c, 0, 2);
  T.set({0, 0}, P("x"));
  TensorField expect(c, 0, 2);
  expect.set({0, 0}, Expr(1));
  EXPECT_TRUE(equals(lie_derivative(vf(c, {"1", "0"}), T), expect));
  EXPECT_TRUE(equals(lie_derivative(vf(c, {"x", "0"}), one_form(c, {"1", "0"})), one_form(c, {"1", "0"})));
  auto h = make_chart({"x1", "x2", "x3", "x4"});
  TensorField q = TensorField::symmetric2(h);
  q.set({0, 2}, Expr(1));
  EXPECT_TRUE(lie_derivative(vf(h, {"-x1", "0", "x3", "0"}), q).is_zero());
}

TEST(Curvature, FlatMinkowski) {
  auto c = make_chart({"t", "x", "y", "z"});
  TensorField g = TensorField::symmetric2(c);
  g.set({0, 0}, Expr(-1));
  for (int i = 1; i < 4; ++i) g.set({i, i}, Expr(1));
  const CurvatureBundle cb = curvature_suite(g, -1);
  EXPECT_TRUE(cb.riemann.is_zero());
  EXPECT_TRUE(cb.einstein.is_zero());
  EXPECT_TRUE(cb.scalar.is_zero());
}

TEST(Curvature, RoundSphereMatchesFiniteDifferences) {
  AssumptionSet A;
  A.positive(P("r0"));
  auto c = make_chart({"th", "ph"}, A);
  TensorField g = TensorField::symmetric2(c);
  g.set({0, 0}, P("r0^2"));
  g.set({1, 1}, P("r0^2*sin(th)^2"));
  const CurvatureBundle cb = curvature_suite(g, 1);
  EXPECT_TRUE(equals(cb.scalar, P("2/r0^2"), A));
  const long double r0 = 1.7L;
  oracle::MetricFn gn = [&](const oracle::Point& x) {
    return std::vector<std::vector<long double>>{{r0 * r0, 0}, {0, r0 * r0 * std::sin(x[0]) * std::sin(x[0])}};
  };
  for (long double th : {0.4L, 1.1L, 2.3L}) {
    const oracle::Point x{th, 0.3L};
    const auto G = oracle::christoffel(gn, x);
    NumericBindings b;
    b.set("th", th).set("ph", 0.3L).set("r0", r0);
    for (int a = 0; a < 2; ++a)
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          EXPECT_TRUE(oracle::close(eval_num(cb.christoffel.get({a, i, j}), b), G[a][i][j], 1e-6L));
    EXPECT_TRUE(oracle::close(oracle::curvature(gn, x).scalar, 2 / (r0 * r0), 1e-5L));
  }
}

TEST(Curvature, HomogeneousMetricAgainstFiniteDifferences) {
  AssumptionSet A;
  A.positive(P("d"));
  A.positive(P("4*a*c - b^2"));
  auto h = make_chart({"x1", "x2", "x3", "x4"}, A);
  const TensorField g = homogeneous_metric(h);
  const CurvatureBundle cb = curvature_suite(g, -1);
  EXPECT_TRUE(equals(cb.scalar, P("2*c*(4*a*c - b^2 - 11*d^2*s^2)/(d^2*(4*a*c - b^2))"), A));
  EXPECT_TRUE(equals(cb.det, P("-exp(-4*s*x4)*d^2*(4*a*c - b^2)/16"), A));
  const long double a = 1.3L, bb = 0.4L, c = 0.9L, d = 0.7L, s = 0.6L;
  NumericBindings nb;
  nb.set("a", a).set("b", bb).set("c", c).set("d", d).set("s", s);
  oracle::MetricFn gn = [&](const oracle::Point& x) {
    NumericBindings q = nb;
    q.set("x1", x[0]).set("x2", x[1]).set("x3", x[2]).set("x4", x[3]);
    std::vector<std::vector<long double>> m(4, std::vector<long double>(4));
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m[i][j] = eval_num(g.get({i, j}), q);
    return m;
  };
  const oracle::Point x{0.2L, -0.5L, 0.3L, 0.4L};
  const auto num = oracle::curvature(gn, x);
  nb.set("x1", x[0]).set("x2", x[1]).set("x3", x[2]).set("x4", x[3]);
  EXPECT_TRUE(oracle::close(eval_num(cb.scalar, nb), num.scalar, 1e-5L));
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j)
      EXPECT_TRUE(oracle::close(eval_num(cb.einstein.get({i, j}), nb), num.einstein_up[i][j], 1e-5L, 1e-7L))
          << i << j;
}

TEST(Curvature, ContractedBianchiOnFixtures) {
  AssumptionSet A;
  A.positive(P("d"));
  A.positive(P("4*a*c - b^2"));
  auto h = make_chart({"x1", "x2", "x3", "x4"}, A);
  for (const Expr& e : einstein_divergence(curvature_suite(homogeneous_metric(h), -1))) EXPECT_TRUE(is_zero(e, A));
  AssumptionSet B;
  B.positive(P("diff(P(u),u)"));
  B.positive(P("diff(Q(u),u)"));
  auto p = make_chart({"u", "v", "x", "y"}, B);
  TensorField g = TensorField::symmetric2(p);
  g.set({0, 0}, P("a(u)"));
  g.set({0, 1}, P("-b(u)*diff(Q(u),u)*diff(P(u),u)"));
  g.set({2, 2}, P("b(u)*diff(Q(u),u)"));
  g.set({3, 3}, P("b(u)*diff(P(u),u)"));
  for (const Expr& e : einstein_divergence(curvature_suite(g, -1))) EXPECT_TRUE(is_zero(e, B));
}

TEST(Curvature, SingularMetricThrows) {
  auto c = make_chart({"x", "y"});
  TensorField g = TensorField::symmetric2(c);
  g.set({0, 0}, Expr(1));
  EXPECT_THROW(curvature_suite(g, 1), std::domain_error);
}
