#include <gtest/gtest.h>

#include <random>

#include "bianchi.hpp"
#include "oracles.hpp"
#include "psc/exprcore/calculus.hpp"
#include "psc/exprcore/parse.hpp"
#include "psc/liecoh/lie.hpp"

using namespace psc;

namespace {

Expr P(const std::string& s) { return parse(s); }

TensorField vf(const ChartRef& c, std::vector<std::string> comps) {
  std::vector<Expr> e;
  for (auto& s : comps) e.push_back(P(s));
  return TensorField::vector(c, e);
}

LieAlgebra homogeneous() {
  auto h = make_chart({"x1", "x2", "x3", "x4"});
  return lie_algebra_from_fields({vf(h, {"0", "1", "0", "0"}), vf(h, {"0", "0", "1", "0"}), vf(h, {"-1", "x3", "0", "0"}),
                                  vf(h, {"-x1", "0", "x3", "0"}), vf(h, {"s*x1", "s*x2", "0", "1"})},
                                 h);
}

LieAlgebra so3() { return bianchi::algebra(bianchi::types().back()); }

std::vector<Expr> unit(int n, int i) {
  std::vector<Expr> v(n, Expr(0));
  v[i] = Expr(1);
  return v;
}

}  // namespace

TEST(LieAlgebra, FromFieldsHomogeneous) {
  const LieAlgebra L = homogeneous();
  ASSERT_EQ(L.n, 5);
  // [X2, X3] = X1, [X1, X5] = s X1
  EXPECT_TRUE(equals(L.constant(0, 1, 2), Expr(1)));
  EXPECT_TRUE(equals(L.constant(0, 0, 4), P("s")));
  EXPECT_TRUE(jacobi_check(L).holds);
  EXPECT_TRUE(d_squared_zero(L));
}

TEST(LieAlgebra, RejectsBadInput) {
  std::vector<Expr> c(27, Expr(0));
  c[(0 * 3 + 1) * 3 + 2] = Expr(1);  // not antisymmetric
  EXPECT_THROW(lie_algebra_from_constants(c, 3), std::invalid_argument);
  auto ch = make_chart({"x", "y"});
  EXPECT_THROW(lie_algebra_from_fields({vf(ch, {"1", "0"}), vf(ch, {"2", "0"})}, ch), std::invalid_argument);
  // ∂x and x^2 ∂y: [X, Y] = 2x ∂y does not close with constant coefficients
  EXPECT_THROW(lie_algebra_from_fields({vf(ch, {"1", "0"}), vf(ch, {"0", "x^2"})}, ch), std::invalid_argument);
}

TEST(LieAlgebra, JacobiFailureDetected) {
  // [e1,e2]=e2, [e1,e3]=e1, [e2,e3]=e1 violates Jacobi
  std::vector<Expr> c(27, Expr(0));
  auto set = [&](int a, int b, int k, long v) {
    c[(k * 3 + a) * 3 + b] = Expr(v);
    c[(k * 3 + b) * 3 + a] = Expr(-v);
  };
  set(0, 1, 1, 1);
  set(0, 2, 0, 1);
  set(1, 2, 0, 1);
  const LieAlgebra L = lie_algebra_from_constants(c, 3);
  EXPECT_FALSE(jacobi_check(L).holds);
}

TEST(Unimodular, Homogeneous) {
  const UnimodularResult u = is_unimodular(homogeneous());
  EXPECT_EQ(u.verdict, UnimodularVerdict::Conditional);
  EXPECT_TRUE(equals(u.traces[4], P("-2*s")));
  EXPECT_EQ(is_unimodular(substitute(homogeneous(), {{P("s"), Expr(0)}})).verdict, UnimodularVerdict::Unimodular);
}

TEST(Cohomology, HomogeneousDegreeFour) {
  const LieAlgebra L = homogeneous();
  const Subalgebra h = make_subalgebra(L, {unit(5, 3)});
  const CohomologyResult H = relative_cohomology(L, h, 4);
  EXPECT_EQ(H.dimension, 0u);
  ASSERT_EQ(H.conditions.size(), 1u);
  EXPECT_EQ(H.conditions[0], P("s"));
  const ExprMap<Expr> s0{{P("s"), Expr(0)}};
  EXPECT_EQ(relative_cohomology(substitute(L, s0), substitute(h, s0), 4).dimension, 1u);
}

TEST(Cohomology, So3RelativeSo2) {
  const LieAlgebra L = so3();
  const Subalgebra h = make_subalgebra(L, {unit(3, 2)});
  EXPECT_EQ(relative_cohomology(L, h, 0).dimension, 1u);
  EXPECT_EQ(relative_cohomology(L, h, 1).dimension, 0u);
  EXPECT_EQ(relative_cohomology(L, h, 2).dimension, 1u);
  // relative 2-cochains of so(3)/so(2): the area form θ1∧θ2
  EXPECT_EQ(relative_cochain_basis(L, h, 2).size(), 1u);
}

TEST(Cohomology, BianchiMatchesBruteForce) {
  for (const auto& t : bianchi::types()) {
    const LieAlgebra L = bianchi::algebra(t);
    const oracle::Constants c = bianchi::constants(t);
    for (int k = 0; k <= 3; ++k)
      EXPECT_EQ(relative_cohomology(L, Subalgebra{}, k).dimension, oracle::betti(c, k)) << t.name << " k=" << k;
    const bool top = oracle::betti(c, 3) > 0;
    EXPECT_EQ(top, t.class_a) << t.name;
    EXPECT_EQ(is_unimodular(L).verdict == UnimodularVerdict::Unimodular, top) << t.name;
  }
}

TEST(Cohomology, DifferentialMatchesBruteForce) {
  const auto t = bianchi::types()[3];  // IV
  const LieAlgebra L = bianchi::algebra(t);
  const oracle::Constants c = bianchi::constants(t);
  Normalizer nz;
  for (int k = 0; k < 3; ++k) {
    const Matrix D = ce_differential(L, k, nz);
    const auto O = oracle::differential(c, k);
    ASSERT_EQ(D.rows(), O.size());
    for (std::size_t i = 0; i < D.rows(); ++i)
      for (std::size_t j = 0; j < D.cols(); ++j) EXPECT_EQ(Rational(O[i][j]), D(i, j).num.is_zero() ? Rational(0) : D(i, j).num.constant_value());
  }
}

TEST(Cohomology, BasisChangeInvariance) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> d(-2, 2);
  for (const auto& t : bianchi::types()) {
    const LieAlgebra L = bianchi::algebra(t);
    ExprMatrix M;
    for (int tries = 0;; ++tries) {
      M.assign(3, std::vector<Expr>(3));
      for (auto& r : M)
        for (auto& e : r) e = Expr(static_cast<long>(d(rng)));
      const Expr det = normalize(M[0][0] * (M[1][1] * M[2][2] - M[1][2] * M[2][1]) -
                                 M[0][1] * (M[1][0] * M[2][2] - M[1][2] * M[2][0]) +
                                 M[0][2] * (M[1][0] * M[2][1] - M[1][1] * M[2][0]));
      if (!det.is_zero()) break;
    }
    const LieAlgebra L2 = change_basis(L, M);
    EXPECT_TRUE(jacobi_check(L2).holds);
    for (int k = 0; k <= 3; ++k)
      EXPECT_EQ(relative_cohomology(L2, Subalgebra{}, k).dimension, relative_cohomology(L, Subalgebra{}, k).dimension)
          << t.name;
  }
}

TEST(Cohomology, PlaneWaveDegreeThree) {
  auto c = make_chart({"u", "v", "x", "y"});
  const LieAlgebra L = lie_algebra_from_fields({vf(c, {"0", "1", "0", "0"}), vf(c, {"0", "0", "1", "0"}), vf(c, {"0", "0", "0", "1"}),
                                                vf(c, {"0", "x", "P(u)", "0"}), vf(c, {"0", "y", "0", "Q(u)"})},
                                               c);
  EXPECT_TRUE(equals(L.constant(0, 1, 3), Expr(1)));
  const Subalgebra h = make_subalgebra(L, {unit(5, 3), unit(5, 4)});
  EXPECT_GT(relative_cohomology(L, h, 3).dimension, 0u);
  EXPECT_EQ(to_string(is_unimodular(L).verdict), std::string("unimodular"));
}

TEST(Cohomology, SubalgebraValidation) {
  const LieAlgebra L = so3();
  EXPECT_THROW(make_subalgebra(L, {unit(3, 0), unit(3, 1)}), std::invalid_argument);
  EXPECT_THROW(make_subalgebra(L, {unit(3, 0), unit(3, 0)}), std::invalid_argument);
}

TEST(Cochains, Rendering) {
  Cochain w(3, Expr(0));
  w[0] = P("-s");
  w[2] = Expr(1);
  EXPECT_EQ(cochain_string(w, 3, 2), "-s*θ1∧θ2 + θ2∧θ3");
}
