#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "psc/exprcore/calculus.hpp"

using namespace psc;
using fx::P;

namespace {

FiberVector metric_vector(std::size_t n, std::vector<std::tuple<int, int, std::string>> entries) {
  const auto slots = MetricBundle::slots(n);
  FiberVector v(slots.size(), Expr(0));
  for (const auto& [a, b, s] : entries)
    for (std::size_t i = 0; i < slots.size(); ++i)
      if (slots[i] == std::make_pair(a, b)) v[i] = P(s);
  return v;
}

}  // namespace

TEST(Orbit, HomogeneousAtOrigin) {
  const ActionSpec act = fx::homogeneous_action();
  const PointSpec p = fx::origin(act);
  EXPECT_EQ(orbit_dimension(act, p).dimension, 4u);
  const IsotropyData iso = isotropy_subalgebra(act, p);
  ASSERT_EQ(iso.basis.size(), 1u);
  EXPECT_TRUE(iso.representation_checked);
  for (int i = 0; i < 5; ++i) EXPECT_TRUE(equals(iso.basis[0][i], Expr(i == 3 ? 1 : 0)));
  const ExprMatrix& A = iso.linearizations[0];
  EXPECT_TRUE(equals(A[0][0], Expr(-1)));
  EXPECT_TRUE(equals(A[2][2], Expr(1)));
  EXPECT_TRUE(A[1][1].is_zero() && A[3][3].is_zero());
}

TEST(Orbit, PlaneWaveAtGenericPoint) {
  const ActionSpec act = fx::planewave_action();
  const PointSpec q = fx::planewave_point();
  EXPECT_EQ(orbit_dimension(act, q).dimension, 3u);
  EXPECT_EQ(isotropy_subalgebra(act, q).basis.size(), 2u);
}

TEST(Fiber, HomogeneousConditionTwoPasses) {
  const ActionSpec act = fx::homogeneous_action();
  const FiberBasis fb = condition2_check(act, fx::origin(act));
  const std::vector<FiberVector> expect{metric_vector(4, {{0, 2, "1"}}), metric_vector(4, {{1, 1, "1"}}),
                                        metric_vector(4, {{1, 3, "1"}}), metric_vector(4, {{3, 3, "1"}})};
  EXPECT_TRUE(same_span(fb.vp, expect, {}));
  EXPECT_EQ(fb.vp_star.size(), 4u);
  EXPECT_TRUE(fb.intersection.empty());
  EXPECT_TRUE(fb.pass);
}

TEST(Fiber, PlaneWaveIntersectionIsDvDv) {
  const ActionSpec act = fx::planewave_action();
  const PointSpec q = fx::planewave_point();
  const AssumptionSet A = point_assumptions(act, q);
  const FiberBasis fb = condition2_check(act, q);
  const std::vector<FiberVector> span_q{metric_vector(4, {{0, 0, "1"}}),
                                        metric_vector(4, {{0, 1, "-Q0p*P0p"}, {2, 2, "Q0p"}, {3, 3, "P0p"}})};
  EXPECT_TRUE(same_span(fb.vp, span_q, A));
  EXPECT_FALSE(fb.pass);
  EXPECT_TRUE(same_span(fb.intersection, {metric_vector(4, {{1, 1, "1"}})}, A));
  MetricBundle m;
  EXPECT_EQ(m.element_string(fb.intersection[0], *act.chart, true), "∂v⊗∂v");
}

TEST(Fiber, ScalarBundleIsTrivial) {
  const ActionSpec act = fx::rotations();
  PointSpec p;
  p.coords = {{P("x"), Expr(0)}, {P("y"), Expr(0)}, {P("z"), P("z0")}};
  p.assumptions.positive(P("z0"));
  const FiberBasis fb = condition2_check(act, p, ScalarBundle{});
  EXPECT_EQ(fb.vp.size(), 1u);
  EXPECT_TRUE(fb.pass);
}

TEST(Ansatz, InvarianceChecks) {
  const ActionSpec h = fx::homogeneous_action();
  EXPECT_TRUE(verify_invariant_ansatz(h, fx::homogeneous_metric(h.chart)).invariant);
  const ActionSpec w = fx::planewave_action();
  EXPECT_TRUE(verify_invariant_ansatz(w, fx::planewave_metric(w.chart)).invariant);
  TensorField bad = TensorField::symmetric2(w.chart);
  bad.set({2, 2}, Expr(1));
  bad.set({0, 1}, Expr(1));
  const AnsatzCheck r = verify_invariant_ansatz(w, bad);
  EXPECT_FALSE(r.invariant);
}

TEST(Ansatz, MetricAtPointLiesInVp) {
  const ActionSpec act = fx::planewave_action();
  const PointSpec q = fx::planewave_point();
  const AssumptionSet A = point_assumptions(act, q);
  const FiberVector g0 = metric_at_point(fx::planewave_metric(act.chart), q, A);
  std::vector<FiberVector> vp = condition2_check(act, q).vp;
  std::vector<FiberVector> with = vp;
  with.push_back(g0);
  EXPECT_TRUE(same_span(vp, with, A));
}
