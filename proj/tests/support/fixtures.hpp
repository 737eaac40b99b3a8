#pragma once

// Symmetric configurations shared by the unit, property and acceptance tests.

#include "psc/exprcore/parse.hpp"
#include "psc/varreduce/reduce.hpp"

namespace fx {

inline psc::Expr P(const std::string& s) { return psc::parse(s); }

inline psc::TensorField vf(const psc::ChartRef& c, std::vector<std::string> comps) {
  std::vector<psc::Expr> e;
  for (auto& s : comps) e.push_back(P(s));
  return psc::TensorField::vector(c, e);
}

inline psc::AssumptionSet homogeneous_assumptions() {
  psc::AssumptionSet A;
  A.positive(P("d"));
  A.positive(P("4*a*c - b^2"));
  A.declare(P("k"), psc::Sign::Nonzero);
  return A;
}

inline psc::ActionSpec homogeneous_action() {
  auto h = psc::make_chart({"x1", "x2", "x3", "x4"}, homogeneous_assumptions());
  return {h,
          {vf(h, {"0", "1", "0", "0"}), vf(h, {"0", "0", "1", "0"}), vf(h, {"-1", "x3", "0", "0"}),
           vf(h, {"-x1", "0", "x3", "0"}), vf(h, {"s*x1", "s*x2", "0", "1"})}};
}

inline psc::TensorField homogeneous_metric(const psc::ChartRef& h) {
  psc::TensorField g = psc::TensorField::symmetric2(h);
  g.set({0, 2}, P("d*exp(-s*x4)/2"));
  g.set({1, 1}, P("c*exp(-2*s*x4)"));
  g.set({1, 2}, P("c*x1*exp(-2*s*x4)"));
  g.set({2, 2}, P("c*x1^2*exp(-2*s*x4)"));
  g.set({1, 3}, P("b*exp(-s*x4)/2"));
  g.set({2, 3}, P("b*x1*exp(-s*x4)/2"));
  g.set({3, 3}, P("a"));
  return g;
}

inline psc::TensorField homogeneous_chi(const psc::ActionSpec& act) {
  const auto& X = act.generators;
  return psc::scale(P("24*k*exp(2*s*x4)"), psc::wedge(std::vector<psc::TensorField>{X[0], X[1], X[2], X[4]}));
}

inline psc::PointSpec origin(const psc::ActionSpec& act) {
  psc::PointSpec p;
  for (const auto& c : act.chart->coords) p.coords[c] = psc::Expr(0);
  return p;
}

inline psc::AssumptionSet planewave_assumptions() {
  psc::AssumptionSet B;
  B.positive(P("diff(P(u),u)"));
  B.positive(P("diff(Q(u),u)"));
  return B;
}

inline psc::ActionSpec planewave_action() {
  auto c = psc::make_chart({"u", "v", "x", "y"}, planewave_assumptions());
  return {c,
          {vf(c, {"0", "1", "0", "0"}), vf(c, {"0", "0", "1", "0"}), vf(c, {"0", "0", "0", "1"}),
           vf(c, {"0", "x", "P(u)", "0"}), vf(c, {"0", "y", "0", "Q(u)"})}};
}

inline psc::PointSpec planewave_point() {
  psc::PointSpec q;
  q.coords = {{P("u"), P("u0")}, {P("v"), P("v0")}, {P("x"), P("x0")}, {P("y"), P("y0")}};
  q.atoms = {{P("P(u0)"), P("P0")},
             {P("Q(u0)"), P("Q0")},
             {P("diff(P(u0),u0,1)"), P("P0p")},
             {P("diff(Q(u0),u0,1)"), P("Q0p")}};
  return q;
}

inline psc::TensorField planewave_metric(const psc::ChartRef& c) {
  psc::TensorField g = psc::TensorField::symmetric2(c);
  g.set({0, 0}, P("a(u)"));
  g.set({0, 1}, P("-b(u)*diff(Q(u),u)*diff(P(u),u)"));
  g.set({2, 2}, P("b(u)*diff(Q(u),u)"));
  g.set({3, 3}, P("b(u)*diff(P(u),u)"));
  return g;
}

// E^{vv} of the plane-wave ansatz, frozen after agreement with the
// finite-difference curvature oracle
inline const char* kDeltaB =
    "(-2*b(u)^2*diff(P(u),u)^2*diff(Q(u),u)*diff(Q(u),u,3) + 3*b(u)^2*diff(P(u),u)^2*diff(Q(u),u,2)^2"
    " + 4*b(u)^2*diff(P(u),u)*diff(P(u),u,2)*diff(Q(u),u)*diff(Q(u),u,2)"
    " - 2*b(u)^2*diff(P(u),u)*diff(P(u),u,3)*diff(Q(u),u)^2 + 3*b(u)^2*diff(P(u),u,2)^2*diff(Q(u),u)^2"
    " - 4*b(u)*diff(P(u),u)^2*diff(Q(u),u)^2*diff(b(u),u,2) + 4*b(u)*diff(P(u),u)^2*diff(Q(u),u)*diff(Q(u),u,2)*diff(b(u),u)"
    " + 4*b(u)*diff(P(u),u)*diff(P(u),u,2)*diff(Q(u),u)^2*diff(b(u),u) + 6*diff(P(u),u)^2*diff(Q(u),u)^2*diff(b(u),u)^2)"
    "/(4*b(u)^4*diff(P(u),u)^4*diff(Q(u),u)^4)";

inline psc::AssumptionSet spherical_assumptions() {
  psc::AssumptionSet S;
  S.positive(P("r"));
  S.positive(P("pi"));
  return S;
}

inline psc::ActionSpec rotations() {
  auto c = psc::make_chart({"x", "y", "z"}, spherical_assumptions());
  return {c, {vf(c, {"0", "-z", "y"}), vf(c, {"z", "0", "-x"}), vf(c, {"-y", "x", "0"})}};
}

inline psc::TensorField orbit_area_chi(const psc::ChartRef& c) {
  auto X = psc::TensorField::multivector(c, 2);
  X.set({0, 1}, P("4*pi*sqrt(x^2+y^2+z^2)*z"));
  X.set({0, 2}, P("-4*pi*sqrt(x^2+y^2+z^2)*y"));
  X.set({1, 2}, P("4*pi*sqrt(x^2+y^2+z^2)*x"));
  return X;
}

inline psc::QuotientSpec radial_quotient() {
  return {{P("r")}, {P("sqrt(x^2+y^2+z^2)")}, {{P("x"), P("r")}, {P("y"), psc::Expr(0)}, {P("z"), psc::Expr(0)}}};
}

}  // namespace fx
