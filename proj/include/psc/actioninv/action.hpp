#pragma once

#include <memory>
#include <string>
#include <vector>

#include "psc/exprcore/linalg.hpp"
#include "psc/liecoh/lie.hpp"
#include "psc/tensorcalc/tensor.hpp"

namespace psc {

struct ActionSpec {
  ChartRef chart;
  std::vector<TensorField> generators;
};

/// A point of the chart. Coordinates map to exact values or opaque symbols
/// (u0, x0, ...); `atoms` replaces function values at the point by symbols,
/// e.g. P(u0) -> P0 and diff(P(u0),u0,1) -> P0p.
struct PointSpec {
  ExprMap<Expr> coords;
  ExprMap<Expr> atoms;
  AssumptionSet assumptions;
};

/// Chart assumptions carried to the point plus the point's own.
AssumptionSet point_assumptions(const ActionSpec& action, const PointSpec& p);
Expr evaluate_at(const Expr& e, const PointSpec& p, const AssumptionSet& assumptions);

struct OrbitDimension {
  std::size_t dimension = 0;
  std::vector<Expr> conditions;
};
OrbitDimension orbit_dimension(const ActionSpec& action, const PointSpec& p);

struct IsotropyData {
  std::vector<std::vector<Expr>> basis;  // coefficients over the generators
  std::vector<ExprMatrix> linearizations;  // A^a_b = ∂_b V^a at the point
  bool representation_checked = false;     // A([V,W]) = -[A(V), A(W)] verified
  std::vector<Expr> conditions;
};
IsotropyData isotropy_subalgebra(const ActionSpec& action, const PointSpec& p);

/// Linear model of Vert_p(E) with the induced isotropy action.
class VerticalModel {
 public:
  virtual ~VerticalModel() = default;
  virtual std::string name() const = 0;
  virtual std::size_t fiber_dim(std::size_t n) const = 0;
  /// Matrix of Q -> A·Q on fiber coordinates.
  virtual Matrix action(const Matrix& A) const = 0;
  /// Matrix of W -> A·W on dual fiber coordinates.
  virtual Matrix dual_action(const Matrix& A) const = 0;
  /// ⟨W, Q⟩ = Σ_i weight_i W_i Q_i.
  virtual std::vector<Rational> pairing_weights(std::size_t n) const = 0;
  virtual std::string element_string(const std::vector<Expr>& coeffs, const Chart& chart, bool dual) const = 0;
};

/// Symmetric (0,2) tensors; coordinates Q_ab for a <= b, basis dx^a⊙dx^b
/// (a<b, no ½) and dx^a⊗dx^a.
class MetricBundle : public VerticalModel {
 public:
  std::string name() const override { return "metric"; }
  std::size_t fiber_dim(std::size_t n) const override { return n * (n + 1) / 2; }
  Matrix action(const Matrix& A) const override;
  Matrix dual_action(const Matrix& A) const override;
  std::vector<Rational> pairing_weights(std::size_t n) const override;
  std::string element_string(const std::vector<Expr>& coeffs, const Chart& chart, bool dual) const override;
  static std::vector<std::pair<int, int>> slots(std::size_t n);
};

class ScalarBundle : public VerticalModel {
 public:
  std::string name() const override { return "scalar"; }
  std::size_t fiber_dim(std::size_t) const override { return 1; }
  Matrix action(const Matrix&) const override { return Matrix(1, 1); }
  Matrix dual_action(const Matrix&) const override { return Matrix(1, 1); }
  std::vector<Rational> pairing_weights(std::size_t) const override { return {Rational(1)}; }
  std::string element_string(const std::vector<Expr>& coeffs, const Chart&, bool) const override;
};

std::shared_ptr<const VerticalModel> make_vertical_model(const std::string& name);

using FiberVector = std::vector<Expr>;

struct FiberBasis {
  std::vector<FiberVector> vp;            // V_p
  std::vector<FiberVector> vp_star;       // V_p*
  std::vector<FiberVector> annihilator;   // V_p^0
  std::vector<FiberVector> intersection;  // V_p* ∩ V_p^0
  bool pass = true;
  std::vector<Expr> conditions;
};

std::vector<FiberVector> invariant_fiber(const ActionSpec& action, const PointSpec& p, const VerticalModel& model,
                                         const IsotropyData& iso, bool dual, std::vector<Expr>* conditions = nullptr);
std::vector<FiberVector> invariant_metric_fiber(const ActionSpec& action, const PointSpec& p);

FiberBasis condition2_check(const ActionSpec& action, const PointSpec& p, const VerticalModel& model);
FiberBasis condition2_check(const ActionSpec& action, const PointSpec& p);

/// True if span(a) == span(b) over the point's field.
bool same_span(const std::vector<FiberVector>& a, const std::vector<FiberVector>& b, const AssumptionSet& A);

struct AnsatzCheck {
  bool invariant = true;
  std::vector<TensorField> residuals;  // L_{X_i} T
};
AnsatzCheck verify_invariant_ansatz(const ActionSpec& action, const TensorField& T);

/// Fiber coordinates of a symmetric (0,2) tensor evaluated at the point.
FiberVector metric_at_point(const TensorField& g, const PointSpec& p, const AssumptionSet& A);

}  // namespace psc
