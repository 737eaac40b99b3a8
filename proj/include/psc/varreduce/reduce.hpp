#pragma once

#include <optional>
#include <string>
#include <vector>

#include "psc/actioninv/action.hpp"
#include "psc/tensorcalc/curvature.hpp"

namespace psc {

/// Base of a variational problem. No coordinates: fields are symbols. One
/// coordinate s: fields are unknown functions f(s) of order <= 2. More
/// coordinates: first-order densities written with jet symbols f_x, f_y, ...
struct VariationalBase {
  std::vector<Expr> coords;
  std::vector<std::string> fields;
};

/// Jet symbol for ∂_i f (one coordinate index) or ∂_i∂_j f.
Expr jet_symbol(const std::string& field, const std::vector<Expr>& coords, std::vector<int> derivs);
/// Total derivative on the base.
Expr total_derivative(const Expr& e, const VariationalBase& base, std::size_t i);

using EulerLagrangeSet = std::vector<std::pair<std::string, Expr>>;

EulerLagrangeSet euler_operator(const Expr& density, const VariationalBase& base, const AssumptionSet& A = {});

struct BoundaryForm {
  std::vector<Expr> eta;  // one component per base coordinate
  bool identity_holds = false;  // δL - Σ E δq - Σ D_i η^i = 0
  std::vector<Expr> variations;  // δq atoms in field order
};
BoundaryForm boundary_form(const Expr& density, const VariationalBase& base, const AssumptionSet& A = {});

/// η of a first-order density on the whole chart, evaluated on the field
/// ansatz (jet symbol -> expression) with the constant variation δq = 1, which
/// is invariant. Invariance means L_X η = 0 for every generator.
struct EtaCheck {
  bool checked = false;  // false when the boundary identity itself fails
  bool invariant = false;
  TensorField eta;
  std::vector<TensorField> residuals;
};
EtaCheck verify_eta_invariance(const ActionSpec& action, const Expr& density, const std::vector<std::string>& fields,
                               const ExprMap<Expr>& ansatz);

struct ChiCheck {
  std::size_t orbit_dim = 0;  // generic rank of the generators
  bool degree_ok = false, invariant = false, tangent = false;
  std::vector<TensorField> residuals;  // L_{X_i} χ
  bool pass() const { return degree_ok && invariant && tangent; }
};
/// `samples` random rational points are checked besides the symbolic test.
ChiCheck verify_chi(const ActionSpec& action, const TensorField& chi, int samples = 3, std::uint64_t seed = 7);

/// Orbit-space coordinates, the invariant functions they stand for, and a
/// slice (chart coordinates as functions of quotient coordinates) meeting
/// every orbit once.
struct QuotientSpec {
  std::vector<Expr> coords;
  std::vector<Expr> invariants;
  ExprMap<Expr> slice;
};

struct ReducedLagrangian {
  std::vector<Expr> coords;
  Expr density;  // coefficient of dq1∧…; a 0-form when coords is empty
  TensorField contracted;  // χ·λ on M
  bool basic = false;
};

ReducedLagrangian reduce_lagrangian(const TensorField& lambda, const TensorField& chi, const ActionSpec& action,
                                    const QuotientSpec& quotient);

/// Einstein–Hilbert n-form R·√|g| dx^1∧…∧dx^n.
TensorField einstein_hilbert(const CurvatureBundle& c);

struct ReducedEquation {
  std::string label;  // e.g. E44 (1-based contravariant indices) or a field name
  Index slot;
  Expr expression;
};

/// Einstein components at the free slots of the V_p* basis, dropping the
/// ones that vanish identically.
std::vector<ReducedEquation> reduced_field_equations(const CurvatureBundle& c, const std::vector<FiberVector>& vp_star);

struct Pairing {
  std::string field;
  Expr weight;
  std::optional<std::string> equation;  // none: the field has no reduced equation
};

enum class DiscrepancyStatus { Zero, Conditional, Nonzero };
const char* to_string(DiscrepancyStatus s);

struct Discrepancy {
  std::string field;
  std::optional<std::string> equation;
  Expr expression;
  DiscrepancyStatus status = DiscrepancyStatus::Zero;
  std::vector<Expr> zero_when;  // symbols whose vanishing kills the discrepancy
};

struct Comparison {
  std::vector<Discrepancy> discrepancies;
  std::vector<std::string> unenforced;  // nonzero reduced equations not implied by E(λ̂)
  bool agrees() const;
};

/// `exclude` lists symbols never reported in zero_when (reduced fields).
Comparison psc_compare(const EulerLagrangeSet& el, const std::vector<ReducedEquation>& equations,
                       const std::vector<Pairing>& pairings, const ExprMap<Expr>& slice, const AssumptionSet& A,
                       const std::vector<Expr>& exclude = {});

struct ConditionOne {
  int degree = 0;
  std::size_t dimension = 0;
  bool pass() const { return dimension > 0; }
};
struct ConditionTwo {
  std::size_t intersection_dim = 0;
  bool pass() const { return intersection_dim == 0; }
};

std::string overall_verdict(const ConditionOne& c1, const ConditionTwo& c2, const Comparison* cmp);

}  // namespace psc
