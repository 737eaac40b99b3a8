#pragma once

#include <string>
#include <vector>

#include "psc/exprcore/assumptions.hpp"
#include "psc/exprcore/expr.hpp"
#include "psc/exprcore/linalg.hpp"
#include "psc/tensorcalc/tensor.hpp"

namespace psc {

/// Structure constants with [e_b, e_c] = c^a_{bc} e_a, stored densely as
/// c[(a*n + b)*n + c]. The dual basis satisfies dθ^a = -½ c^a_{bc} θ^b∧θ^c.
struct LieAlgebra {
  int n = 0;
  std::vector<std::string> labels;
  std::vector<Expr> c;
  AssumptionSet assumptions;
  std::string provenance;

  const Expr& constant(int a, int b, int cc) const { return c[(static_cast<std::size_t>(a) * n + b) * n + cc]; }
};

/// From an n×n×n array (index order a, b, c); checks antisymmetry in b, c.
LieAlgebra lie_algebra_from_constants(std::vector<Expr> constants, int n, AssumptionSet assumptions = {},
                                      std::vector<std::string> labels = {});

/// Brackets the generators on the chart and expresses each [X_b, X_c] as a
/// constant combination of the X_a. Throws std::invalid_argument if the
/// generators are dependent over constants or do not close.
LieAlgebra lie_algebra_from_fields(const std::vector<TensorField>& generators, const ChartRef& chart);

struct JacobiResult {
  bool holds = true;
  std::vector<Expr> residuals;  // nonzero Σ c^e_{ad}c^d_{bc} + cyclic, one per failing (e, a<b<c)
};
JacobiResult jacobi_check(const LieAlgebra& L);

enum class UnimodularVerdict { Unimodular, NotUnimodular, Conditional };
const char* to_string(UnimodularVerdict v);

struct UnimodularResult {
  UnimodularVerdict verdict = UnimodularVerdict::Unimodular;
  std::vector<Expr> traces;  // trace(ad e_b) for every b
};
UnimodularResult is_unimodular(const LieAlgebra& L);

/// Span of coefficient vectors over the parent basis.
struct Subalgebra {
  std::vector<std::vector<Expr>> basis;
  std::size_t dim() const { return basis.size(); }
};

/// Validates independence and closure; throws std::invalid_argument.
Subalgebra make_subalgebra(const LieAlgebra& L, std::vector<std::vector<Expr>> basis);

/// Bracket of two elements given by coefficients.
std::vector<Expr> bracket(const LieAlgebra& L, const std::vector<Expr>& x, const std::vector<Expr>& y);

/// A k-cochain is a coefficient vector over ordered_subsets(n, k):
/// ω = Σ_{I} ω_I θ^I with θ^I = θ^{i1}∧…∧θ^{ik}.
using Cochain = std::vector<Expr>;

std::vector<Cochain> relative_cochain_basis(const LieAlgebra& L, const Subalgebra& h, int k,
                                            std::vector<Expr>* conditions = nullptr);

/// Matrix of d: Λ^k → Λ^{k+1} on the full exterior algebra, in the ordered
/// subset bases (rows: degree k+1, columns: degree k).
Matrix ce_differential(const LieAlgebra& L, int k, Normalizer& n);

/// d applied to one cochain.
Cochain ce_apply(const LieAlgebra& L, const Cochain& omega, int k);

using ExprMatrix = std::vector<std::vector<Expr>>;

struct CohomologyResult {
  int degree = 0;
  std::vector<Cochain> cochains;  // basis of Ω^k
  ExprMatrix d_in;                // Ω^{k-1} → Ω^k in the relative bases (rows index Ω^k)
  ExprMatrix d_out;               // Ω^k → Ω^{k+1}
  std::size_t rank_in = 0, rank_out = 0;
  std::size_t dimension = 0;
  std::vector<Expr> conditions;  // pivot factors whose vanishing may change a rank
  std::vector<Cochain> representatives;
};

CohomologyResult relative_cohomology(const LieAlgebra& L, const Subalgebra& h, int k);

/// True if d∘d = 0 exactly on Λ^k for every k.
bool d_squared_zero(const LieAlgebra& L);

LieAlgebra substitute(const LieAlgebra& L, const ExprMap<Expr>& values);
Subalgebra substitute(const Subalgebra& h, const ExprMap<Expr>& values);

/// New basis e'_i = Σ_j M_ij e_j.
LieAlgebra change_basis(const LieAlgebra& L, const ExprMatrix& M);

/// θ1∧θ2 style rendering of a cochain.
std::string cochain_string(const Cochain& omega, int n, int k);

}  // namespace psc
