#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "psc/exprcore/assumptions.hpp"
#include "psc/exprcore/expr.hpp"
#include "psc/exprcore/ratfun.hpp"

namespace psc {

struct Chart {
  std::vector<Expr> coords;
  AssumptionSet assumptions;

  Chart() = default;
  Chart(std::vector<Expr> c, AssumptionSet a);
  std::size_t dim() const { return coords.size(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
};
using ChartRef = std::shared_ptr<const Chart>;

ChartRef make_chart(const std::vector<std::string>& coords, AssumptionSet assumptions = {});

enum class Symmetry { None, Symmetric, Antisymmetric };

using Index = std::vector<int>;

/**
 * Components of an (up, down) tensor in the chart's coordinate basis.
 * Symmetric and antisymmetric tensors (all indices) store only ordered
 * multi-indices; a form ω = Σ_{i<j} ω_ij dx^i∧dx^j stores ω_ij.
 */
class TensorField {
 public:
  TensorField() = default;
  TensorField(ChartRef chart, int up, int down, Symmetry sym = Symmetry::None);

  static TensorField scalar(ChartRef chart, const Expr& value);
  static TensorField vector(ChartRef chart, const std::vector<Expr>& components);
  static TensorField form(ChartRef chart, int degree) { return TensorField(std::move(chart), 0, degree, Symmetry::Antisymmetric); }
  static TensorField multivector(ChartRef chart, int degree) {
    return TensorField(std::move(chart), degree, 0, Symmetry::Antisymmetric);
  }
  static TensorField symmetric2(ChartRef chart, bool contravariant = false) {
    return TensorField(std::move(chart), contravariant ? 2 : 0, contravariant ? 0 : 2, Symmetry::Symmetric);
  }

  const ChartRef& chart() const { return chart_; }
  std::size_t dim() const { return chart_->dim(); }
  int up() const { return up_; }
  int down() const { return down_; }
  int rank() const { return up_ + down_; }
  Symmetry symmetry() const { return sym_; }

  /// Component at any multi-index (symmetry applied, zero if absent).
  Expr get(const Index& idx) const;
  void set(const Index& idx, const Expr& value);
  /// Stored nonzero components keyed by canonical multi-index.
  const std::map<Index, Expr>& components() const { return comps_; }
  bool is_zero() const { return comps_.empty(); }

  /// Canonical multi-indices for the declared symmetry.
  std::vector<Index> canonical_indices() const;

 private:
  ChartRef chart_;
  int up_ = 0, down_ = 0;
  Symmetry sym_ = Symmetry::None;
  std::map<Index, Expr> comps_;
};

/// Canonical form of an index under a symmetry; sign is 0 for a vanishing
/// antisymmetric index.
Index canonical_index(const Index& idx, Symmetry sym, int& sign);

/// All k-subsets of {0..n-1} in lexicographic order.
std::vector<Index> ordered_subsets(int n, int k);

TensorField lie_bracket(const TensorField& X, const TensorField& Y);
TensorField exterior_derivative(const TensorField& omega);
/// Wedge of two antisymmetric tensors of the same kind (forms or multivectors).
TensorField wedge(const TensorField& a, const TensorField& b);
TensorField wedge(const std::vector<TensorField>& factors);
/// (χ·ω)(v…) = ω(X_1,…,X_l, v…) for χ = X_1∧…∧X_l, extended linearly.
TensorField interior_product(const TensorField& chi, const TensorField& omega);
TensorField lie_derivative(const TensorField& X, const TensorField& T);
TensorField tensor_product(const TensorField& a, const TensorField& b);

TensorField add(const TensorField& a, const TensorField& b);
TensorField scale(const Expr& c, const TensorField& a);
TensorField normalized(const TensorField& t);
bool equals(const TensorField& a, const TensorField& b);

/// Substitutes expressions for symbols in every component.
TensorField substitute(const TensorField& t, const ExprMap<Expr>& values);

/// Full dense component array over the rational-function field, row-major.
std::vector<RatFun> dense(const TensorField& t, Normalizer& n);
TensorField from_dense(const ChartRef& chart, int up, int down, Symmetry sym, const std::vector<RatFun>& d,
                       Normalizer& n);

std::string index_string(const Index& idx);

/// "c1*b1 - c2*b2" rendering of Σ c_i b_i with parenthesized sums; "0" if empty.
std::string combination_string(const std::vector<std::pair<Expr, std::string>>& terms);

}  // namespace psc
