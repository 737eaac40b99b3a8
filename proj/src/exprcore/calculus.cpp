#include "psc/exprcore/calculus.hpp"

#include "psc/exprcore/ratfun.hpp"

namespace psc {

Expr differentiate(const Expr& e, const Expr& wrt) {
  Normalizer n;
  return n.to_expr(n.diff(n.from_expr(e), wrt));
}

Expr normalize(const Expr& e, const AssumptionSet& assumptions) {
  Normalizer n(assumptions);
  return n.normalize(e);
}

bool equals(const Expr& a, const Expr& b, const AssumptionSet& assumptions) {
  if (a == b) return true;
  Normalizer n(assumptions);
  return (n.from_expr(a) - n.from_expr(b)).is_zero();
}

bool is_zero(const Expr& e, const AssumptionSet& assumptions) {
  Normalizer n(assumptions);
  return n.from_expr(e).is_zero();
}

}  // namespace psc
