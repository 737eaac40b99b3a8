#pragma once

#include "psc/exprcore/assumptions.hpp"
#include "psc/exprcore/expr.hpp"

namespace psc {

/// d e / d wrt, with the chain rule through unknown functions. `wrt` is a
/// symbol, or a function atom for jet-space partials. Result is normalized
/// without assumptions.
Expr differentiate(const Expr& e, const Expr& wrt);

/// Rational-function canonical form over the atom set.
Expr normalize(const Expr& e, const AssumptionSet& assumptions = {});

/// Exact semantic equality: the canonical difference is zero.
bool equals(const Expr& a, const Expr& b, const AssumptionSet& assumptions = {});
bool is_zero(const Expr& e, const AssumptionSet& assumptions = {});

}  // namespace psc
