#include "psc/exprcore/assumptions.hpp"

#include <stdexcept>

#include "psc/exprcore/ratfun.hpp"

namespace psc {

const char* to_string(Sign s) {
  switch (s) {
    case Sign::Positive:
      return "positive";
    case Sign::Negative:
      return "negative";
    case Sign::Nonzero:
      return "nonzero";
  }
  return "?";
}

namespace {

Sign flip(Sign s) {
  if (s == Sign::Positive) return Sign::Negative;
  if (s == Sign::Negative) return Sign::Positive;
  return s;
}

}  // namespace

void AssumptionSet::declare(const Expr& e, Sign sign) {
  Normalizer n;
  const RatFun r = n.from_expr(e);
  const Expr canon = n.to_expr(r);
  if (r.is_zero()) throw std::invalid_argument("cannot declare a sign for zero");
  if (r.is_constant()) {
    const Rational v = r.num.constant_value();
    if ((sign == Sign::Positive && v < 0) || (sign == Sign::Negative && v > 0))
      throw std::invalid_argument("contradictory sign for constant " + to_string(canon));
    return;
  }
  for (auto& [old, s] : entries_) {
    const RatFun o = n.from_expr(old);
    if ((o - r).is_zero()) {
      if (s == sign) return;
      if (s == Sign::Nonzero) {
        s = sign;
        return;
      }
      if (sign == Sign::Nonzero) return;
      throw std::invalid_argument("contradictory assumptions on " + to_string(canon));
    }
    if ((o + r).is_zero()) {
      if (s == flip(sign)) return;
      if (s == Sign::Nonzero) {
        s = flip(sign);
        return;
      }
      if (sign == Sign::Nonzero) return;
      throw std::invalid_argument("contradictory assumptions on " + to_string(canon));
    }
  }
  entries_.emplace_back(canon, sign);
}

std::optional<Sign> AssumptionSet::sign_of(const Expr& e) const {
  Normalizer n;
  const RatFun r = n.from_expr(e);
  for (const auto& [old, s] : entries_) {
    const RatFun o = n.from_expr(old);
    if ((o - r).is_zero()) return s;
    if ((o + r).is_zero()) return flip(s);
  }
  return std::nullopt;
}

}  // namespace psc
