#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "psc/exprcore/expr.hpp"

namespace psc {

enum class Sign { Positive, Negative, Nonzero };

const char* to_string(Sign s);

/// Sign declarations such as d > 0 or 4*c*a - b^2 > 0.
class AssumptionSet {
 public:
  AssumptionSet() = default;

  /// Throws std::invalid_argument when the declaration contradicts an
  /// existing one (e.g. x > 0 and x < 0, or x > 0 and -x > 0).
  void declare(const Expr& e, Sign sign);
  void positive(const Expr& e) { declare(e, Sign::Positive); }

  /// Sign of `e` if `e` or `-e` was declared (structural match after
  /// normalization without assumptions).
  std::optional<Sign> sign_of(const Expr& e) const;

  const std::vector<std::pair<Expr, Sign>>& entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

 private:
  std::vector<std::pair<Expr, Sign>> entries_;
};

}  // namespace psc
