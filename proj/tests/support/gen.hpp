#pragma once

#include <random>

#include "psc/exprcore/eval.hpp"
#include "psc/exprcore/expr.hpp"

namespace fuzz {

using psc::Expr;
using psc::NumericBindings;
using psc::Rational;

// Smooth random expressions in x, y, z: divisions only by 1 + e^2 or exp(e),
// roots only of 1 + e^2.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  Expr expr(int depth) {
    if (depth == 0) return leaf();
    switch (pick(9)) {
      case 0:
      case 1: return expr(depth - 1) + expr(depth - 1);
      case 2: return expr(depth - 1) - expr(depth - 1);
      case 3:
      case 4: return expr(depth - 1) * expr(depth - 1);
      case 5: {
        const Expr b = expr(depth - 1);
        return expr(depth - 1) / (Expr(1) + b * b);
      }
      case 6: return pow(expr(depth - 1), Rational(pick(3) + 1));
      case 7: {
        const Expr b = leaf();
        return pick(2) ? exp(b / Expr(2)) : sqrt(Expr(1) + b * b);
      }
      default: return pick(2) ? sin(expr(depth - 1)) : cos(leaf());
    }
  }

  Expr leaf() {
    static const char* names[] = {"x", "y", "z"};
    if (pick(3) == 0) return Expr(static_cast<long>(pick(7)) - 3);
    return Expr::symbol(names[pick(3)]);
  }

  NumericBindings point() {
    std::uniform_real_distribution<double> u(-1.5, 1.5);
    NumericBindings b;
    b.set("x", u(rng_)).set("y", u(rng_)).set("z", u(rng_));
    return b;
  }

  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }
  std::mt19937_64& rng() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace fuzz
