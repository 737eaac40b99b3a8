#pragma once

#include <cstdint>
#include <random>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include "psc/exprcore/assumptions.hpp"
#include "psc/exprcore/expr.hpp"

namespace psc {

class EvalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Values for free symbols and function atoms. A function atom is keyed by
/// (name, derivative order). Numeric mode may instead call `functions`,
/// which receives the argument value and the derivative order.
template <typename T>
struct BasicBindings {
  std::map<std::string, T> symbols;
  std::map<std::pair<std::string, unsigned>, T> atoms;
  std::map<std::string, std::function<T(T, unsigned)>> functions;

  BasicBindings& set(const std::string& name, T v) {
    symbols[name] = std::move(v);
    return *this;
  }
};

using Bindings = BasicBindings<Rational>;
using NumericBindings = BasicBindings<long double>;

/// Exact evaluation. Throws EvalError on unbound names, division by zero,
/// Exp/Sin/Cos, or an irrational root.
Rational eval_exact(const Expr& e, const Bindings& b);

/// Floating-point evaluation in long double.
long double eval_num(const Expr& e, const NumericBindings& b);

NumericBindings to_numeric(const Bindings& b);

enum class ProbableEquality { ProbablyEqual, Unequal };

struct ProbableEqualityOptions {
  int trials = 20;
  std::uint64_t seed = 0x5eed;
  long max_denominator = 10000;
  double tolerance = 1e-9;
};

/// Random-point comparison used as an independent check of equals(). Points
/// respect the sign declarations (rejection sampling).
ProbableEquality probably_equal(const Expr& a, const Expr& b, const AssumptionSet& assumptions = {},
                                const ProbableEqualityOptions& options = {});

/// Draws a random point for every free symbol and function atom of `e`
/// satisfying `assumptions`; returns false if none was found.
bool random_point(const Expr& e, const AssumptionSet& assumptions, std::mt19937_64& rng, long max_denominator,
                  Bindings& out);

}  // namespace psc
