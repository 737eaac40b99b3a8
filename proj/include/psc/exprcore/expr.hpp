#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "psc/exprcore/rational.hpp"

namespace psc {

/// Node kinds, listed in total-order rank.
enum class Kind : std::uint8_t { Number, Symbol, FnApp, Exp, Sin, Cos, Pow, Mul, Add };

/// Informational role of a symbol. Identity of a symbol is its name only.
enum class SymbolRole : std::uint8_t { Coordinate, Parameter, ReducedField };

struct Node;

/**
 * Immutable symbolic expression.
 *
 * Every constructor applies the light canonical rules: Add/Mul operands are
 * flattened and sorted, numeric coefficients are merged, like terms and like
 * powers are collected, and the degenerate forms x^0, 1*x, 0*x and x+0 are
 * removed. Full rational-function normalization lives in normalize().
 */
class Expr {
 public:
  Expr();                            // zero
  Expr(long value);                  // NOLINT(google-explicit-constructor)
  Expr(int value) : Expr(long{value}) {}  // NOLINT(google-explicit-constructor)
  Expr(const Rational& value);       // NOLINT(google-explicit-constructor)

  static Expr symbol(const std::string& name, SymbolRole role = SymbolRole::Parameter);
  /// Unknown univariate function `name` applied to `arg`, differentiated `order` times.
  static Expr function(const std::string& name, Expr arg, unsigned order = 0);

  Kind kind() const;
  bool is(Kind k) const { return kind() == k; }
  bool is_number() const { return is(Kind::Number); }
  bool is_symbol() const { return is(Kind::Symbol); }
  bool is_zero() const;
  bool is_one() const;

  /// Number value (Number nodes only).
  const Rational& number() const;
  /// Exponent (Pow nodes only).
  const Rational& exponent() const;
  /// Symbol or function name.
  const std::string& name() const;
  SymbolRole role() const;
  /// Derivative order (FnApp only).
  unsigned order() const;
  /// Operands of Add/Mul; single argument of Exp/Sin/Cos/FnApp; base of Pow.
  std::span<const Expr> args() const;
  const Expr& arg() const { return args()[0]; }
  const Expr& base() const { return args()[0]; }

  std::size_t hash() const;
  const Node* node() const { return node_.get(); }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  friend struct ExprFactory;
  std::shared_ptr<const Node> node_;
};

struct Node {
  Kind kind = Kind::Number;
  SymbolRole role = SymbolRole::Parameter;
  unsigned order = 0;
  std::size_t hash = 0;
  Rational value;
  std::string name;
  std::vector<Expr> args;
};

/// Total order on expressions: kind rank first, then payload.
int compare(const Expr& a, const Expr& b);

struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};
struct ExprHash {
  std::size_t operator()(const Expr& e) const { return e.hash(); }
};

template <typename V>
using ExprMap = std::map<Expr, V, ExprLess>;

Expr add(std::vector<Expr> operands);
Expr mul(std::vector<Expr> operands);
Expr pow(const Expr& base, const Rational& exponent);
Expr sqrt(const Expr& e);
Expr exp(const Expr& e);
Expr sin(const Expr& e);
Expr cos(const Expr& e);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
inline Expr& operator+=(Expr& a, const Expr& b) { return a = a + b; }
inline Expr& operator-=(Expr& a, const Expr& b) { return a = a - b; }
inline Expr& operator*=(Expr& a, const Expr& b) { return a = a * b; }

/// Splits a term into numeric coefficient and remaining body; the body of a
/// number is 1.
std::pair<Rational, Expr> split_coefficient(const Expr& term);

/// Printer emitting the parser's grammar.
std::string to_string(const Expr& e);
std::ostream& operator<<(std::ostream& os, const Expr& e);

/// True if `needle` occurs as a subtree of `e`.
bool contains(const Expr& e, const Expr& needle);
/// True if any symbol with one of the given names occurs in `e`.
bool depends_on_any(const Expr& e, std::span<const Expr> symbols);
/// Collects free symbols and function atoms (FnApp nodes) of `e`.
void collect_atoms(const Expr& e, ExprMap<bool>& symbols, ExprMap<bool>& functions);

/// Structural substitution of whole subtrees, rebuilt through the light
/// canonical constructors.
Expr substitute(const Expr& e, const ExprMap<Expr>& replacements);

/// Rebuilds a node of the same kind as `like` with new arguments.
Expr rebuild(const Expr& like, std::vector<Expr> args);

}  // namespace psc
