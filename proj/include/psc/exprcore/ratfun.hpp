#pragma once

// Rational functions over an interned atom set: the engine behind
// normalize() and every exact linear-algebra computation.

#include <cstdint>
#include <memory>
#include <unordered_map>
#include <utility>
#include <vector>

#include "psc/exprcore/assumptions.hpp"
#include "psc/exprcore/expr.hpp"

namespace psc {

class Polynomial;

enum class AtomKind : std::uint8_t { Symbol, Function, Exp, Sin, Cos, Root };

/**
 * Indeterminate of the polynomial ring. Atoms are interned process-wide and
 * never freed, so pointer identity is atom identity.
 *
 * Exp atoms carry a monic argument m/F and may appear with rational exponent
 * (exp(c*m/F) = atom^c). Root atoms stand for radicand^(1/index) and appear
 * with exponent in [0, index).
 */
struct Atom {
  AtomKind kind = AtomKind::Symbol;
  std::uint64_t serial = 0;
  Expr expr;      // the atom as an expression, e.g. sin(t) or (4*a*c - b^2)^(1/2)
  Expr argument;  // Function/Exp/Sin/Cos argument; Root radicand
  std::int64_t index = 0;
  std::shared_ptr<const Polynomial> radicand;
};
using AtomRef = const Atom*;

/// Laurent monomial: (atom, exponent) pairs sorted by atom serial.
class Monomial {
 public:
  using Entry = std::pair<AtomRef, SmallRational>;
  Monomial() = default;
  explicit Monomial(std::vector<Entry> entries) : e_(std::move(entries)) {}
  static Monomial of(AtomRef a, SmallRational e = 1);

  const std::vector<Entry>& entries() const { return e_; }
  bool empty() const { return e_.empty(); }
  SmallRational exponent_of(AtomRef a) const;

  friend Monomial operator*(const Monomial& a, const Monomial& b);
  Monomial inverse() const;
  friend bool operator==(const Monomial& a, const Monomial& b) { return a.e_ == b.e_; }
  /// Lex order by atom serial.
  friend int compare(const Monomial& a, const Monomial& b);

 private:
  std::vector<Entry> e_;
};

struct Term {
  Monomial mono;
  Rational coeff;
};

/// Laurent polynomial with rational coefficients, terms sorted descending.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(const Rational& c);
  explicit Polynomial(Monomial m, Rational c = Rational(1));
  static Polynomial from_terms(std::vector<Term> terms);  // sorts and merges

  const std::vector<Term>& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const;
  Rational constant_value() const;  // requires is_constant()
  bool is_monomial() const { return terms_.size() == 1; }
  bool contains_atom(AtomRef a) const;

  friend Polynomial operator+(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator-(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  Polynomial operator-() const;
  Polynomial scaled(const Rational& c) const;
  Polynomial times(const Monomial& m) const;
  friend bool operator==(const Polynomial& a, const Polynomial& b);
  friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }
  std::size_t hash() const;

  /// Formal partial derivative with respect to an atom.
  Polynomial partial(AtomRef a) const;

 private:
  std::vector<Term> terms_;
};

/// Applies the side relations r^index = radicand and cos^2 = 1 - sin^2.
Polynomial reduce(Polynomial p);
/// Exact division in the free ring; returns false when not exact.
bool divide_exact(const Polynomial& num, const Polynomial& den, Polynomial& quotient);

using FactorRef = std::shared_ptr<const Polynomial>;

/**
 * num / prod(den_i ^ mult_i) with each den_i a primitive polynomial (no
 * monomial content, coprime integer coefficients, canonical sign).
 */
class RatFun {
 public:
  RatFun() = default;
  RatFun(const Rational& c) : num(c) {}  // NOLINT(google-explicit-constructor)
  RatFun(long c) : num(Rational(c)) {}   // NOLINT(google-explicit-constructor)
  explicit RatFun(Polynomial p) : num(std::move(p)) {}

  Polynomial num;
  std::vector<std::pair<FactorRef, int>> den;

  bool is_zero() const { return num.is_zero(); }
  bool is_constant() const { return den.empty() && num.is_constant(); }
  bool is_polynomial() const { return den.empty(); }
  /// Number of terms in numerator and factors, a crude size measure.
  std::size_t weight() const;

  friend RatFun operator+(const RatFun& a, const RatFun& b);
  friend RatFun operator-(const RatFun& a, const RatFun& b);
  friend RatFun operator*(const RatFun& a, const RatFun& b);
  RatFun operator-() const;
  RatFun& operator+=(const RatFun& b) { return *this = *this + b; }
  RatFun& operator*=(const RatFun& b) { return *this = *this * b; }
};

/// Sum of many terms with a single common-denominator pass.
RatFun sum(const std::vector<RatFun>& terms);

/// The set of atoms that `r` depends on (numerator and denominator).
std::vector<AtomRef> atoms_of(const RatFun& r);

/**
 * Conversion and field operations that need the sign assumptions: roots,
 * inverses (factor sign normalization) and expression round trips.
 * Instances cache conversions and are not thread-safe; create one per task.
 */
class Normalizer {
 public:
  explicit Normalizer(AssumptionSet assumptions = {});

  const AssumptionSet& assumptions() const { return assumptions_; }

  RatFun from_expr(const Expr& e);
  Expr to_expr(const RatFun& r) const;
  Expr to_expr(const Polynomial& p) const;
  Expr normalize(const Expr& e) { return to_expr(from_expr(e)); }

  RatFun atom(const Expr& symbol_or_function);
  RatFun inverse(const RatFun& r);
  RatFun div(const RatFun& a, const RatFun& b) { return a * inverse(b); }
  RatFun pow(const RatFun& r, const Rational& e);
  RatFun exp(const RatFun& r);
  RatFun sin(const RatFun& r);
  RatFun cos(const RatFun& r);
  RatFun function(const std::string& name, const RatFun& arg, unsigned order);

  /// Derivative with respect to a symbol (total, chain rule through unknown
  /// functions) or with respect to a function atom (jet partial, other
  /// derivative orders held fixed).
  RatFun diff(const RatFun& r, const Expr& wrt);

  /// Substitutes symbols/function atoms and renormalizes.
  RatFun substitute(const RatFun& r, const ExprMap<Expr>& replacements);

  /// True if `r` provably does not depend on any of the given symbols.
  bool independent_of(const RatFun& r, std::span<const Expr> symbols);

  /// Positive if declared or intrinsically positive (exp, even roots).
  bool atom_positive(AtomRef a) const;
  bool atom_negative(AtomRef a) const;

  /// Splits p = c * m * P with P primitive and sign-normalized.
  void split_content(const Polynomial& p, Rational& c, Monomial& m, Polynomial& prim) const;

 private:
  RatFun root_power(const Polynomial& radicand, std::int64_t index, std::int64_t power);
  RatFun monomial_inverse(const Monomial& m);
  RatFun atom_derivative(AtomRef a, const Expr& wrt);
  bool matches_declared(const Polynomial& p, Sign s) const;

  AssumptionSet assumptions_;
  std::vector<std::pair<Polynomial, Sign>> declared_;
  std::unordered_map<const Node*, std::pair<Expr, RatFun>> memo_;
  std::unordered_map<std::string, RatFun> deriv_memo_;
};

/// Leading coefficient under the expression-order term ordering; used for
/// deterministic sign choices.
Rational canonical_leading_coefficient(const Polynomial& p);

}  // namespace psc
