#include "psc/exprcore/eval.hpp"

#include <cmath>

namespace psc {

namespace {

Rational exact_pow(const Rational& base, const Rational& e) {
  if (base == 0) {
    if (e < 0) throw EvalError("division by zero");
    return Rational(0);
  }
  const Integer p = e.get_num();
  const Integer q = e.get_den();
  if (!p.fits_slong_p() || !q.fits_ulong_p()) throw EvalError("exponent too large");
  Rational b = base;
  if (q != 1) {
    Integer rn, rd;
    if (!exact_root(b.get_num(), q.get_ui(), rn) || !exact_root(b.get_den(), q.get_ui(), rd))
      throw EvalError("irrational root in exact evaluation");
    b = Rational(rn, rd);
    b.canonicalize();
  }
  long n = p.get_si();
  if (n < 0) {
    b = 1 / b;
    n = -n;
  }
  Rational out(1);
  Integer num, den;
  mpz_pow_ui(num.get_mpz_t(), b.get_num_mpz_t(), static_cast<unsigned long>(n));
  mpz_pow_ui(den.get_mpz_t(), b.get_den_mpz_t(), static_cast<unsigned long>(n));
  out = Rational(num, den);
  out.canonicalize();
  return out;
}

}  // namespace

Rational eval_exact(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case Kind::Number:
      return e.number();
    case Kind::Symbol: {
      auto it = b.symbols.find(e.name());
      if (it == b.symbols.end()) throw EvalError("unbound symbol " + e.name());
      return it->second;
    }
    case Kind::FnApp: {
      auto it = b.atoms.find({e.name(), e.order()});
      if (it == b.atoms.end()) throw EvalError("unbound function atom " + to_string(e));
      return it->second;
    }
    case Kind::Exp: {
      const Rational a = eval_exact(e.arg(), b);
      if (a == 0) return Rational(1);
      throw EvalError("exp in exact evaluation");
    }
    case Kind::Sin:
    case Kind::Cos: {
      const Rational a = eval_exact(e.arg(), b);
      if (a == 0) return Rational(e.is(Kind::Cos) ? 1 : 0);
      throw EvalError("trigonometric function in exact evaluation");
    }
    case Kind::Pow:
      return exact_pow(eval_exact(e.base(), b), e.exponent());
    case Kind::Mul: {
      Rational r(1);
      for (const Expr& a : e.args()) r *= eval_exact(a, b);
      return r;
    }
    case Kind::Add: {
      Rational r(0);
      for (const Expr& a : e.args()) r += eval_exact(a, b);
      return r;
    }
  }
  return Rational(0);
}

long double eval_num(const Expr& e, const NumericBindings& b) {
  switch (e.kind()) {
    case Kind::Number:
      return static_cast<long double>(e.number().get_num().get_d()) /
             static_cast<long double>(e.number().get_den().get_d());
    case Kind::Symbol: {
      auto it = b.symbols.find(e.name());
      if (it == b.symbols.end()) throw EvalError("unbound symbol " + e.name());
      return it->second;
    }
    case Kind::FnApp: {
      auto it = b.atoms.find({e.name(), e.order()});
      if (it != b.atoms.end()) return it->second;
      auto fn = b.functions.find(e.name());
      if (fn == b.functions.end()) throw EvalError("unbound function atom " + to_string(e));
      return fn->second(eval_num(e.arg(), b), e.order());
    }
    case Kind::Exp:
      return std::exp(eval_num(e.arg(), b));
    case Kind::Sin:
      return std::sin(eval_num(e.arg(), b));
    case Kind::Cos:
      return std::cos(eval_num(e.arg(), b));
    case Kind::Pow: {
      const long double base = eval_num(e.base(), b);
      const Rational& r = e.exponent();
      const long double ex = eval_num(Expr(r), b);
      if (base == 0 && r < 0) throw EvalError("division by zero");
      if (base < 0) {
        if (r.get_den() % 2 == 0) throw EvalError("even root of a negative number");
        const long double m = std::pow(-base, ex);
        return (r.get_num() % 2 == 0) ? m : -m;
      }
      return std::pow(base, ex);
    }
    case Kind::Mul: {
      long double r = 1;
      for (const Expr& a : e.args()) r *= eval_num(a, b);
      return r;
    }
    case Kind::Add: {
      long double r = 0;
      for (const Expr& a : e.args()) r += eval_num(a, b);
      return r;
    }
  }
  return 0;
}

NumericBindings to_numeric(const Bindings& b) {
  NumericBindings n;
  auto conv = [](const Rational& r) {
    return static_cast<long double>(r.get_num().get_d()) / static_cast<long double>(r.get_den().get_d());
  };
  for (const auto& [k, v] : b.symbols) n.symbols[k] = conv(v);
  for (const auto& [k, v] : b.atoms) n.atoms[k] = conv(v);
  return n;
}

namespace {

// Sign of e at a point: exact when possible.
int sign_at(const Expr& e, const Bindings& b) {
  try {
    const Rational v = eval_exact(e, b);
    return sgn(v);
  } catch (const EvalError&) {
  }
  const long double v = eval_num(e, to_numeric(b));
  if (!std::isfinite(v)) throw EvalError("non-finite value");
  return v > 0 ? 1 : (v < 0 ? -1 : 0);
}

bool satisfies(const AssumptionSet& a, const Bindings& b) {
  for (const auto& [e, s] : a.entries()) {
    int sg;
    try {
      sg = sign_at(e, b);
    } catch (const EvalError&) {
      return false;
    }
    if (sg == 0) return false;
    if (s == Sign::Positive && sg < 0) return false;
    if (s == Sign::Negative && sg > 0) return false;
  }
  return true;
}

}  // namespace

bool random_point(const Expr& e, const AssumptionSet& assumptions, std::mt19937_64& rng, long max_denominator,
                  Bindings& out) {
  ExprMap<bool> syms, fns;
  collect_atoms(e, syms, fns);
  for (const auto& [x, s] : assumptions.entries()) collect_atoms(x, syms, fns);
  std::uniform_int_distribution<long> den(1, max_denominator);
  auto draw = [&]() {
    const long d = den(rng);
    std::uniform_int_distribution<long> num(-3 * d, 3 * d);
    long n = 0;
    while (n == 0) n = num(rng);
    Rational r(n, d);
    r.canonicalize();
    return r;
  };
  for (int attempt = 0; attempt < 500; ++attempt) {
    Bindings b;
    for (const auto& [s, _] : syms) {
      Rational v = draw();
      const auto sign = assumptions.sign_of(s);
      if (sign == Sign::Positive) v = abs(v);
      if (sign == Sign::Negative) v = -abs(v);
      b.symbols[s.name()] = v;
    }
    for (const auto& [f, _] : fns) {
      Rational v = draw();
      const auto sign = assumptions.sign_of(f);
      if (sign == Sign::Positive) v = abs(v);
      if (sign == Sign::Negative) v = -abs(v);
      b.atoms[{f.name(), f.order()}] = v;
    }
    if (!satisfies(assumptions, b)) continue;
    out = std::move(b);
    return true;
  }
  return false;
}

ProbableEquality probably_equal(const Expr& a, const Expr& b, const AssumptionSet& assumptions,
                                const ProbableEqualityOptions& options) {
  std::mt19937_64 rng(options.seed);
  const Expr diff = a - b;
  int done = 0;
  for (int attempt = 0; done < options.trials && attempt < options.trials * 20; ++attempt) {
    Bindings pt;
    if (!random_point(diff, assumptions, rng, options.max_denominator, pt)) break;
    try {
      try {
        if (eval_exact(a, pt) != eval_exact(b, pt)) return ProbableEquality::Unequal;
      } catch (const EvalError& err) {
        if (std::string(err.what()).find("division by zero") != std::string::npos) continue;
        const NumericBindings nb = to_numeric(pt);
        const long double va = eval_num(a, nb), vb = eval_num(b, nb);
        if (!std::isfinite(va) || !std::isfinite(vb)) continue;
        const long double scale = std::max<long double>(1, std::max(std::fabs(va), std::fabs(vb)));
        if (std::fabs(va - vb) > options.tolerance * scale) return ProbableEquality::Unequal;
      }
    } catch (const EvalError&) {
      continue;
    }
    ++done;
  }
  return ProbableEquality::ProbablyEqual;
}

}  // namespace psc
