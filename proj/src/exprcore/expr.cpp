#include "psc/exprcore/expr.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace psc {

struct ExprFactory {
  static Expr make(Node n) {
    std::size_t h = static_cast<std::size_t>(n.kind) * 0x100000001b3ULL;
    switch (n.kind) {
      case Kind::Number:
        h = hash_combine(h, hash_value(n.value));
        break;
      case Kind::Symbol:
        h = hash_combine(h, std::hash<std::string>{}(n.name));
        break;
      case Kind::FnApp:
        h = hash_combine(h, std::hash<std::string>{}(n.name));
        h = hash_combine(h, n.order);
        break;
      case Kind::Pow:
        h = hash_combine(h, hash_value(n.value));
        break;
      default:
        break;
    }
    for (const Expr& a : n.args) h = hash_combine(h, a.hash());
    n.hash = h;
    return Expr(std::make_shared<const Node>(std::move(n)));
  }

  static Expr number(const Rational& v) {
    Node n;
    n.kind = Kind::Number;
    n.value = v;
    return make(std::move(n));
  }

  static Expr node(Kind k, std::vector<Expr> args, Rational value = Rational(0)) {
    Node n;
    n.kind = k;
    n.args = std::move(args);
    n.value = std::move(value);
    return make(std::move(n));
  }
};

namespace {

const Expr& zero_expr() {
  static const Expr z = ExprFactory::number(Rational(0));
  return z;
}
const Expr& one_expr() {
  static const Expr o = ExprFactory::number(Rational(1));
  return o;
}

int cmp_rational(const Rational& a, const Rational& b) {
  const int c = cmp(a, b);
  return c < 0 ? -1 : (c > 0 ? 1 : 0);
}

// Body factors of a product, i.e. operands without the leading coefficient.
std::span<const Expr> body_factors(const Expr& e, const Expr& self_storage) {
  if (e.is(Kind::Mul)) {
    auto ops = e.args();
    if (!ops.empty() && ops[0].is_number()) return ops.subspan(1);
    return ops;
  }
  return std::span<const Expr>(&self_storage, 1);
}

int compare_lists(std::span<const Expr> a, std::span<const Expr> b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    const int c = compare(a[i], b[i]);
    if (c != 0) return c;
  }
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

// Ordering used for Add operands: compare factor lists of the bodies.
int compare_terms(const Expr& a, const Expr& b) {
  auto [ca, ba] = split_coefficient(a);
  auto [cb, bb] = split_coefficient(b);
  const bool na = ba.is_number(), nb = bb.is_number();
  if (na != nb) return na ? -1 : 1;
  const int c = compare_lists(body_factors(ba, ba), body_factors(bb, bb));
  if (c != 0) return c;
  return cmp_rational(ca, cb);
}

struct TermLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare_terms(a, b) < 0; }
};


Expr number_power(const Rational& base, const Rational& e);

// n^(p/q) for a positive integer n, split into rational coefficient and a
// residual root with exponent in (0, 1).
void integer_power(const Integer& n, const Rational& e, Rational& coeff, std::vector<Expr>& rest) {
  const Integer p = e.get_num();
  const Integer q = e.get_den();
  Integer r;
  if (q.fits_ulong_p() && exact_root(n, q.get_ui(), r)) {
    Rational rr(r);
    Rational res(1);
    Integer pp = abs(p);
    mpz_pow_ui(r.get_mpz_t(), r.get_mpz_t(), pp.get_ui());
    res = Rational(r);
    if (p < 0) res = 1 / res;
    coeff *= res;
    return;
  }
  // floor split
  Integer k;
  mpz_fdiv_q(k.get_mpz_t(), p.get_mpz_t(), q.get_mpz_t());
  Rational frac = e - Rational(k);
  Integer nk;
  Integer absk = abs(k);
  mpz_pow_ui(nk.get_mpz_t(), n.get_mpz_t(), absk.get_ui());
  coeff *= (k < 0) ? Rational(1) / Rational(nk) : Rational(nk);
  if (frac != 0) rest.push_back(ExprFactory::node(Kind::Pow, {ExprFactory::number(Rational(n))}, frac));
}

Expr number_power(const Rational& base, const Rational& e) {
  if (is_integer(e)) {
    if (base == 0) {
      if (e < 0) throw std::domain_error("division by zero");
      return zero_expr();
    }
    Integer p = abs(e.get_num());
    if (!p.fits_ulong_p()) throw std::overflow_error("integer exponent too large");
    Integer num, den;
    mpz_pow_ui(num.get_mpz_t(), base.get_num_mpz_t(), p.get_ui());
    mpz_pow_ui(den.get_mpz_t(), base.get_den_mpz_t(), p.get_ui());
    Rational r(num, den);
    r.canonicalize();
    if (e < 0) r = 1 / r;
    return ExprFactory::number(r);
  }
  if (base == 0) {
    if (e < 0) throw std::domain_error("division by zero");
    return zero_expr();
  }
  if (base == 1) return one_expr();
  Rational coeff(1);
  std::vector<Expr> rest;
  Rational b = base;
  if (b < 0) {
    if (e.get_den() % 2 == 0) return ExprFactory::node(Kind::Pow, {ExprFactory::number(base)}, e);
    if (e.get_num() % 2 != 0) coeff = -1;
    b = -b;
  }
  if (b.get_num() != 1) integer_power(b.get_num(), e, coeff, rest);
  if (b.get_den() != 1) integer_power(b.get_den(), -e, coeff, rest);
  if (rest.empty()) return ExprFactory::number(coeff);
  std::sort(rest.begin(), rest.end(), ExprLess{});
  if (coeff == 1 && rest.size() == 1) return rest[0];
  rest.insert(rest.begin(), ExprFactory::number(coeff));
  return ExprFactory::node(Kind::Mul, std::move(rest));
}

}  // namespace

// ---------------------------------------------------------------------------
// Expr accessors

Expr::Expr() : Expr(zero_expr()) {}
Expr::Expr(long value) : Expr(value == 0 ? zero_expr() : (value == 1 ? one_expr() : ExprFactory::number(Rational(value)))) {}
Expr::Expr(const Rational& value)
    : Expr(value == 0 ? zero_expr() : (value == 1 ? one_expr() : ExprFactory::number(value))) {}

Expr Expr::symbol(const std::string& name, SymbolRole role) {
  if (name.empty()) throw std::invalid_argument("empty symbol name");
  Node n;
  n.kind = Kind::Symbol;
  n.name = name;
  n.role = role;
  return ExprFactory::make(std::move(n));
}

Expr Expr::function(const std::string& name, Expr arg, unsigned order) {
  Node n;
  n.kind = Kind::FnApp;
  n.name = name;
  n.order = order;
  n.args = {std::move(arg)};
  return ExprFactory::make(std::move(n));
}

Kind Expr::kind() const { return node_->kind; }
bool Expr::is_zero() const { return node_->kind == Kind::Number && node_->value == 0; }
bool Expr::is_one() const { return node_->kind == Kind::Number && node_->value == 1; }
const Rational& Expr::number() const {
  if (node_->kind != Kind::Number) throw std::logic_error("not a number");
  return node_->value;
}
const Rational& Expr::exponent() const {
  if (node_->kind != Kind::Pow) throw std::logic_error("not a power");
  return node_->value;
}
const std::string& Expr::name() const { return node_->name; }
SymbolRole Expr::role() const { return node_->role; }
unsigned Expr::order() const { return node_->order; }
std::span<const Expr> Expr::args() const { return node_->args; }
std::size_t Expr::hash() const { return node_->hash; }

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (a.node() == b.node()) return 0;
  const Kind ka = a.kind(), kb = b.kind();
  if (ka != kb) return ka < kb ? -1 : 1;
  switch (ka) {
    case Kind::Number:
      return cmp_rational(a.number(), b.number());
    case Kind::Symbol: {
      const int c = a.name().compare(b.name());
      return c < 0 ? -1 : (c > 0 ? 1 : 0);
    }
    case Kind::FnApp: {
      int c = a.name().compare(b.name());
      if (c != 0) return c < 0 ? -1 : 1;
      if (a.order() != b.order()) return a.order() < b.order() ? -1 : 1;
      return compare(a.arg(), b.arg());
    }
    case Kind::Exp:
    case Kind::Sin:
    case Kind::Cos:
      return compare(a.arg(), b.arg());
    case Kind::Pow: {
      const int c = compare(a.base(), b.base());
      if (c != 0) return c;
      return cmp_rational(a.exponent(), b.exponent());
    }
    case Kind::Mul: {
      const int c = compare_lists(body_factors(a, a), body_factors(b, b));
      if (c != 0) return c;
      auto ca = split_coefficient(a).first;
      auto cb = split_coefficient(b).first;
      return cmp_rational(ca, cb);
    }
    case Kind::Add:
      return compare_lists(a.args(), b.args());
  }
  return 0;
}

std::pair<Rational, Expr> split_coefficient(const Expr& term) {
  if (term.is_number()) return {term.number(), one_expr()};
  if (term.is(Kind::Mul)) {
    auto ops = term.args();
    if (ops[0].is_number()) {
      if (ops.size() == 2) return {ops[0].number(), ops[1]};
      std::vector<Expr> rest(ops.begin() + 1, ops.end());
      return {ops[0].number(), ExprFactory::node(Kind::Mul, std::move(rest))};
    }
  }
  return {Rational(1), term};
}

// ---------------------------------------------------------------------------
// Light canonical constructors

Expr add(std::vector<Expr> operands) {
  Rational constant(0);
  std::map<Expr, Rational, TermLess> terms;
  std::vector<Expr> stack;
  auto push = [&](const Expr& op) {
    if (op.is_number()) {
      constant += op.number();
      return;
    }
    auto [c, body] = split_coefficient(op);
    auto [it, inserted] = terms.try_emplace(body, c);
    if (!inserted) it->second += c;
  };
  for (const Expr& op : operands) {
    if (op.is(Kind::Add)) {
      for (const Expr& inner : op.args()) push(inner);
    } else {
      push(op);
    }
  }
  std::vector<Expr> out;
  if (constant != 0) out.push_back(Expr(constant));
  for (auto& [body, c] : terms) {
    if (c == 0) continue;
    if (c == 1) {
      out.push_back(body);
    } else if (body.is(Kind::Mul)) {
      std::vector<Expr> f;
      f.reserve(body.args().size() + 1);
      f.push_back(Expr(c));
      f.insert(f.end(), body.args().begin(), body.args().end());
      out.push_back(ExprFactory::node(Kind::Mul, std::move(f)));
    } else {
      out.push_back(ExprFactory::node(Kind::Mul, {Expr(c), body}));
    }
  }
  if (out.empty()) return zero_expr();
  if (out.size() == 1) return out[0];
  return ExprFactory::node(Kind::Add, std::move(out));
}

Expr mul(std::vector<Expr> operands) {
  Rational coeff(1);
  ExprMap<Rational> powers;
  std::vector<Expr> work = std::move(operands);
  for (std::size_t i = 0; i < work.size(); ++i) {
    const Expr op = work[i];
    switch (op.kind()) {
      case Kind::Number:
        coeff *= op.number();
        if (coeff == 0) return zero_expr();
        break;
      case Kind::Mul:
        for (const Expr& inner : op.args()) work.push_back(inner);
        break;
      case Kind::Pow: {
        auto [it, ins] = powers.try_emplace(op.base(), op.exponent());
        if (!ins) it->second += op.exponent();
        break;
      }
      default: {
        auto [it, ins] = powers.try_emplace(op, Rational(1));
        if (!ins) it->second += 1;
        break;
      }
    }
  }
  std::vector<Expr> factors;
  for (auto& [b, e] : powers) {
    if (e == 0) continue;
    Expr p = (e == 1) ? b : pow(b, e);
    if (p.is_number()) {
      coeff *= p.number();
    } else if (p.is(Kind::Mul)) {
      for (const Expr& inner : p.args()) {
        if (inner.is_number())
          coeff *= inner.number();
        else
          factors.push_back(inner);
      }
    } else {
      factors.push_back(p);
    }
  }
  if (coeff == 0) return zero_expr();
  std::sort(factors.begin(), factors.end(), ExprLess{});
  // Distinct bases can collapse onto the same factor after numeric power
  // splitting (e.g. 8^(1/2) -> 2*2^(1/2)), so merge duplicates once more.
  for (std::size_t i = 1; i < factors.size(); ++i) {
    if (factors[i] == factors[i - 1]) {
      std::vector<Expr> again = factors;
      again.push_back(Expr(coeff));
      return mul(std::move(again));
    }
  }
  if (factors.empty()) return Expr(coeff);
  if (coeff == 1 && factors.size() == 1) return factors[0];
  if (coeff != 1) factors.insert(factors.begin(), Expr(coeff));
  return ExprFactory::node(Kind::Mul, std::move(factors));
}

Expr pow(const Expr& base, const Rational& e) {
  if (e == 0) return one_expr();
  if (e == 1) return base;
  switch (base.kind()) {
    case Kind::Number:
      return number_power(base.number(), e);
    case Kind::Pow: {
      const Rational& inner = base.exponent();
      if (is_integer(e) || inner.get_den() % 2 == 0) return pow(base.base(), inner * e);
      break;
    }
    case Kind::Mul: {
      if (is_integer(e)) {
        std::vector<Expr> f;
        for (const Expr& op : base.args()) f.push_back(pow(op, e));
        return mul(std::move(f));
      }
      auto [c, body] = split_coefficient(base);
      if (c > 0 && c != 1) return mul({number_power(c, e), pow(body, e)});
      break;
    }
    case Kind::Exp:
      return exp(mul({Expr(e), base.arg()}));
    default:
      break;
  }
  return ExprFactory::node(Kind::Pow, {base}, e);
}

Expr sqrt(const Expr& e) { return pow(e, Rational(1, 2)); }

Expr exp(const Expr& e) {
  if (e.is_zero()) return one_expr();
  return ExprFactory::node(Kind::Exp, {e});
}

Expr sin(const Expr& e) {
  if (e.is_zero()) return zero_expr();
  return ExprFactory::node(Kind::Sin, {e});
}

Expr cos(const Expr& e) {
  if (e.is_zero()) return one_expr();
  return ExprFactory::node(Kind::Cos, {e});
}

Expr operator+(const Expr& a, const Expr& b) { return add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return add({a, mul({Expr(-1), b})}); }
Expr operator*(const Expr& a, const Expr& b) { return mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return mul({a, pow(b, Rational(-1))}); }
Expr operator-(const Expr& a) { return mul({Expr(-1), a}); }

Expr rebuild(const Expr& like, std::vector<Expr> args) {
  switch (like.kind()) {
    case Kind::Number:
    case Kind::Symbol:
      return like;
    case Kind::FnApp:
      return Expr::function(like.name(), args[0], like.order());
    case Kind::Exp:
      return exp(args[0]);
    case Kind::Sin:
      return sin(args[0]);
    case Kind::Cos:
      return cos(args[0]);
    case Kind::Pow:
      return pow(args[0], like.exponent());
    case Kind::Mul:
      return mul(std::move(args));
    case Kind::Add:
      return add(std::move(args));
  }
  return like;
}

// ---------------------------------------------------------------------------
// Queries

bool contains(const Expr& e, const Expr& needle) {
  if (e == needle) return true;
  for (const Expr& a : e.args())
    if (contains(a, needle)) return true;
  return false;
}

bool depends_on_any(const Expr& e, std::span<const Expr> symbols) {
  if (e.is_symbol()) {
    for (const Expr& s : symbols)
      if (s.name() == e.name()) return true;
    return false;
  }
  for (const Expr& a : e.args())
    if (depends_on_any(a, symbols)) return true;
  return false;
}

void collect_atoms(const Expr& e, ExprMap<bool>& symbols, ExprMap<bool>& functions) {
  if (e.is_symbol()) {
    symbols[e] = true;
    return;
  }
  if (e.is(Kind::FnApp)) functions[e] = true;
  for (const Expr& a : e.args()) collect_atoms(a, symbols, functions);
}

Expr substitute(const Expr& e, const ExprMap<Expr>& replacements) {
  if (replacements.empty()) return e;
  auto it = replacements.find(e);
  if (it != replacements.end()) return it->second;
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const Expr& a : e.args()) {
    args.push_back(substitute(a, replacements));
    changed = changed || !(args.back().node() == a.node());
  }
  if (!changed) return e;
  return rebuild(e, std::move(args));
}

// ---------------------------------------------------------------------------
// Printer

namespace {

void print(std::ostream& os, const Expr& e);

bool is_negative_term(const Expr& e) {
  if (e.is_number()) return e.number() < 0;
  if (e.is(Kind::Mul) && e.args()[0].is_number()) return e.args()[0].number() < 0;
  return false;
}

void print_exponent(std::ostream& os, const Rational& r) {
  if (is_integer(r) && r > 0)
    os << r.get_str();
  else
    os << '(' << r.get_str() << ')';
}

bool is_atomic_for_power(const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
      return is_integer(e.number()) && e.number() >= 0;
    case Kind::Symbol:
    case Kind::FnApp:
    case Kind::Exp:
    case Kind::Sin:
    case Kind::Cos:
      return true;
    default:
      return false;
  }
}

void print_power(std::ostream& os, const Expr& base, const Rational& e) {
  if (e == 1) {
    if (base.is(Kind::Add)) {
      os << '(';
      print(os, base);
      os << ')';
    } else {
      print(os, base);
    }
    return;
  }
  if (e == Rational(1, 2)) {
    os << "sqrt(";
    print(os, base);
    os << ')';
    return;
  }
  if (is_atomic_for_power(base)) {
    print(os, base);
  } else {
    os << '(';
    print(os, base);
    os << ')';
  }
  os << '^';
  print_exponent(os, e);
}

// Prints a product with a denominator, sign handled by caller.
void print_product(std::ostream& os, const Rational& coeff, std::span<const Expr> factors) {
  std::vector<std::pair<Expr, Rational>> num, den;
  for (const Expr& f : factors) {
    if (f.is(Kind::Pow) && f.exponent() < 0)
      den.emplace_back(f.base(), -f.exponent());
    else if (f.is(Kind::Pow))
      num.emplace_back(f.base(), f.exponent());
    else
      num.emplace_back(f, Rational(1));
  }
  const Integer cn = abs(coeff.get_num());
  const Integer cd = coeff.get_den();
  bool first = true;
  if (cn != 1 || num.empty()) {
    os << cn.get_str();
    first = false;
  }
  for (auto& [b, e] : num) {
    if (!first) os << '*';
    print_power(os, b, e);
    first = false;
  }
  const std::size_t nden = den.size() + (cd != 1 ? 1 : 0);
  if (nden == 0) return;
  os << '/';
  if (nden > 1) os << '(';
  first = true;
  if (cd != 1) {
    os << cd.get_str();
    first = false;
  }
  for (auto& [b, e] : den) {
    if (!first) os << '*';
    print_power(os, b, e);
    first = false;
  }
  if (nden > 1) os << ')';
}

void print_term_unsigned(std::ostream& os, const Expr& e) {
  if (e.is_number()) {
    os << Rational(abs(e.number())).get_str();
    return;
  }
  auto [c, body] = split_coefficient(e);
  if (body.is(Kind::Mul))
    print_product(os, c, body.args());
  else
    print_product(os, c, std::span<const Expr>(&body, 1));
}

void print(std::ostream& os, const Expr& e) {
  switch (e.kind()) {
    case Kind::Number:
      os << e.number().get_str();
      return;
    case Kind::Symbol:
      os << e.name();
      return;
    case Kind::FnApp:
      if (e.order() == 0) {
        os << e.name() << '(';
        print(os, e.arg());
        os << ')';
      } else {
        os << "diff(" << e.name() << '(';
        print(os, e.arg());
        os << "),";
        print(os, e.arg());
        os << ',' << e.order() << ')';
      }
      return;
    case Kind::Exp:
    case Kind::Sin:
    case Kind::Cos:
      os << (e.is(Kind::Exp) ? "exp(" : e.is(Kind::Sin) ? "sin(" : "cos(");
      print(os, e.arg());
      os << ')';
      return;
    case Kind::Pow:
    case Kind::Mul:
      if (is_negative_term(e)) os << '-';
      print_term_unsigned(os, e);
      return;
    case Kind::Add: {
      bool first = true;
      for (const Expr& t : e.args()) {
        const bool neg = is_negative_term(t);
        if (first) {
          if (neg) os << '-';
        } else {
          os << (neg ? " - " : " + ");
        }
        print_term_unsigned(os, t);
        first = false;
      }
      return;
    }
  }
}

}  // namespace

std::string to_string(const Expr& e) {
  std::ostringstream os;
  print(os, e);
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Expr& e) {
  print(os, e);
  return os;
}

}  // namespace psc
