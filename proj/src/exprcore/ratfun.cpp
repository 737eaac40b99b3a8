#include "psc/exprcore/ratfun.hpp"

#include <algorithm>
#include <deque>
#include <functional>
#include <numeric>
#include <map>
#include <mutex>
#include <stdexcept>
#include <unordered_map>

namespace psc {

// ---------------------------------------------------------------------------
// Atom registry

namespace {

struct AtomRegistry {
  std::mutex mu;
  std::deque<Atom> atoms;
  std::unordered_map<Expr, const Atom*, ExprHash> by_expr;

  static AtomRegistry& get() {
    static AtomRegistry r;
    return r;
  }

  const Atom* intern(AtomKind kind, const Expr& expr, const Expr& argument, std::int64_t index = 0,
                     std::shared_ptr<const Polynomial> radicand = nullptr) {
    std::lock_guard<std::mutex> lock(mu);
    auto it = by_expr.find(expr);
    if (it != by_expr.end()) return it->second;
    Atom a;
    a.kind = kind;
    a.serial = atoms.size() + 1;
    a.expr = expr;
    a.argument = argument;
    a.index = index;
    a.radicand = std::move(radicand);
    atoms.push_back(std::move(a));
    const Atom* p = &atoms.back();
    by_expr.emplace(expr, p);
    return p;
  }
};

struct FactorRegistry {
  std::mutex mu;
  std::unordered_map<std::size_t, std::vector<FactorRef>> by_hash;

  static FactorRegistry& get() {
    static FactorRegistry r;
    return r;
  }

  FactorRef intern(const Polynomial& p) {
    const std::size_t h = p.hash();
    std::lock_guard<std::mutex> lock(mu);
    auto& bucket = by_hash[h];
    for (const FactorRef& f : bucket)
      if (*f == p) return f;
    bucket.push_back(std::make_shared<const Polynomial>(p));
    return bucket.back();
  }
};

const Atom* symbol_atom(const Expr& s) { return AtomRegistry::get().intern(AtomKind::Symbol, s, Expr()); }
const Atom* function_atom(const Expr& f) {
  return AtomRegistry::get().intern(AtomKind::Function, f, f.arg());
}
const Atom* exp_atom(const Expr& arg) { return AtomRegistry::get().intern(AtomKind::Exp, psc::exp(arg), arg); }
const Atom* sin_atom(const Expr& arg) { return AtomRegistry::get().intern(AtomKind::Sin, psc::sin(arg), arg); }
const Atom* cos_atom(const Expr& arg) { return AtomRegistry::get().intern(AtomKind::Cos, psc::cos(arg), arg); }

// An exp atom argument is polynomial when it has no Add raised to a negative power.
bool has_polynomial_denominator(const Expr& e) {
  if (e.is(Kind::Pow) && e.exponent() < 0 && e.base().is(Kind::Add)) return true;
  for (const Expr& a : e.args())
    if (has_polynomial_denominator(a)) return true;
  return false;
}
bool exp_polynomial_argument(AtomRef a) { return !has_polynomial_denominator(a->argument); }

}  // namespace

// ---------------------------------------------------------------------------
// Monomial

Monomial Monomial::of(AtomRef a, SmallRational e) {
  if (e.is_zero()) return {};
  return Monomial({{a, e}});
}

SmallRational Monomial::exponent_of(AtomRef a) const {
  for (const auto& [x, e] : e_)
    if (x == a) return e;
  return 0;
}

Monomial operator*(const Monomial& a, const Monomial& b) {
  if (a.e_.empty()) return b;
  if (b.e_.empty()) return a;
  std::vector<Monomial::Entry> out;
  out.reserve(a.e_.size() + b.e_.size());
  std::size_t i = 0, j = 0;
  while (i < a.e_.size() || j < b.e_.size()) {
    if (j == b.e_.size() || (i < a.e_.size() && a.e_[i].first->serial < b.e_[j].first->serial)) {
      out.push_back(a.e_[i++]);
    } else if (i == a.e_.size() || b.e_[j].first->serial < a.e_[i].first->serial) {
      out.push_back(b.e_[j++]);
    } else {
      const SmallRational e = a.e_[i].second + b.e_[j].second;
      if (!e.is_zero()) out.emplace_back(a.e_[i].first, e);
      ++i;
      ++j;
    }
  }
  return Monomial(std::move(out));
}

Monomial Monomial::inverse() const {
  std::vector<Entry> out = e_;
  for (auto& [a, e] : out) e = -e;
  return Monomial(std::move(out));
}

int compare(const Monomial& a, const Monomial& b) {
  std::size_t i = 0, j = 0;
  const SmallRational zero(0);
  while (i < a.e_.size() || j < b.e_.size()) {
    if (j == b.e_.size() || (i < a.e_.size() && a.e_[i].first->serial < b.e_[j].first->serial)) {
      const int c = compare(a.e_[i].second, zero);
      if (c != 0) return c;
      ++i;
    } else if (i == a.e_.size() || b.e_[j].first->serial < a.e_[i].first->serial) {
      const int c = compare(zero, b.e_[j].second);
      if (c != 0) return c;
      ++j;
    } else {
      const int c = compare(a.e_[i].second, b.e_[j].second);
      if (c != 0) return c;
      ++i;
      ++j;
    }
  }
  return 0;
}

namespace {
struct MonoDesc {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) > 0; }
};
}  // namespace

// ---------------------------------------------------------------------------
// Polynomial

Polynomial::Polynomial(const Rational& c) {
  if (c != 0) terms_.push_back({Monomial(), c});
}

Polynomial::Polynomial(Monomial m, Rational c) {
  if (c != 0) terms_.push_back({std::move(m), std::move(c)});
}

Polynomial Polynomial::from_terms(std::vector<Term> terms) {
  std::sort(terms.begin(), terms.end(),
            [](const Term& a, const Term& b) { return compare(a.mono, b.mono) > 0; });
  Polynomial p;
  for (Term& t : terms) {
    if (!p.terms_.empty() && p.terms_.back().mono == t.mono) {
      p.terms_.back().coeff += t.coeff;
    } else {
      if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
      p.terms_.push_back(std::move(t));
    }
  }
  if (!p.terms_.empty() && p.terms_.back().coeff == 0) p.terms_.pop_back();
  return p;
}

bool Polynomial::is_constant() const { return terms_.empty() || (terms_.size() == 1 && terms_[0].mono.empty()); }

Rational Polynomial::constant_value() const {
  if (terms_.empty()) return Rational(0);
  if (!is_constant()) throw std::logic_error("polynomial is not constant");
  return terms_[0].coeff;
}

bool Polynomial::contains_atom(AtomRef a) const {
  for (const Term& t : terms_)
    for (const auto& [x, e] : t.mono.entries())
      if (x == a) return true;
  return false;
}

Polynomial operator+(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.empty()) return b;
  if (b.terms_.empty()) return a;
  Polynomial out;
  out.terms_.reserve(a.terms_.size() + b.terms_.size());
  std::size_t i = 0, j = 0;
  while (i < a.terms_.size() || j < b.terms_.size()) {
    int c;
    if (i == a.terms_.size())
      c = -1;
    else if (j == b.terms_.size())
      c = 1;
    else
      c = compare(a.terms_[i].mono, b.terms_[j].mono);
    if (c > 0) {
      out.terms_.push_back(a.terms_[i++]);
    } else if (c < 0) {
      out.terms_.push_back(b.terms_[j++]);
    } else {
      Rational s = a.terms_[i].coeff + b.terms_[j].coeff;
      if (s != 0) out.terms_.push_back({a.terms_[i].mono, std::move(s)});
      ++i;
      ++j;
    }
  }
  return out;
}

Polynomial Polynomial::operator-() const {
  Polynomial out = *this;
  for (Term& t : out.terms_) t.coeff = -t.coeff;
  return out;
}

Polynomial operator-(const Polynomial& a, const Polynomial& b) { return a + (-b); }

namespace {

Polynomial mul_raw(const Polynomial& a, const Polynomial& b) {
  if (a.is_zero() || b.is_zero()) return {};
  if (a.is_constant()) return b.scaled(a.constant_value());
  if (b.is_constant()) return a.scaled(b.constant_value());
  if (a.is_monomial()) return b.times(a.terms()[0].mono).scaled(a.terms()[0].coeff);
  if (b.is_monomial()) return a.times(b.terms()[0].mono).scaled(b.terms()[0].coeff);
  std::map<Monomial, Rational, MonoDesc> acc;
  for (const Term& s : a.terms())
    for (const Term& t : b.terms()) {
      auto [it, ins] = acc.try_emplace(s.mono * t.mono, s.coeff * t.coeff);
      if (!ins) it->second += s.coeff * t.coeff;
    }
  std::vector<Term> out;
  out.reserve(acc.size());
  for (auto& [m, c] : acc)
    if (c != 0) out.push_back({m, c});
  return Polynomial::from_terms(std::move(out));
}

}  // namespace

Polynomial operator*(const Polynomial& a, const Polynomial& b) { return reduce(mul_raw(a, b)); }

Polynomial Polynomial::scaled(const Rational& c) const {
  if (c == 0) return {};
  if (c == 1) return *this;
  Polynomial out = *this;
  for (Term& t : out.terms_) t.coeff *= c;
  return out;
}

Polynomial Polynomial::times(const Monomial& m) const {
  if (m.empty()) return *this;
  // Multiplication by a monomial preserves the lex order.
  Polynomial out;
  out.terms_.reserve(terms_.size());
  for (const Term& t : terms_) out.terms_.push_back({t.mono * m, t.coeff});
  return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
  if (a.terms_.size() != b.terms_.size()) return false;
  for (std::size_t i = 0; i < a.terms_.size(); ++i)
    if (!(a.terms_[i].mono == b.terms_[i].mono) || a.terms_[i].coeff != b.terms_[i].coeff) return false;
  return true;
}

std::size_t Polynomial::hash() const {
  std::size_t h = terms_.size();
  for (const Term& t : terms_) {
    h = hash_combine(h, hash_value(t.coeff));
    for (const auto& [a, e] : t.mono.entries()) {
      h = hash_combine(h, a->serial);
      h = hash_combine(h, static_cast<std::size_t>(e.num() * 31 + e.den()));
    }
  }
  return h;
}

Polynomial Polynomial::partial(AtomRef a) const {
  std::vector<Term> out;
  for (const Term& t : terms_) {
    const SmallRational e = t.mono.exponent_of(a);
    if (e.is_zero()) continue;
    out.push_back({t.mono * Monomial::of(a, -SmallRational(1)), t.coeff * e.to_rational()});
  }
  return from_terms(std::move(out));
}

// ---------------------------------------------------------------------------
// Side relations

namespace {

Polynomial poly_power(const Polynomial& p, std::int64_t k) {
  Polynomial result(Rational(1));
  for (std::int64_t i = 0; i < k; ++i) result = mul_raw(result, p);
  return result;
}

// Returns true and writes the expansion if the term needs rewriting.
bool reduce_term(const Term& t, Polynomial& out) {
  for (const auto& [a, e] : t.mono.entries()) {
    if (a->kind == AtomKind::Root && (e < SmallRational(0) || !(e < SmallRational(a->index)))) {
      if (!e.is_integer()) throw std::logic_error("fractional exponent on a root atom");
      const std::int64_t q = a->index;
      const std::int64_t n = e.num();
      std::int64_t s = n >= 0 ? n / q : -((-n + q - 1) / q);
      const std::int64_t r = n - s * q;
      Monomial rest = t.mono * Monomial::of(a, SmallRational(r) - e);
      Polynomial base(rest, t.coeff);
      if (s >= 0) {
        out = mul_raw(base, poly_power(*a->radicand, s));
      } else {
        const Polynomial& rad = *a->radicand;
        if (!rad.is_monomial()) throw std::logic_error("negative power of a root with polynomial radicand");
        const Term& rt = rad.terms()[0];
        Monomial inv = rt.mono.inverse();
        Monomial m;
        for (std::int64_t i = 0; i < -s; ++i) m = m * inv;
        Rational c(1);
        for (std::int64_t i = 0; i < -s; ++i) c /= rt.coeff;
        out = base.times(m).scaled(c);
      }
      return true;
    }
    if (a->kind == AtomKind::Cos && !(e < SmallRational(2))) {
      const AtomRef s = sin_atom(a->argument);
      Monomial rest = t.mono * Monomial::of(a, SmallRational(-2));
      Polynomial base(rest, t.coeff);
      Polynomial rel = Polynomial(Rational(1)) - Polynomial(Monomial::of(s, 2));
      out = mul_raw(base, rel);
      return true;
    }
  }
  return false;
}

}  // namespace

Polynomial reduce(Polynomial p) {
  bool any = false;
  for (const Term& t : p.terms())
    for (const auto& [a, e] : t.mono.entries())
      if ((a->kind == AtomKind::Root && (e < SmallRational(0) || !(e < SmallRational(a->index)))) ||
          (a->kind == AtomKind::Cos && !(e < SmallRational(2)))) {
        any = true;
        break;
      }
  if (!any) return p;
  for (int guard = 0; guard < 64; ++guard) {
    std::vector<Term> kept;
    Polynomial extra;
    bool changed = false;
    for (const Term& t : p.terms()) {
      Polynomial ex;
      if (reduce_term(t, ex)) {
        extra = extra + ex;
        changed = true;
      } else {
        kept.push_back(t);
      }
    }
    if (!changed) return p;
    p = Polynomial::from_terms(std::move(kept)) + extra;
  }
  throw std::runtime_error("side-relation reduction did not terminate");
}

bool divide_exact(const Polynomial& num, const Polynomial& den, Polynomial& quotient) {
  if (den.is_zero()) throw std::domain_error("division by zero");
  if (num.is_zero()) {
    quotient = Polynomial();
    return true;
  }
  if (den.is_constant()) {
    quotient = num.scaled(Rational(1) / den.constant_value());
    return true;
  }
  if (den.is_monomial()) {
    quotient = num.times(den.terms()[0].mono.inverse()).scaled(Rational(1) / den.terms()[0].coeff);
    return true;
  }
  // Exponent box for the quotient.
  std::map<std::uint64_t, std::pair<AtomRef, std::pair<SmallRational, SmallRational>>> nb, db;
  auto bounds = [](const Polynomial& p, auto& box) {
    for (const Term& t : p.terms())
      for (const auto& [a, e] : t.mono.entries()) box.try_emplace(a->serial, a, std::make_pair(e, e));
    for (const Term& t : p.terms())
      for (auto& [serial, entry] : box) {
        const SmallRational e = t.mono.exponent_of(entry.first);
        if (e < entry.second.first) entry.second.first = e;
        if (e > entry.second.second) entry.second.second = e;
      }
  };
  bounds(num, nb);
  bounds(den, db);
  struct Range {
    AtomRef atom;
    SmallRational lo, hi;
  };
  std::vector<Range> box;
  for (auto& [serial, entry] : nb) {
    SmallRational lo = entry.second.first, hi = entry.second.second;
    auto it = db.find(serial);
    if (it != db.end()) {
      lo = lo - it->second.second.first;
      hi = hi - it->second.second.second;
    }
    if (lo > hi) return false;
    box.push_back({entry.first, lo, hi});
  }
  for (auto& [serial, entry] : db) {
    if (nb.count(serial)) continue;
    const SmallRational lo = -entry.second.first, hi = -entry.second.second;
    if (lo > hi) return false;
    box.push_back({entry.first, lo, hi});
  }

  const Term& lead = den.terms()[0];
  const Monomial lead_inv = lead.mono.inverse();
  std::map<Monomial, Rational, MonoDesc> rem;
  for (const Term& t : num.terms()) rem.emplace(t.mono, t.coeff);
  std::vector<Term> q;
  const std::size_t cap = 64 + 8 * num.size() * den.size();
  while (!rem.empty()) {
    if (q.size() > cap) return false;
    auto top = rem.begin();
    Monomial qm = top->first * lead_inv;
    for (const Range& r : box) {
      const SmallRational e = qm.exponent_of(r.atom);
      if (e < r.lo || e > r.hi) return false;
    }
    for (const auto& [a, e] : qm.entries()) {
      bool inbox = false;
      for (const Range& r : box) inbox = inbox || r.atom == a;
      if (!inbox) return false;
    }
    Rational qc = top->second / lead.coeff;
    for (const Term& t : den.terms()) {
      Monomial m = qm * t.mono;
      Rational delta = qc * t.coeff;
      auto it = rem.find(m);
      if (it == rem.end()) {
        rem.emplace(std::move(m), -delta);
      } else {
        it->second -= delta;
        if (it->second == 0) rem.erase(it);
      }
    }
    q.push_back({std::move(qm), std::move(qc)});
  }
  quotient = Polynomial::from_terms(std::move(q));
  return true;
}

// ---------------------------------------------------------------------------
// RatFun arithmetic

namespace {

using Den = std::vector<std::pair<FactorRef, int>>;

void sort_den(Den& d) {
  std::sort(d.begin(), d.end(), [](const auto& a, const auto& b) { return a.first.get() < b.first.get(); });
}

int mult_of(const Den& d, const FactorRef& f) {
  for (const auto& [g, k] : d)
    if (g == f) return k;
  return 0;
}

// Cancels factors flagged in `which` against the numerator.
void cancel(RatFun& r, const std::vector<FactorRef>& which) {
  if (r.num.is_zero()) {
    r.den.clear();
    return;
  }
  for (const FactorRef& f : which) {
    for (auto& [g, k] : r.den) {
      if (g != f) continue;
      Polynomial q;
      while (k > 0 && divide_exact(r.num, *g, q)) {
        r.num = std::move(q);
        --k;
      }
    }
  }
  r.den.erase(std::remove_if(r.den.begin(), r.den.end(), [](const auto& p) { return p.second == 0; }),
              r.den.end());
}

Polynomial den_product(const Den& d) {
  Polynomial p(Rational(1));
  for (const auto& [f, k] : d) p = p * poly_power(*f, k);
  return p;
}

bool same_den(const Den& a, const Den& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].first != b[i].first || a[i].second != b[i].second) return false;
  return true;
}

}  // namespace

std::size_t RatFun::weight() const {
  std::size_t w = num.size();
  for (const auto& [f, k] : den) w += f->size() * static_cast<std::size_t>(k);
  return w;
}

RatFun sum(const std::vector<RatFun>& terms) {
  std::vector<const RatFun*> nz;
  for (const RatFun& t : terms)
    if (!t.is_zero()) nz.push_back(&t);
  if (nz.empty()) return RatFun();
  if (nz.size() == 1) return *nz[0];
  Den lcm;
  std::map<const Polynomial*, int> shared;  // number of terms carrying the factor
  for (const RatFun* t : nz)
    for (const auto& [f, k] : t->den) {
      bool found = false;
      for (auto& [g, m] : lcm)
        if (g == f) {
          m = std::max(m, k);
          found = true;
        }
      if (!found) lcm.emplace_back(f, k);
      shared[f.get()] += 1;
    }
  sort_den(lcm);
  RatFun r;
  r.den = lcm;
  bool all_same = true;
  for (const RatFun* t : nz) all_same = all_same && same_den(t->den, lcm);
  if (all_same) {
    for (const RatFun* t : nz) r.num = r.num + t->num;
  } else {
    for (const RatFun* t : nz) {
      Polynomial n = t->num;
      for (const auto& [f, k] : lcm) {
        const int missing = k - mult_of(t->den, f);
        if (missing > 0) n = n * poly_power(*f, missing);
      }
      r.num = r.num + n;
    }
  }
  std::vector<FactorRef> which;
  for (const auto& [f, k] : lcm)
    if (shared[f.get()] > 1) which.push_back(f);
  cancel(r, which);
  return r;
}

RatFun operator+(const RatFun& a, const RatFun& b) {
  if (a.is_zero()) return b;
  if (b.is_zero()) return a;
  if (a.den.empty() && b.den.empty()) return RatFun(a.num + b.num);
  return sum({a, b});
}

RatFun RatFun::operator-() const {
  RatFun r = *this;
  r.num = -r.num;
  return r;
}

RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

RatFun operator*(const RatFun& a, const RatFun& b) {
  if (a.is_zero() || b.is_zero()) return RatFun();
  if (a.den.empty() && b.den.empty()) return RatFun(a.num * b.num);
  Polynomial an = a.num, bn = b.num;
  Den ad = a.den, bd = b.den;
  Polynomial q;
  for (auto& [f, k] : bd)
    while (k > 0 && divide_exact(an, *f, q)) {
      an = std::move(q);
      --k;
    }
  for (auto& [f, k] : ad)
    while (k > 0 && divide_exact(bn, *f, q)) {
      bn = std::move(q);
      --k;
    }
  RatFun r;
  r.num = an * bn;
  for (const auto& [f, k] : ad)
    if (k > 0) r.den.emplace_back(f, k);
  for (const auto& [f, k] : bd) {
    if (k == 0) continue;
    bool found = false;
    for (auto& [g, m] : r.den)
      if (g == f) {
        m += k;
        found = true;
      }
    if (!found) r.den.emplace_back(f, k);
  }
  sort_den(r.den);
  if (r.num.is_zero()) r.den.clear();
  return r;
}

std::vector<AtomRef> atoms_of(const RatFun& r) {
  std::map<std::uint64_t, AtomRef> seen;
  auto scan = [&](const Polynomial& p) {
    for (const Term& t : p.terms())
      for (const auto& [a, e] : t.mono.entries()) seen.emplace(a->serial, a);
  };
  scan(r.num);
  for (const auto& [f, k] : r.den) scan(*f);
  std::vector<AtomRef> out;
  for (auto& [s, a] : seen) out.push_back(a);
  return out;
}

// ---------------------------------------------------------------------------
// Deterministic sign choice

namespace {

using Key = std::vector<std::pair<const Expr*, SmallRational>>;

Key expr_key(const Monomial& m) {
  Key k;
  for (const auto& [a, e] : m.entries()) k.emplace_back(&a->expr, e);
  std::sort(k.begin(), k.end(), [](const auto& x, const auto& y) { return compare(*x.first, *y.first) < 0; });
  return k;
}

int compare_keys(const Key& a, const Key& b) {
  std::size_t i = 0, j = 0;
  const SmallRational zero(0);
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size())
      c = 1;
    else if (j == b.size())
      c = -1;
    else
      c = compare(*a[i].first, *b[j].first);
    if (c < 0) {
      const int s = compare(a[i].second, zero);
      if (s != 0) return s;
      ++i;
    } else if (c > 0) {
      const int s = compare(zero, b[j].second);
      if (s != 0) return s;
      ++j;
    } else {
      const int s = compare(a[i].second, b[j].second);
      if (s != 0) return s;
      ++i;
      ++j;
    }
  }
  return 0;
}

}  // namespace

Rational canonical_leading_coefficient(const Polynomial& p) {
  if (p.is_zero()) return Rational(0);
  std::size_t best = 0;
  Key best_key = expr_key(p.terms()[0].mono);
  for (std::size_t i = 1; i < p.size(); ++i) {
    Key k = expr_key(p.terms()[i].mono);
    if (compare_keys(k, best_key) > 0) {
      best = i;
      best_key = std::move(k);
    }
  }
  return p.terms()[best].coeff;
}

// ---------------------------------------------------------------------------
// Normalizer

namespace {

void raw_split(const Polynomial& p, Rational& c, Monomial& m, Polynomial& prim) {
  if (p.is_zero()) throw std::domain_error("content of zero polynomial");
  if (p.is_monomial()) {
    c = p.terms()[0].coeff;
    m = p.terms()[0].mono;
    prim = Polynomial(Rational(1));
    return;
  }
  Integer g(0), l(1);
  for (const Term& t : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), t.coeff.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), t.coeff.get_den_mpz_t());
  }
  c = Rational(g, l);
  c.canonicalize();
  std::map<std::uint64_t, std::pair<AtomRef, SmallRational>> mins;
  for (const Term& t : p.terms())
    for (const auto& [a, e] : t.mono.entries()) mins.try_emplace(a->serial, a, e);
  std::vector<Monomial::Entry> content;
  for (auto& [serial, entry] : mins) {
    SmallRational lo = entry.second;
    for (const Term& t : p.terms()) {
      const SmallRational e = t.mono.exponent_of(entry.first);
      if (e < lo) lo = e;
    }
    if (!lo.is_zero()) content.emplace_back(entry.first, lo);
  }
  m = Monomial(std::move(content));
  prim = p.times(m.inverse()).scaled(Rational(1) / c);
  if (sgn(canonical_leading_coefficient(prim)) < 0) {
    prim = -prim;
    c = -c;
  }
}

// Strips q-th powers of small primes: n = s^q * rest.
void strip_powers(Integer n, std::int64_t q, Integer& s, Integer& rest) {
  s = 1;
  Integer r;
  if (exact_root(n, static_cast<unsigned long>(q), r)) {
    s = r;
    rest = 1;
    return;
  }
  for (unsigned long p = 2; p < 1000; ++p) {
    bool prime = true;
    for (unsigned long d = 2; d * d <= p; ++d)
      if (p % d == 0) {
        prime = false;
        break;
      }
    if (!prime) continue;
    Integer pq;
    mpz_ui_pow_ui(pq.get_mpz_t(), p, static_cast<unsigned long>(q));
    if (pq > n) break;
    while (mpz_divisible_p(n.get_mpz_t(), pq.get_mpz_t())) {
      n /= pq;
      s *= p;
    }
  }
  if (exact_root(n, static_cast<unsigned long>(q), r)) {
    s *= r;
    n = 1;
  }
  rest = n;
}

}  // namespace

Normalizer::Normalizer(AssumptionSet assumptions) : assumptions_(std::move(assumptions)) {
  if (assumptions_.empty()) return;
  Normalizer plain;
  for (const auto& [e, s] : assumptions_.entries()) {
    RatFun r = plain.from_expr(e);
    if (r.is_zero() || !r.den.empty()) continue;
    Rational c;
    Monomial m;
    Polynomial prim;
    raw_split(r.num, c, m, prim);
    Sign eff = s;
    if (sgn(c) < 0 && s != Sign::Nonzero) eff = (s == Sign::Positive) ? Sign::Negative : Sign::Positive;
    if (prim.is_constant()) {
      if (m.entries().size() != 1 || m.entries()[0].second != SmallRational(1)) continue;
      declared_.emplace_back(Polynomial(m), eff);
    } else if (m.empty()) {
      declared_.emplace_back(prim, eff);
    }
  }
}

bool Normalizer::matches_declared(const Polynomial& p, Sign s) const {
  for (const auto& [q, t] : declared_)
    if (t == s && q == p) return true;
  return false;
}

bool Normalizer::atom_positive(AtomRef a) const {
  if (a->kind == AtomKind::Exp) return true;
  if (a->kind == AtomKind::Root) {
    if (a->index % 2 == 0) return true;
    const Polynomial& r = *a->radicand;
    if (r.is_constant()) return r.constant_value() > 0;
    return matches_declared(r, Sign::Positive);
  }
  return matches_declared(Polynomial(Monomial::of(a)), Sign::Positive);
}

bool Normalizer::atom_negative(AtomRef a) const {
  if (a->kind == AtomKind::Exp || a->kind == AtomKind::Root) return false;
  return matches_declared(Polynomial(Monomial::of(a)), Sign::Negative);
}

void Normalizer::split_content(const Polynomial& p, Rational& c, Monomial& m, Polynomial& prim) const {
  raw_split(p, c, m, prim);
  if (prim.is_constant() || declared_.empty()) return;
  // raw_split leaves the canonical orientation; flip it if the negation is
  // the declared-positive one.
  const Polynomial neg = -prim;
  if (matches_declared(prim, Sign::Negative) || matches_declared(neg, Sign::Positive)) {
    prim = neg;
    c = -c;
  }
}

RatFun Normalizer::atom(const Expr& e) {
  if (e.is_symbol()) return RatFun(Polynomial(Monomial::of(symbol_atom(e))));
  if (e.is(Kind::FnApp)) return function(e.name(), from_expr(e.arg()), e.order());
  throw std::invalid_argument("not a symbol or function application: " + to_string(e));
}

RatFun Normalizer::function(const std::string& name, const RatFun& arg, unsigned order) {
  const Expr f = Expr::function(name, to_expr(arg), order);
  return RatFun(Polynomial(Monomial::of(function_atom(f))));
}

RatFun Normalizer::monomial_inverse(const Monomial& m) {
  RatFun result(Rational(1));
  std::vector<Monomial::Entry> laurent;
  for (const auto& [a, e] : m.entries()) {
    if (a->kind == AtomKind::Root) {
      if (!e.is_integer()) throw std::logic_error("fractional exponent on a root atom");
      // A^-e = A^(q-e) / radicand, repeated
      RatFun part = root_power(*a->radicand, a->index, -e.num());
      result = result * part;
    } else {
      laurent.emplace_back(a, -e);
    }
  }
  return result * RatFun(Polynomial(Monomial(std::move(laurent))));
}

RatFun Normalizer::inverse(const RatFun& r) {
  if (r.is_zero()) throw std::domain_error("division by zero");
  Rational c;
  Monomial m;
  Polynomial prim;
  split_content(r.num, c, m, prim);
  RatFun out(Polynomial(Rational(1) / c));
  out.num = out.num * den_product(r.den);
  out = out * monomial_inverse(m);
  if (!prim.is_constant()) {
    RatFun f(Rational(1));
    f.den.emplace_back(FactorRegistry::get().intern(prim), 1);
    out = out * f;
  }
  return out;
}

RatFun Normalizer::root_power(const Polynomial& radicand, std::int64_t index, std::int64_t power) {
  {
    const std::int64_t g = std::gcd(index, power < 0 ? -power : power);
    if (g > 1) {
      index /= g;
      power /= g;
    }
  }
  if (index == 1) {
    if (power >= 0) return RatFun(poly_power(radicand, power));
    return pow(inverse(RatFun(radicand)), Rational(-power));
  }
  if (radicand.is_zero()) {
    if (power < 0) throw std::domain_error("division by zero");
    return RatFun();
  }
  if (radicand.is_constant()) {
    Rational v = radicand.constant_value();
    if (v == 1) return RatFun(Rational(1));
    Rational sign(1);
    if (v < 0) {
      if (index % 2 == 1) {
        if (power % 2 != 0) sign = -1;
        v = -v;
      }
    }
    if (v > 0) {
      // v^(p/q) = s_n^p * A_n^p / (s_d^p * A_d^p)
      Integer sn, rn, sd, rd;
      strip_powers(v.get_num(), index, sn, rn);
      strip_powers(v.get_den(), index, sd, rd);
      Rational base = Rational(sn) / Rational(sd);
      Rational bp(1);
      const std::int64_t ap = power < 0 ? -power : power;
      for (std::int64_t i = 0; i < ap; ++i) bp *= base;
      if (power < 0) bp = Rational(1) / bp;
      RatFun out(Polynomial(sign * bp));
      auto root_of = [&](const Integer& n, std::int64_t pw) {
        if (n == 1) return RatFun(Rational(1));
        Polynomial rp{Rational(n)};
        const Expr re = psc::pow(Expr(Rational(n)), Rational(1, index));
        const AtomRef a = AtomRegistry::get().intern(AtomKind::Root, re, Expr(Rational(n)), index,
                                                     std::make_shared<const Polynomial>(rp));
        return RatFun(reduce(Polynomial(Monomial::of(a, SmallRational(pw)))));
      };
      out = out * root_of(rn, power);
      out = out * root_of(rd, -power);
      return out;
    }
  }
  const Expr rexpr = to_expr(radicand);
  const Expr aexpr = psc::pow(rexpr, Rational(1, index));
  const AtomRef a = AtomRegistry::get().intern(AtomKind::Root, aexpr, rexpr, index,
                                               std::make_shared<const Polynomial>(radicand));
  std::int64_t s = power >= 0 ? power / index : -((-power + index - 1) / index);
  const std::int64_t t = power - s * index;
  RatFun out(Polynomial(Monomial::of(a, SmallRational(t))));
  if (s > 0) out = out * RatFun(poly_power(radicand, s));
  if (s < 0) out = out * pow(inverse(RatFun(radicand)), Rational(-s));
  return out;
}

RatFun Normalizer::pow(const RatFun& r, const Rational& e) {
  if (e == 0) return RatFun(Rational(1));
  if (e == 1) return r;
  if (r.is_zero()) {
    if (e < 0) throw std::domain_error("division by zero");
    return RatFun();
  }
  if (is_integer(e)) {
    if (!e.get_num().fits_slong_p()) throw std::overflow_error("exponent too large");
    long n = e.get_num().get_si();
    RatFun base = n < 0 ? inverse(r) : r;
    n = n < 0 ? -n : n;
    RatFun result(Rational(1));
    while (n > 0) {
      if (n & 1) result = result * base;
      n >>= 1;
      if (n) base = base * base;
    }
    return result;
  }
  const SmallRational exp = SmallRational::from(e);
  const std::int64_t p = exp.num(), q = exp.den();
  Rational c;
  Monomial m;
  Polynomial prim;
  split_content(r.num, c, m, prim);
  RatFun result(Rational(1));
  bool neg_left = false;
  if (c < 0) {
    c = -c;
    if (q % 2 == 1) {
      if (p % 2 != 0) result = RatFun(Rational(-1));
    } else {
      neg_left = true;
    }
  }
  result = result * root_power(Polynomial(c), q, p);
  std::vector<Monomial::Entry> left;
  for (const auto& [a, ae] : m.entries()) {
    const SmallRational ne = ae * exp;
    if (a->kind == AtomKind::Exp) {
      result = result * RatFun(Polynomial(Monomial::of(a, ne)));
    } else if (atom_positive(a)) {
      if (ne.is_integer() && a->kind != AtomKind::Root) {
        result = result * RatFun(Polynomial(Monomial::of(a, ne)));
      } else if (ne.is_integer()) {
        const Polynomial one(Monomial::of(a));
        result = result * (ne.num() >= 0 ? RatFun(reduce(Polynomial(Monomial::of(a, ne))))
                                         : pow(inverse(RatFun(one)), Rational(-ne.num())));
      } else {
        result = result * root_power(Polynomial(Monomial::of(a)), ne.den(), ne.num());
      }
    } else if (atom_negative(a) && ae.is_integer() && ae.num() % 2 == 0 && ne.is_integer()) {
      Rational sgnv = (ne.num() % 2 == 0) ? Rational(1) : Rational(-1);
      result = result * RatFun(Polynomial(Monomial::of(a, ne), sgnv));
    } else if (ae.is_integer() && ae.num() % 2 == 0 && ne.is_integer() && ne.num() % 2 == 0) {
      // (a^(2m))^(p/q) = |a|^(2j) = a^(2j)
      result = result * RatFun(Polynomial(Monomial::of(a, ne)));
    } else {
      left.emplace_back(a, ae);
    }
  }
  Polynomial rad = prim.times(Monomial(std::move(left)));
  if (neg_left) rad = -rad;
  if (!(rad.is_constant() && rad.constant_value() == 1)) result = result * root_power(rad, q, p);
  for (const auto& [f, k] : r.den) result = result * root_power(*f, q, -static_cast<std::int64_t>(k) * p);
  return result;
}

RatFun Normalizer::exp(const RatFun& r) {
  if (r.is_zero()) return RatFun(Rational(1));
  std::vector<Monomial::Entry> atoms;
  for (const Term& t : r.num.terms()) {
    RatFun arg;
    arg.num = Polynomial(t.mono);
    arg.den = r.den;
    const AtomRef a = exp_atom(to_expr(arg));
    atoms.emplace_back(a, SmallRational::from(t.coeff));
  }
  Monomial m;
  for (const auto& [a, e] : atoms) m = m * Monomial::of(a, e);
  return RatFun(Polynomial(m));
}

RatFun Normalizer::sin(const RatFun& r) {
  if (r.is_zero()) return RatFun();
  const bool neg = sgn(canonical_leading_coefficient(r.num)) < 0;
  const AtomRef a = sin_atom(to_expr(neg ? -r : r));
  return RatFun(Polynomial(Monomial::of(a), Rational(neg ? -1 : 1)));
}

RatFun Normalizer::cos(const RatFun& r) {
  if (r.is_zero()) return RatFun(Rational(1));
  const bool neg = sgn(canonical_leading_coefficient(r.num)) < 0;
  const AtomRef a = cos_atom(to_expr(neg ? -r : r));
  return RatFun(Polynomial(Monomial::of(a)));
}

RatFun Normalizer::from_expr(const Expr& e) {
  auto it = memo_.find(e.node());
  if (it != memo_.end()) return it->second.second;
  RatFun r;
  switch (e.kind()) {
    case Kind::Number:
      r = RatFun(e.number());
      break;
    case Kind::Symbol:
      r = atom(e);
      break;
    case Kind::FnApp:
      r = function(e.name(), from_expr(e.arg()), e.order());
      break;
    case Kind::Exp:
      r = exp(from_expr(e.arg()));
      break;
    case Kind::Sin:
      r = sin(from_expr(e.arg()));
      break;
    case Kind::Cos:
      r = cos(from_expr(e.arg()));
      break;
    case Kind::Pow:
      r = pow(from_expr(e.base()), e.exponent());
      break;
    case Kind::Mul: {
      r = RatFun(Rational(1));
      for (const Expr& a : e.args()) r = r * from_expr(a);
      break;
    }
    case Kind::Add: {
      std::vector<RatFun> parts;
      parts.reserve(e.args().size());
      for (const Expr& a : e.args()) parts.push_back(from_expr(a));
      r = sum(parts);
      break;
    }
  }
  memo_.emplace(e.node(), std::make_pair(e, r));
  return r;
}

Expr Normalizer::to_expr(const Polynomial& p) const {
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (const Term& t : p.terms()) {
    std::vector<Expr> f;
    f.reserve(t.mono.entries().size() + 1);
    f.push_back(Expr(t.coeff));
    // exp atoms with polynomial arguments print as a single exp(sum)
    std::vector<Expr> exp_args;
    for (const auto& [a, e] : t.mono.entries()) {
      switch (a->kind) {
        case AtomKind::Exp:
          if (exp_polynomial_argument(a))
            exp_args.push_back(mul({Expr(e.to_rational()), a->argument}));
          else
            f.push_back(psc::exp(mul({Expr(e.to_rational()), a->argument})));
          break;
        case AtomKind::Root:
          f.push_back(psc::pow(a->argument, e.to_rational() / Rational(a->index)));
          break;
        default:
          f.push_back(psc::pow(a->expr, e.to_rational()));
          break;
      }
    }
    if (!exp_args.empty()) f.push_back(psc::exp(add(std::move(exp_args))));
    terms.push_back(mul(std::move(f)));
  }
  return add(std::move(terms));
}

Expr Normalizer::to_expr(const RatFun& r) const {
  std::vector<Expr> f;
  if (r.num.size() > 1) {
    // c * m * (primitive) reads better than a distributed numerator
    Rational c;
    Monomial m;
    Polynomial prim;
    split_content(r.num, c, m, prim);
    f.push_back(to_expr(Polynomial(m, c)));
    f.push_back(to_expr(prim));
  } else {
    f.push_back(to_expr(r.num));
  }
  for (const auto& [g, k] : r.den) f.push_back(psc::pow(to_expr(*g), Rational(-k)));
  return mul(std::move(f));
}

RatFun Normalizer::atom_derivative(AtomRef a, const Expr& wrt) {
  const bool by_function = wrt.is(Kind::FnApp);
  switch (a->kind) {
    case AtomKind::Symbol:
      return (!by_function && wrt.is_symbol() && wrt.name() == a->expr.name()) ? RatFun(Rational(1)) : RatFun();
    case AtomKind::Function: {
      if (by_function && a->expr == wrt) return RatFun(Rational(1));
      const RatFun darg = diff(from_expr(a->argument), wrt);
      if (darg.is_zero()) return RatFun();
      const Expr next = Expr::function(a->expr.name(), a->argument, a->expr.order() + 1);
      return RatFun(Polynomial(Monomial::of(function_atom(next)))) * darg;
    }
    case AtomKind::Exp: {
      const RatFun darg = diff(from_expr(a->argument), wrt);
      if (darg.is_zero()) return RatFun();
      return RatFun(Polynomial(Monomial::of(a))) * darg;
    }
    case AtomKind::Sin: {
      const RatFun arg = from_expr(a->argument);
      const RatFun darg = diff(arg, wrt);
      if (darg.is_zero()) return RatFun();
      return cos(arg) * darg;
    }
    case AtomKind::Cos: {
      const RatFun arg = from_expr(a->argument);
      const RatFun darg = diff(arg, wrt);
      if (darg.is_zero()) return RatFun();
      return -(sin(arg) * darg);
    }
    case AtomKind::Root: {
      const RatFun rad(*a->radicand);
      const RatFun drad = diff(rad, wrt);
      if (drad.is_zero()) return RatFun();
      return RatFun(Polynomial(Monomial::of(a), Rational(1, a->index))) * drad * inverse(rad);
    }
  }
  return RatFun();
}

namespace {
Polynomial poly_diff(const Polynomial& p, std::vector<RatFun>& parts, const std::function<RatFun(AtomRef)>& datom) {
  std::map<std::uint64_t, AtomRef> seen;
  for (const Term& t : p.terms())
    for (const auto& [a, e] : t.mono.entries()) seen.emplace(a->serial, a);
  Polynomial poly_part;
  for (auto& [s, a] : seen) {
    RatFun d = datom(a);
    if (d.is_zero()) continue;
    Polynomial pa = p.partial(a);
    if (d.is_polynomial())
      poly_part = poly_part + pa * d.num;
    else
      parts.push_back(RatFun(pa) * d);
  }
  return poly_part;
}
}  // namespace

RatFun Normalizer::diff(const RatFun& r, const Expr& wrt) {
  if (!wrt.is_symbol() && !wrt.is(Kind::FnApp))
    throw std::invalid_argument("can only differentiate with respect to a symbol or function: " + to_string(wrt));
  auto datom = [&](AtomRef a) {
    const std::string key = std::to_string(a->serial) + "|" + to_string(wrt);
    auto it = deriv_memo_.find(key);
    if (it != deriv_memo_.end()) return it->second;
    RatFun d = atom_derivative(a, wrt);
    deriv_memo_.emplace(key, d);
    return d;
  };
  std::vector<RatFun> parts;
  Polynomial dn = poly_diff(r.num, parts, datom);
  RatFun num_part = sum(parts) + RatFun(dn);
  if (r.den.empty()) return num_part;
  RatFun inv_den(Rational(1));
  inv_den.den = r.den;
  RatFun out = num_part * inv_den;
  // d(1/f^k) = -k f' / f^(k+1)
  for (const auto& [f, k] : r.den) {
    std::vector<RatFun> fparts;
    Polynomial df = poly_diff(*f, fparts, datom);
    RatFun dfr = sum(fparts) + RatFun(df);
    if (dfr.is_zero()) continue;
    RatFun one_over_f(Rational(1));
    one_over_f.den.emplace_back(f, 1);
    RatFun term = RatFun(r.num) * inv_den * one_over_f * dfr;
    out = out - RatFun(Polynomial(Rational(k))) * term;
  }
  return out;
}

RatFun Normalizer::substitute(const RatFun& r, const ExprMap<Expr>& replacements) {
  if (replacements.empty()) return r;
  return from_expr(psc::substitute(to_expr(r), replacements));
}

bool Normalizer::independent_of(const RatFun& r, std::span<const Expr> symbols) {
  for (AtomRef a : atoms_of(r))
    if (depends_on_any(a->expr, symbols)) return false;
  return true;
}

}  // namespace psc
