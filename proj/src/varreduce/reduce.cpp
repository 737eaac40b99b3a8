#include "psc/varreduce/reduce.hpp"

#include <algorithm>
#include <random>
#include <stdexcept>

#include "psc/exprcore/calculus.hpp"

namespace psc {

namespace {

Expr fn(const std::string& name, const Expr& s, unsigned k) { return Expr::function(name, s, k); }
std::string var_name(const std::string& f) { return "var_" + f; }

void check_order(const Expr& density, const VariationalBase& base) {
  ExprMap<bool> syms, fns;
  collect_atoms(density, syms, fns);
  if (base.coords.size() == 1) {
    for (const auto& [f, _] : fns)
      for (const std::string& name : base.fields)
        if (f.name() == name) {
          if (f.arg() != base.coords[0]) throw std::invalid_argument("field " + name + " must be a function of the base");
          if (f.order() > 2) throw std::invalid_argument("density has derivative order > 2 in " + name);
        }
  } else if (base.coords.size() > 1) {
    for (const std::string& name : base.fields)
      for (std::size_t i = 0; i < base.coords.size(); ++i)
        for (std::size_t j = i; j < base.coords.size(); ++j) {
          const Expr s = jet_symbol(name, base.coords, {static_cast<int>(i), static_cast<int>(j)});
          if (syms.count(s)) throw std::invalid_argument("multi-dimensional densities must be first order");
        }
  }
}

}  // namespace

Expr jet_symbol(const std::string& field, const std::vector<Expr>& coords, std::vector<int> derivs) {
  std::sort(derivs.begin(), derivs.end());
  std::string name = field;
  for (int d : derivs) name += "_" + coords.at(static_cast<std::size_t>(d)).name();
  return Expr::symbol(name, SymbolRole::ReducedField);
}

Expr total_derivative(const Expr& e, const VariationalBase& base, std::size_t i) {
  if (base.coords.empty()) throw std::invalid_argument("total derivative on a 0-dimensional base");
  if (base.coords.size() == 1) return differentiate(e, base.coords[0]);
  const std::vector<Expr>& c = base.coords;
  const int ii = static_cast<int>(i);
  std::vector<Expr> terms{differentiate(e, c[i])};
  for (const std::string& f : base.fields) {
    for (const std::string& g : {f, var_name(f)}) {
      const Expr u = Expr::symbol(g, SymbolRole::ReducedField);
      terms.push_back(jet_symbol(g, c, {ii}) * differentiate(e, u));
      for (std::size_t j = 0; j < c.size(); ++j) {
        const Expr uj = jet_symbol(g, c, {static_cast<int>(j)});
        terms.push_back(jet_symbol(g, c, {ii, static_cast<int>(j)}) * differentiate(e, uj));
      }
    }
  }
  return normalize(add(std::move(terms)));
}

EulerLagrangeSet euler_operator(const Expr& density, const VariationalBase& base, const AssumptionSet& A) {
  check_order(density, base);
  EulerLagrangeSet out;
  for (const std::string& f : base.fields) {
    Expr E;
    if (base.coords.empty()) {
      E = differentiate(density, Expr::symbol(f, SymbolRole::ReducedField));
    } else if (base.coords.size() == 1) {
      const Expr& s = base.coords[0];
      const Expr d0 = differentiate(density, fn(f, s, 0));
      const Expr d1 = differentiate(density, fn(f, s, 1));
      const Expr d2 = differentiate(density, fn(f, s, 2));
      E = d0 - total_derivative(d1, base, 0) + total_derivative(total_derivative(d2, base, 0), base, 0);
    } else {
      std::vector<Expr> t{differentiate(density, Expr::symbol(f, SymbolRole::ReducedField))};
      for (std::size_t i = 0; i < base.coords.size(); ++i)
        t.push_back(-total_derivative(differentiate(density, jet_symbol(f, base.coords, {static_cast<int>(i)})), base, i));
      E = add(std::move(t));
    }
    out.emplace_back(f, normalize(E, A));
  }
  return out;
}

BoundaryForm boundary_form(const Expr& density, const VariationalBase& base, const AssumptionSet& A) {
  const EulerLagrangeSet el = euler_operator(density, base, A);
  BoundaryForm out;
  std::vector<Expr> dL, EdQ;
  const std::size_t nb = base.coords.size();
  out.eta.assign(nb, Expr(0));
  for (std::size_t a = 0; a < base.fields.size(); ++a) {
    const std::string& f = base.fields[a];
    if (nb == 0) {
      const Expr dq = Expr::symbol(var_name(f), SymbolRole::ReducedField);
      out.variations.push_back(dq);
      dL.push_back(differentiate(density, Expr::symbol(f, SymbolRole::ReducedField)) * dq);
      EdQ.push_back(el[a].second * dq);
    } else if (nb == 1) {
      const Expr& s = base.coords[0];
      const Expr dq = fn(var_name(f), s, 0);
      out.variations.push_back(dq);
      std::vector<Expr> p;
      for (unsigned k = 0; k <= 2; ++k) {
        p.push_back(differentiate(density, fn(f, s, k)));
        dL.push_back(p.back() * fn(var_name(f), s, k));
      }
      EdQ.push_back(el[a].second * dq);
      out.eta[0] = out.eta[0] + (p[1] - total_derivative(p[2], base, 0)) * dq + p[2] * fn(var_name(f), s, 1);
    } else {
      const Expr u = Expr::symbol(f, SymbolRole::ReducedField);
      const Expr du = Expr::symbol(var_name(f), SymbolRole::ReducedField);
      out.variations.push_back(du);
      dL.push_back(differentiate(density, u) * du);
      EdQ.push_back(el[a].second * du);
      for (std::size_t i = 0; i < nb; ++i) {
        const int ii = static_cast<int>(i);
        const Expr p = differentiate(density, jet_symbol(f, base.coords, {ii}));
        dL.push_back(p * jet_symbol(var_name(f), base.coords, {ii}));
        out.eta[i] = out.eta[i] + p * du;
      }
    }
  }
  for (Expr& e : out.eta) e = normalize(e, A);
  std::vector<Expr> residual{add(dL), -add(EdQ)};
  for (std::size_t i = 0; i < nb; ++i) residual.push_back(-total_derivative(out.eta[i], base, i));
  out.identity_holds = is_zero(add(std::move(residual)), A);
  return out;
}

namespace {

std::size_t generic_rank(const std::vector<Vector>& rows, std::size_t cols, Normalizer& nz) {
  Matrix M(0, cols);
  for (const Vector& r : rows) M.append_row(r);
  return M.rows() ? rank(M, nz) : 0;
}

bool tangent_at(const ActionSpec& action, const TensorField& chi, int l, const ExprMap<Expr>* point) {
  const std::size_t n = action.chart->dim();
  auto at = [&](const Expr& e) { return point ? psc::substitute(e, *point) : e; };
  Normalizer nz(action.chart->assumptions);
  const auto subs = ordered_subsets(static_cast<int>(n), l);
  std::vector<Vector> rows;
  for (const Index& I : ordered_subsets(static_cast<int>(action.generators.size()), l)) {
    std::vector<TensorField> f;
    for (int i : I) f.push_back(action.generators[static_cast<std::size_t>(i)]);
    const TensorField w = l == 1 ? f[0] : wedge(f);
    Vector v;
    for (const Index& J : subs) v.push_back(nz.from_expr(at(w.get(J))));
    rows.push_back(std::move(v));
  }
  const std::size_t r0 = generic_rank(rows, subs.size(), nz);
  Vector c;
  for (const Index& J : subs) c.push_back(nz.from_expr(at(chi.get(J))));
  rows.push_back(std::move(c));
  return generic_rank(rows, subs.size(), nz) == r0;
}

}  // namespace

EtaCheck verify_eta_invariance(const ActionSpec& action, const Expr& density, const std::vector<std::string>& fields,
                               const ExprMap<Expr>& ansatz) {
  EtaCheck out;
  const ChartRef& ch = action.chart;
  const AssumptionSet& A = ch->assumptions;
  const std::size_t n = ch->dim();
  const BoundaryForm bf = boundary_form(density, {ch->coords, fields}, A);
  if (!bf.identity_holds) return out;
  out.checked = true;
  ExprMap<Expr> constant;
  for (const Expr& v : bf.variations) constant[v] = Expr(1);
  std::vector<Expr> V;
  for (const Expr& e : bf.eta) V.push_back(normalize(substitute(substitute(e, constant), ansatz), A));
  TensorField vol = TensorField::form(ch, static_cast<int>(n));
  Index top;
  for (std::size_t a = 0; a < n; ++a) top.push_back(static_cast<int>(a));
  vol.set(top, Expr(1));
  out.eta = normalized(interior_product(TensorField::vector(ch, V), vol));
  out.invariant = true;
  for (const TensorField& X : action.generators) {
    TensorField r = normalized(lie_derivative(X, out.eta));
    if (!r.is_zero()) out.invariant = false;
    out.residuals.push_back(std::move(r));
  }
  return out;
}

ChiCheck verify_chi(const ActionSpec& action, const TensorField& chi, int samples, std::uint64_t seed) {
  ChiCheck out;
  const std::size_t n = action.chart->dim();
  Normalizer nz(action.chart->assumptions);
  std::vector<Vector> rows;
  for (const TensorField& X : action.generators) {
    Vector v;
    for (std::size_t a = 0; a < n; ++a) v.push_back(nz.from_expr(X.get({static_cast<int>(a)})));
    rows.push_back(std::move(v));
  }
  out.orbit_dim = generic_rank(rows, n, nz);
  const int l = chi.up();
  out.degree_ok = chi.down() == 0 && l == static_cast<int>(out.orbit_dim) &&
                  (l <= 1 || chi.symmetry() == Symmetry::Antisymmetric);
  out.invariant = true;
  for (const TensorField& X : action.generators) {
    TensorField r = normalized(lie_derivative(X, chi));
    if (!r.is_zero()) out.invariant = false;
    out.residuals.push_back(std::move(r));
  }
  if (!out.degree_ok) return out;
  out.tangent = tangent_at(action, chi, l, nullptr);
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<long> num(-40, 40), den(1, 9);
  for (int s = 0; s < samples && out.tangent; ++s) {
    ExprMap<Expr> pt;
    for (const Expr& c : action.chart->coords) pt[c] = Expr(Rational(num(rng), den(rng)));
    try {
      out.tangent = tangent_at(action, chi, l, &pt);
    } catch (const std::exception&) {
      // singular sample (e.g. a zero denominator); skip it
    }
  }
  return out;
}

ReducedLagrangian reduce_lagrangian(const TensorField& lambda, const TensorField& chi, const ActionSpec& action,
                                    const QuotientSpec& quotient) {
  const std::size_t n = action.chart->dim();
  if (lambda.up() != 0 || lambda.down() != static_cast<int>(n)) throw std::invalid_argument("λ must be an n-form");
  const std::size_t l = static_cast<std::size_t>(chi.up());
  const std::size_t q = n - l;
  if (q > 1) throw std::invalid_argument("only 0- and 1-dimensional orbit spaces are supported");
  if (quotient.coords.size() != q || quotient.invariants.size() != q)
    throw std::invalid_argument("quotient needs " + std::to_string(q) + " coordinate(s) and invariant(s)");

  const AssumptionSet& A = action.chart->assumptions;
  ReducedLagrangian out;
  out.coords = quotient.coords;
  out.contracted = normalized(interior_product(chi, lambda));
  out.basic = true;
  for (const TensorField& X : action.generators) {
    if (q > 0 && !normalized(interior_product(X, out.contracted)).is_zero()) out.basic = false;
    if (!normalized(lie_derivative(X, out.contracted)).is_zero()) out.basic = false;
  }
  if (!out.basic) throw std::domain_error("χ·λ is not basic; check χ and the ansatz");

  if (q == 0) {
    const Expr h = out.contracted.get({});
    for (const Expr& c : action.chart->coords)
      if (!is_zero(differentiate(h, c), A)) throw std::domain_error("reduced 0-form depends on " + c.name());
    out.density = normalize(h, A);
    return out;
  }

  // χ·λ = h d(inv)
  const Expr& inv = quotient.invariants[0];
  std::optional<Expr> h;
  std::vector<Expr> grad;
  for (const Expr& c : action.chart->coords) grad.push_back(differentiate(inv, c));
  for (std::size_t i = 0; i < n; ++i)
    if (!is_zero(grad[i], A)) {
      h = normalize(out.contracted.get({static_cast<int>(i)}) / grad[i], A);
      break;
    }
  if (!h) throw std::domain_error("invariant is constant");
  for (std::size_t i = 0; i < n; ++i)
    if (!is_zero(out.contracted.get({static_cast<int>(i)}) - *h * grad[i], A))
      throw std::domain_error("χ·λ is not a multiple of d(invariant); declare more invariants");
  if (!equals(psc::substitute(inv, quotient.slice), quotient.coords[0], A))
    throw std::domain_error("slice does not meet the invariant level sets at the quotient coordinate");
  out.density = normalize(psc::substitute(*h, quotient.slice), A);
  for (const Expr& c : action.chart->coords)
    if (c != quotient.coords[0] && contains(out.density, c)) throw std::domain_error("reduced density still depends on " + c.name());
  // pulled back along the invariant it must reproduce h
  const Expr back = psc::substitute(out.density, ExprMap<Expr>{{quotient.coords[0], inv}});
  if (!equals(back, *h, A)) throw std::domain_error("reduced density does not pull back to χ·λ");
  return out;
}

TensorField einstein_hilbert(const CurvatureBundle& c) {
  const ChartRef& chart = c.einstein.chart();
  TensorField out = TensorField::form(chart, static_cast<int>(chart->dim()));
  Index top;
  for (std::size_t i = 0; i < chart->dim(); ++i) top.push_back(static_cast<int>(i));
  out.set(top, normalize(c.scalar * c.sqrt_abs_det, chart->assumptions));
  return out;
}

std::vector<ReducedEquation> reduced_field_equations(const CurvatureBundle& c, const std::vector<FiberVector>& vp_star) {
  const std::size_t n = c.einstein.dim();
  const auto slots = MetricBundle::slots(n);
  std::vector<ReducedEquation> out;
  for (std::size_t i = 0; i < vp_star.size(); ++i) {
    std::optional<std::size_t> free;
    for (std::size_t s = 0; s < slots.size() && !free; ++s) {
      if (!vp_star[i][s].is_one()) continue;
      bool alone = true;
      for (std::size_t j = 0; j < vp_star.size(); ++j)
        if (j != i && !vp_star[j][s].is_zero()) alone = false;
      if (alone) free = s;
    }
    if (!free)
      for (std::size_t s = 0; s < slots.size() && !free; ++s)
        if (!vp_star[i][s].is_zero()) free = s;
    if (!free) continue;
    const auto [a, b] = slots[*free];
    const Expr e = c.einstein.get({a, b});
    if (is_zero(e, c.einstein.chart()->assumptions)) continue;
    std::string label = "E";
    if (n < 10) label += std::to_string(a + 1) + std::to_string(b + 1);
    else label += std::to_string(a + 1) + "," + std::to_string(b + 1);
    out.push_back(ReducedEquation{label, Index{a, b}, e});
  }
  std::sort(out.begin(), out.end(), [](const ReducedEquation& x, const ReducedEquation& y) { return x.slot > y.slot; });
  return out;
}

const char* to_string(DiscrepancyStatus s) {
  switch (s) {
    case DiscrepancyStatus::Zero:
      return "zero";
    case DiscrepancyStatus::Conditional:
      return "conditional";
    case DiscrepancyStatus::Nonzero:
      return "nonzero";
  }
  return "?";
}

bool Comparison::agrees() const {
  for (const Discrepancy& d : discrepancies)
    if (d.status != DiscrepancyStatus::Zero) return false;
  return unenforced.empty();
}

Comparison psc_compare(const EulerLagrangeSet& el, const std::vector<ReducedEquation>& equations,
                       const std::vector<Pairing>& pairings, const ExprMap<Expr>& slice, const AssumptionSet& A,
                       const std::vector<Expr>& exclude) {
  Comparison out;
  Normalizer nz(A);
  std::vector<std::string> used;
  for (const auto& [field, E] : el) {
    const Pairing* p = nullptr;
    for (const Pairing& q : pairings)
      if (q.field == field) p = &q;
    if (!p) throw std::invalid_argument("missing pairing for reduced field " + field);
    Expr rhs(0);
    if (p->equation) {
      const ReducedEquation* eq = nullptr;
      for (const ReducedEquation& r : equations)
        if (r.label == *p->equation) eq = &r;
      if (eq) rhs = p->weight * eq->expression;
      used.push_back(*p->equation);
    }
    Discrepancy d;
    d.field = field;
    d.equation = p->equation;
    const RatFun r = nz.from_expr(psc::substitute(E - rhs, slice));
    d.expression = nz.to_expr(r);
    if (r.is_zero()) {
      d.status = DiscrepancyStatus::Zero;
    } else {
      Rational c;
      Monomial m;
      Polynomial prim;
      nz.split_content(r.num, c, m, prim);
      for (const auto& [a, e] : m.entries()) {
        if (a->kind != AtomKind::Symbol || e.to_rational() <= 0) continue;
        if (A.sign_of(a->expr)) continue;
        if (std::find(exclude.begin(), exclude.end(), a->expr) != exclude.end()) continue;
        d.zero_when.push_back(a->expr);
      }
      d.status = d.zero_when.empty() ? DiscrepancyStatus::Nonzero : DiscrepancyStatus::Conditional;
    }
    // E(λ̂) vanishing while the paired equation does not: the reduction misses it
    if (p->equation && d.status != DiscrepancyStatus::Zero && is_zero(E, A) &&
        std::find(out.unenforced.begin(), out.unenforced.end(), *p->equation) == out.unenforced.end())
      out.unenforced.push_back(*p->equation);
    out.discrepancies.push_back(std::move(d));
  }
  for (const ReducedEquation& r : equations)
    if (std::find(used.begin(), used.end(), r.label) == used.end() &&
        std::find(out.unenforced.begin(), out.unenforced.end(), r.label) == out.unenforced.end())
      out.unenforced.push_back(r.label);
  return out;
}

std::string overall_verdict(const ConditionOne& c1, const ConditionTwo& c2, const Comparison* cmp) {
  if (!c1.pass()) return "condition (i) fails: H^" + std::to_string(c1.degree) + "(G,G_x) = 0";
  if (!c2.pass()) return "condition (ii) fails: intersection dimension " + std::to_string(c2.intersection_dim);
  if (cmp && !cmp->agrees()) return "reduction disagrees";
  return "PSC holds (local test)";
}

}  // namespace psc
