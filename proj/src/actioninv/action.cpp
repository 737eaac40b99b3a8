#include "psc/actioninv/action.hpp"

#include <stdexcept>

#include "psc/exprcore/calculus.hpp"

namespace psc {

namespace {

Matrix to_matrix(const ExprMatrix& m, Normalizer& nz) {
  Matrix out(m.size(), m.empty() ? 0 : m[0].size());
  for (std::size_t i = 0; i < m.size(); ++i)
    for (std::size_t j = 0; j < m[i].size(); ++j) out(i, j) = nz.from_expr(m[i][j]);
  return out;
}

std::vector<FiberVector> to_fiber(const std::vector<Vector>& v, const Normalizer& nz) {
  std::vector<FiberVector> out;
  for (const Vector& x : v) {
    FiberVector f;
    for (const RatFun& r : x) f.push_back(nz.to_expr(r));
    out.push_back(std::move(f));
  }
  return out;
}

std::vector<Vector> to_vectors(const std::vector<FiberVector>& v, Normalizer& nz) {
  std::vector<Vector> out;
  for (const FiberVector& f : v) {
    Vector x;
    for (const Expr& e : f) x.push_back(nz.from_expr(e));
    out.push_back(std::move(x));
  }
  return out;
}

void add_unique(std::vector<Expr>& to, const std::vector<Expr>& from) {
  for (const Expr& e : from) {
    bool seen = false;
    for (const Expr& f : to)
      if (f == e) seen = true;
    if (!seen) to.push_back(e);
  }
}

// Jacobian ∂_b X^a evaluated at the point
Matrix jacobian_at(const TensorField& X, const PointSpec& p, const AssumptionSet& A, Normalizer& nz) {
  const Chart& ch = *X.chart();
  const std::size_t n = ch.dim();
  Matrix J(n, n);
  for (std::size_t a = 0; a < n; ++a) {
    const Expr comp = X.get({static_cast<int>(a)});
    if (comp.is_zero()) continue;
    for (std::size_t b = 0; b < n; ++b) J(a, b) = nz.from_expr(evaluate_at(differentiate(comp, ch.coords[b]), p, A));
  }
  return J;
}

Matrix combine(const std::vector<Matrix>& Js, const Vector& c) {
  const std::size_t n = Js.empty() ? 0 : Js[0].rows();
  Matrix out(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      std::vector<RatFun> t;
      for (std::size_t i = 0; i < Js.size(); ++i)
        if (!c[i].is_zero() && !Js[i](a, b).is_zero()) t.push_back(c[i] * Js[i](a, b));
      out(a, b) = sum(t);
    }
  return out;
}

Matrix product(const Matrix& x, const Matrix& y) {
  Matrix out(x.rows(), y.cols());
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < y.cols(); ++j) {
      std::vector<RatFun> t;
      for (std::size_t k = 0; k < x.cols(); ++k)
        if (!x(i, k).is_zero() && !y(k, j).is_zero()) t.push_back(x(i, k) * y(k, j));
      out(i, j) = sum(t);
    }
  return out;
}

}  // namespace

AssumptionSet point_assumptions(const ActionSpec& action, const PointSpec& p) {
  AssumptionSet out = p.assumptions;
  for (const auto& [e, s] : action.chart->assumptions.entries()) {
    const Expr at = psc::substitute(psc::substitute(e, p.coords), p.atoms);
    try {
      out.declare(at, s);
    } catch (const std::invalid_argument&) {
      // becomes constant or duplicates a point declaration
    }
  }
  return out;
}

Expr evaluate_at(const Expr& e, const PointSpec& p, const AssumptionSet& A) {
  return normalize(psc::substitute(psc::substitute(e, p.coords), p.atoms), A);
}

OrbitDimension orbit_dimension(const ActionSpec& action, const PointSpec& p) {
  const AssumptionSet A = point_assumptions(action, p);
  Normalizer nz(A);
  const std::size_t n = action.chart->dim();
  Matrix M(action.generators.size(), n);
  for (std::size_t i = 0; i < action.generators.size(); ++i)
    for (std::size_t a = 0; a < n; ++a)
      M(i, a) = nz.from_expr(evaluate_at(action.generators[i].get({static_cast<int>(a)}), p, A));
  const Rref r = rref(M, nz);
  return OrbitDimension{r.rank(), r.conditions};
}

IsotropyData isotropy_subalgebra(const ActionSpec& action, const PointSpec& p) {
  const AssumptionSet A = point_assumptions(action, p);
  Normalizer nz(A);
  const std::size_t n = action.chart->dim(), m = action.generators.size();
  Matrix M(n, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t a = 0; a < n; ++a)
      M(a, i) = nz.from_expr(evaluate_at(action.generators[i].get({static_cast<int>(a)}), p, A));
  IsotropyData out;
  const std::vector<Vector> ker = nullspace(M, nz, &out.conditions);
  out.basis = to_fiber(ker, nz);
  if (ker.empty()) {
    out.representation_checked = true;
    return out;
  }
  std::vector<Matrix> J;
  for (const TensorField& X : action.generators) J.push_back(jacobian_at(X, p, A, nz));
  std::vector<Matrix> lin;
  for (const Vector& c : ker) {
    lin.push_back(combine(J, c));
    ExprMatrix e(n, std::vector<Expr>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) e[a][b] = nz.to_expr(lin.back()(a, b));
    out.linearizations.push_back(std::move(e));
  }
  // A([V,W]) = -[A(V), A(W)] at a common zero
  std::vector<std::vector<Matrix>> JB(m, std::vector<Matrix>(m));
  bool ok = true;
  for (std::size_t i = 0; i < ker.size() && ok; ++i)
    for (std::size_t j = i + 1; j < ker.size() && ok; ++j) {
      Matrix lhs(n, n);
      for (std::size_t x = 0; x < m; ++x)
        for (std::size_t y = 0; y < m; ++y) {
          if (x == y || ker[i][x].is_zero() || ker[j][y].is_zero()) continue;
          if (JB[x][y].rows() == 0) JB[x][y] = jacobian_at(lie_bracket(action.generators[x], action.generators[y]), p, A, nz);
          const RatFun f = ker[i][x] * ker[j][y];
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b)
              if (!JB[x][y](a, b).is_zero()) lhs(a, b) = lhs(a, b) + f * JB[x][y](a, b);
        }
      const Matrix ab = product(lin[i], lin[j]), ba = product(lin[j], lin[i]);
      for (std::size_t a = 0; a < n && ok; ++a)
        for (std::size_t b = 0; b < n && ok; ++b)
          if (!(lhs(a, b) + ab(a, b) - ba(a, b)).is_zero()) ok = false;
    }
  out.representation_checked = ok;
  if (!ok) throw std::logic_error("isotropy linearization is not a representation");
  return out;
}

std::vector<std::pair<int, int>> MetricBundle::slots(std::size_t n) {
  std::vector<std::pair<int, int>> s;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) s.emplace_back(static_cast<int>(a), static_cast<int>(b));
  return s;
}

namespace {

Matrix symmetric_action(const Matrix& A, bool dual) {
  const std::size_t n = A.rows();
  const auto s = MetricBundle::slots(n);
  Matrix M(s.size(), s.size());
  for (std::size_t col = 0; col < s.size(); ++col) {
    const auto [p, q] = s[col];
    auto Q = [&](int a, int b) { return (a == p && b == q) || (a == q && b == p); };
    for (std::size_t row = 0; row < s.size(); ++row) {
      const auto [a, b] = s[row];
      std::vector<RatFun> t;
      for (std::size_t c = 0; c < n; ++c) {
        const int ci = static_cast<int>(c);
        if (!dual) {
          // (A·Q)_ab = -A^c_a Q_cb - A^c_b Q_ac
          if (Q(ci, b) && !A(c, a).is_zero()) t.push_back(-A(c, a));
          if (Q(a, ci) && !A(c, b).is_zero()) t.push_back(-A(c, b));
        } else {
          // (A·W)^ab = A^a_c W^cb + A^b_c W^ac
          if (Q(ci, b) && !A(a, c).is_zero()) t.push_back(A(a, c));
          if (Q(a, ci) && !A(b, c).is_zero()) t.push_back(A(b, c));
        }
      }
      M(row, col) = sum(t);
    }
  }
  return M;
}

}  // namespace

Matrix MetricBundle::action(const Matrix& A) const { return symmetric_action(A, false); }
Matrix MetricBundle::dual_action(const Matrix& A) const { return symmetric_action(A, true); }

std::vector<Rational> MetricBundle::pairing_weights(std::size_t n) const {
  std::vector<Rational> w;
  for (const auto& [a, b] : slots(n)) w.push_back(Rational(a == b ? 1 : 2));
  return w;
}

std::string MetricBundle::element_string(const std::vector<Expr>& coeffs, const Chart& chart, bool dual) const {
  const auto s = slots(chart.dim());
  const std::string d = dual ? "∂" : "d";
  std::vector<std::pair<Expr, std::string>> terms;
  for (std::size_t i = 0; i < s.size() && i < coeffs.size(); ++i) {
    const auto [a, b] = s[i];
    const std::string x = d + chart.coords[a].name(), y = d + chart.coords[b].name();
    terms.emplace_back(coeffs[i], a == b ? x + "⊗" + x : x + "⊙" + y);
  }
  return combination_string(terms);
}

std::string ScalarBundle::element_string(const std::vector<Expr>& coeffs, const Chart&, bool) const {
  return combination_string({{coeffs.empty() ? Expr(0) : coeffs[0], ""}});
}

std::shared_ptr<const VerticalModel> make_vertical_model(const std::string& name) {
  if (name == "metric") return std::make_shared<MetricBundle>();
  if (name == "scalar") return std::make_shared<ScalarBundle>();
  throw std::invalid_argument("unknown vertical model '" + name + "'");
}

std::vector<FiberVector> invariant_fiber(const ActionSpec& action, const PointSpec& p, const VerticalModel& model,
                                         const IsotropyData& iso, bool dual, std::vector<Expr>* conditions) {
  const AssumptionSet A = point_assumptions(action, p);
  Normalizer nz(A);
  const std::size_t n = action.chart->dim(), N = model.fiber_dim(n);
  Matrix M(0, N);
  for (const ExprMatrix& L : iso.linearizations) {
    const Matrix Am = to_matrix(L, nz);
    const Matrix R = dual ? model.dual_action(Am) : model.action(Am);
    for (std::size_t i = 0; i < R.rows(); ++i) M.append_row(R.row(i));
  }
  if (M.rows() == 0) {
    std::vector<FiberVector> all;
    for (std::size_t i = 0; i < N; ++i) {
      FiberVector f(N, Expr(0));
      f[i] = Expr(1);
      all.push_back(std::move(f));
    }
    return all;
  }
  std::vector<Expr> conds;
  const auto ker = nullspace(M, nz, &conds);
  if (conditions) add_unique(*conditions, conds);
  return to_fiber(ker, nz);
}

std::vector<FiberVector> invariant_metric_fiber(const ActionSpec& action, const PointSpec& p) {
  return invariant_fiber(action, p, MetricBundle(), isotropy_subalgebra(action, p), false);
}

FiberBasis condition2_check(const ActionSpec& action, const PointSpec& p, const VerticalModel& model) {
  const AssumptionSet A = point_assumptions(action, p);
  Normalizer nz(A);
  const std::size_t N = model.fiber_dim(action.chart->dim());
  const auto w = model.pairing_weights(action.chart->dim());
  FiberBasis out;
  const IsotropyData iso = isotropy_subalgebra(action, p);
  add_unique(out.conditions, iso.conditions);
  out.vp = invariant_fiber(action, p, model, iso, false, &out.conditions);
  out.vp_star = invariant_fiber(action, p, model, iso, true, &out.conditions);
  const auto Q = to_vectors(out.vp, nz), W = to_vectors(out.vp_star, nz);

  // V_p^0: dual vectors with ⟨·, Q_j⟩ = 0
  if (Q.empty()) {
    for (std::size_t i = 0; i < N; ++i) {
      FiberVector f(N, Expr(0));
      f[i] = Expr(1);
      out.annihilator.push_back(std::move(f));
    }
  } else {
    Matrix P(Q.size(), N);
    for (std::size_t j = 0; j < Q.size(); ++j)
      for (std::size_t s = 0; s < N; ++s) P(j, s) = Q[j][s] * RatFun(w[s]);
    out.annihilator = to_fiber(nullspace(P, nz, &out.conditions), nz);
  }

  // V_p* ∩ V_p^0 = {Σ y_i W_i : Σ_i y_i ⟨W_i, Q_j⟩ = 0}
  if (!W.empty()) {
    std::vector<Vector> ys;
    if (Q.empty()) {
      for (std::size_t i = 0; i < W.size(); ++i) {
        Vector y(W.size());
        y[i] = RatFun(Rational(1));
        ys.push_back(std::move(y));
      }
    } else {
      Matrix G(Q.size(), W.size());
      for (std::size_t j = 0; j < Q.size(); ++j)
        for (std::size_t i = 0; i < W.size(); ++i) {
          std::vector<RatFun> t;
          for (std::size_t s = 0; s < N; ++s)
            if (!W[i][s].is_zero() && !Q[j][s].is_zero()) t.push_back(W[i][s] * Q[j][s] * RatFun(w[s]));
          G(j, i) = sum(t);
        }
      ys = nullspace(G, nz, &out.conditions);
    }
    for (const Vector& y : ys) {
      Vector v(N);
      for (std::size_t i = 0; i < W.size(); ++i)
        if (!y[i].is_zero())
          for (std::size_t s = 0; s < N; ++s)
            if (!W[i][s].is_zero()) v[s] = v[s] + y[i] * W[i][s];
      out.intersection.push_back(to_fiber({v}, nz)[0]);
    }
  }
  out.pass = out.intersection.empty();
  return out;
}

FiberBasis condition2_check(const ActionSpec& action, const PointSpec& p) {
  return condition2_check(action, p, MetricBundle());
}

bool same_span(const std::vector<FiberVector>& a, const std::vector<FiberVector>& b, const AssumptionSet& A) {
  Normalizer nz(A);
  auto rk = [&](const std::vector<FiberVector>& v) -> std::size_t {
    if (v.empty()) return 0;
    Matrix M(0, v[0].size());
    for (const auto& x : to_vectors(v, nz)) M.append_row(x);
    return rank(M, nz);
  };
  std::vector<FiberVector> ab = a;
  ab.insert(ab.end(), b.begin(), b.end());
  const std::size_t r = rk(ab);
  return rk(a) == r && rk(b) == r;
}

AnsatzCheck verify_invariant_ansatz(const ActionSpec& action, const TensorField& T) {
  AnsatzCheck out;
  for (const TensorField& X : action.generators) {
    TensorField r = normalized(lie_derivative(X, T));
    if (!r.is_zero()) out.invariant = false;
    out.residuals.push_back(std::move(r));
  }
  return out;
}

FiberVector metric_at_point(const TensorField& g, const PointSpec& p, const AssumptionSet& A) {
  FiberVector out;
  for (const auto& [a, b] : MetricBundle::slots(g.dim())) out.push_back(evaluate_at(g.get({a, b}), p, A));
  return out;
}

}  // namespace psc
