#include "psc/liecoh/lie.hpp"

#include <map>
#include <stdexcept>

#include "psc/exprcore/calculus.hpp"

namespace psc {

namespace {

using RVec = std::vector<RatFun>;

struct Dense {
  int n;
  RVec c;
  const RatFun& at(int a, int b, int cc) const { return c[(static_cast<std::size_t>(a) * n + b) * n + cc]; }
};

Dense dense_constants(const LieAlgebra& L, Normalizer& nz) {
  Dense d{L.n, {}};
  d.c.reserve(L.c.size());
  for (const Expr& e : L.c) d.c.push_back(nz.from_expr(e));
  return d;
}

RVec to_rat(const std::vector<Expr>& v, Normalizer& nz) {
  RVec out;
  out.reserve(v.size());
  for (const Expr& e : v) out.push_back(nz.from_expr(e));
  return out;
}

std::vector<Expr> to_exprs(const RVec& v, const Normalizer& nz) {
  std::vector<Expr> out;
  out.reserve(v.size());
  for (const RatFun& r : v) out.push_back(nz.to_expr(r));
  return out;
}

std::map<Index, std::size_t> positions(int n, int k) {
  std::map<Index, std::size_t> pos;
  const auto subs = ordered_subsets(n, k);
  for (std::size_t i = 0; i < subs.size(); ++i) pos.emplace(subs[i], i);
  return pos;
}

void add_unique(std::vector<Expr>& to, const std::vector<Expr>& from) {
  for (const Expr& e : from) {
    bool seen = false;
    for (const Expr& f : to)
      if (f == e) seen = true;
    if (!seen) to.push_back(e);
  }
}

// d on Λ^k, one cochain at a time
RVec apply_d(const Dense& C, const RVec& omega, int k) {
  const int n = C.n;
  const auto out_subs = ordered_subsets(n, k + 1);
  const auto pos = positions(n, k);
  RVec out(out_subs.size());
  for (std::size_t r = 0; r < out_subs.size(); ++r) {
    const Index& J = out_subs[r];
    std::vector<RatFun> terms;
    for (int p = 0; p <= k; ++p)
      for (int q = p + 1; q <= k; ++q) {
        Index rest;
        for (int i = 0; i <= k; ++i)
          if (i != p && i != q) rest.push_back(J[i]);
        const int base_sign = ((p + q) % 2 == 0) ? 1 : -1;
        for (int a = 0; a < n; ++a) {
          const RatFun& c = C.at(a, J[p], J[q]);
          if (c.is_zero()) continue;
          Index idx{a};
          idx.insert(idx.end(), rest.begin(), rest.end());
          int sign = 1;
          const Index can = canonical_index(idx, Symmetry::Antisymmetric, sign);
          if (sign == 0) continue;
          const RatFun& w = omega[pos.at(can)];
          if (w.is_zero()) continue;
          RatFun t = c * w;
          terms.push_back(base_sign * sign > 0 ? t : -t);
        }
      }
    out[r] = sum(terms);
  }
  return out;
}

std::vector<RVec> relative_basis(const Dense& C, const std::vector<RVec>& h, int k, Normalizer& nz,
                                 std::vector<Expr>& conds) {
  const int n = C.n;
  const auto subs = ordered_subsets(n, k);
  const auto pos = positions(n, k);
  const std::size_t N = subs.size();
  Matrix M(0, N);
  for (const RVec& x : h) {
    // ι_x ω = 0
    if (k >= 1) {
      for (const Index& J : ordered_subsets(n, k - 1)) {
        RVec row(N);
        bool any = false;
        for (int b = 0; b < n; ++b) {
          if (x[b].is_zero()) continue;
          Index idx{b};
          idx.insert(idx.end(), J.begin(), J.end());
          int sign = 1;
          const Index can = canonical_index(idx, Symmetry::Antisymmetric, sign);
          if (sign == 0) continue;
          RatFun& slot = row[pos.at(can)];
          slot = slot + (sign > 0 ? x[b] : -x[b]);
          any = true;
        }
        if (any) M.append_row(row);
      }
    }
    // L_x ω = 0: (L_x ω)_J = -Σ_i Σ_a (x^b c^a_{b j_i}) ω(J with j_i -> a)
    std::vector<RVec> ad(n, RVec(n));  // ad[a][j] = Σ_b x^b c^a_{bj}
    for (int a = 0; a < n; ++a)
      for (int j = 0; j < n; ++j) {
        std::vector<RatFun> t;
        for (int b = 0; b < n; ++b)
          if (!x[b].is_zero() && !C.at(a, b, j).is_zero()) t.push_back(x[b] * C.at(a, b, j));
        ad[a][j] = sum(t);
      }
    for (const Index& J : subs) {
      RVec row(N);
      bool any = false;
      for (int i = 0; i < k; ++i)
        for (int a = 0; a < n; ++a) {
          const RatFun& f = ad[a][J[i]];
          if (f.is_zero()) continue;
          Index idx = J;
          idx[i] = a;
          int sign = 1;
          const Index can = canonical_index(idx, Symmetry::Antisymmetric, sign);
          if (sign == 0) continue;
          RatFun& slot = row[pos.at(can)];
          slot = slot - (sign > 0 ? f : -f);
          any = true;
        }
      if (any) M.append_row(row);
    }
  }
  if (M.rows() == 0) {
    std::vector<RVec> all;
    for (std::size_t i = 0; i < N; ++i) {
      RVec v(N);
      v[i] = RatFun(Rational(1));
      all.push_back(std::move(v));
    }
    return all;
  }
  return nullspace(M, nz, &conds);
}

// images of `from` under d, written in the basis `to`
Matrix restricted_d(const Dense& C, const std::vector<RVec>& from, const std::vector<RVec>& to, int k,
                    Normalizer& nz) {
  Matrix D(to.size(), from.size());
  for (std::size_t j = 0; j < from.size(); ++j) {
    const RVec img = apply_d(C, from[j], k);
    bool zero = true;
    for (const RatFun& r : img)
      if (!r.is_zero()) zero = false;
    if (zero) continue;
    Vector coords;
    if (!coordinates_in(to, img, nz, coords))
      throw std::logic_error("d does not preserve the relative complex (is h a subalgebra?)");
    for (std::size_t i = 0; i < to.size(); ++i) D(i, j) = coords[i];
  }
  return D;
}

ExprMatrix to_expr_matrix(const Matrix& m, const Normalizer& nz) {
  ExprMatrix out(m.rows(), std::vector<Expr>(m.cols()));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i][j] = nz.to_expr(m(i, j));
  return out;
}

}  // namespace

LieAlgebra lie_algebra_from_constants(std::vector<Expr> constants, int n, AssumptionSet assumptions,
                                      std::vector<std::string> labels) {
  if (n < 1) throw std::invalid_argument("Lie algebra dimension must be positive");
  if (constants.size() != static_cast<std::size_t>(n) * n * n)
    throw std::invalid_argument("structure constant array must have n^3 entries");
  Normalizer nz(assumptions);
  LieAlgebra L;
  L.n = n;
  L.assumptions = std::move(assumptions);
  for (Expr& e : constants) e = nz.normalize(e);
  L.c = std::move(constants);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c)
        if (!is_zero(L.constant(a, b, c) + L.constant(a, c, b), L.assumptions))
          throw std::invalid_argument("structure constants not antisymmetric at c^" + std::to_string(a + 1) + "_" +
                                      std::to_string(b + 1) + std::to_string(c + 1));
  if (labels.empty())
    for (int i = 0; i < n; ++i) labels.push_back("e" + std::to_string(i + 1));
  if (labels.size() != static_cast<std::size_t>(n)) throw std::invalid_argument("label count mismatch");
  L.labels = std::move(labels);
  L.provenance = "from input file";
  return L;
}

LieAlgebra lie_algebra_from_fields(const std::vector<TensorField>& generators, const ChartRef& chart) {
  const int m = static_cast<int>(generators.size());
  if (m == 0) throw std::invalid_argument("no generators");
  const std::size_t dim = chart->dim();
  Normalizer nz(chart->assumptions);
  std::vector<Vector> X;
  for (const TensorField& g : generators) {
    if (g.up() != 1 || g.down() != 0) throw std::invalid_argument("generators must be vector fields");
    if (g.chart() != chart && g.chart()->coords != chart->coords)
      throw std::invalid_argument("generator on a different chart");
    Vector v(dim);
    for (std::size_t i = 0; i < dim; ++i) v[i] = nz.from_expr(g.get({static_cast<int>(i)}));
    X.push_back(std::move(v));
  }
  {
    Vector zero(dim), out;
    std::size_t rk = 0;
    constant_coefficients(X, zero, chart->coords, nz, out, &rk);
    if (rk != X.size()) throw std::invalid_argument("generators are linearly dependent over the constants");
  }
  std::vector<Expr> c(static_cast<std::size_t>(m) * m * m, Expr(0));
  auto at = [&](int a, int b, int cc) -> Expr& { return c[(static_cast<std::size_t>(a) * m + b) * m + cc]; };
  for (int b = 0; b < m; ++b)
    for (int cc = b + 1; cc < m; ++cc) {
      const TensorField br = lie_bracket(generators[b], generators[cc]);
      Vector v(dim), coef;
      for (std::size_t i = 0; i < dim; ++i) v[i] = nz.from_expr(br.get({static_cast<int>(i)}));
      if (!constant_coefficients(X, v, chart->coords, nz, coef))
        throw std::invalid_argument("generators do not close: [X" + std::to_string(b + 1) + ", X" +
                                    std::to_string(cc + 1) + "] is not a constant combination");
      for (int a = 0; a < m; ++a) {
        at(a, b, cc) = nz.to_expr(coef[a]);
        at(a, cc, b) = nz.to_expr(-coef[a]);
      }
    }
  LieAlgebra L;
  L.n = m;
  L.c = std::move(c);
  L.assumptions = chart->assumptions;
  for (int i = 0; i < m; ++i) L.labels.push_back("X" + std::to_string(i + 1));
  L.provenance = "from fields";
  return L;
}

JacobiResult jacobi_check(const LieAlgebra& L) {
  Normalizer nz(L.assumptions);
  const Dense C = dense_constants(L, nz);
  const int n = L.n;
  JacobiResult r;
  for (int e = 0; e < n; ++e)
    for (int a = 0; a < n; ++a)
      for (int b = a + 1; b < n; ++b)
        for (int c = b + 1; c < n; ++c) {
          std::vector<RatFun> t;
          for (int d = 0; d < n; ++d) {
            t.push_back(C.at(e, a, d) * C.at(d, b, c));
            t.push_back(C.at(e, b, d) * C.at(d, c, a));
            t.push_back(C.at(e, c, d) * C.at(d, a, b));
          }
          const RatFun s = sum(t);
          if (!s.is_zero()) {
            r.holds = false;
            r.residuals.push_back(nz.to_expr(s));
          }
        }
  return r;
}

const char* to_string(UnimodularVerdict v) {
  switch (v) {
    case UnimodularVerdict::Unimodular:
      return "unimodular";
    case UnimodularVerdict::NotUnimodular:
      return "not unimodular";
    case UnimodularVerdict::Conditional:
      return "conditional";
  }
  return "?";
}

UnimodularResult is_unimodular(const LieAlgebra& L) {
  Normalizer nz(L.assumptions);
  const Dense C = dense_constants(L, nz);
  UnimodularResult r;
  bool constant_nonzero = false, parametric = false;
  for (int b = 0; b < L.n; ++b) {
    std::vector<RatFun> t;
    for (int a = 0; a < L.n; ++a) t.push_back(C.at(a, b, a));
    const RatFun tr = sum(t);
    r.traces.push_back(nz.to_expr(tr));
    if (tr.is_zero()) continue;
    if (tr.is_constant()) constant_nonzero = true;
    else parametric = true;
  }
  if (constant_nonzero) r.verdict = UnimodularVerdict::NotUnimodular;
  else if (parametric) r.verdict = UnimodularVerdict::Conditional;
  return r;
}

std::vector<Expr> bracket(const LieAlgebra& L, const std::vector<Expr>& x, const std::vector<Expr>& y) {
  Normalizer nz(L.assumptions);
  const Dense C = dense_constants(L, nz);
  const RVec X = to_rat(x, nz), Y = to_rat(y, nz);
  RVec out(L.n);
  for (int a = 0; a < L.n; ++a) {
    std::vector<RatFun> t;
    for (int b = 0; b < L.n; ++b)
      for (int c = 0; c < L.n; ++c)
        if (!X[b].is_zero() && !Y[c].is_zero() && !C.at(a, b, c).is_zero()) t.push_back(X[b] * Y[c] * C.at(a, b, c));
    out[a] = sum(t);
  }
  return to_exprs(out, nz);
}

Subalgebra make_subalgebra(const LieAlgebra& L, std::vector<std::vector<Expr>> basis) {
  Normalizer nz(L.assumptions);
  std::vector<Vector> B;
  for (auto& v : basis) {
    if (v.size() != static_cast<std::size_t>(L.n)) throw std::invalid_argument("subalgebra vector has wrong length");
    for (Expr& e : v) e = nz.normalize(e);
    B.push_back(to_rat(v, nz));
  }
  if (!B.empty()) {
    Matrix M(B.size(), L.n);
    for (std::size_t i = 0; i < B.size(); ++i)
      for (int j = 0; j < L.n; ++j) M(i, j) = B[i][j];
    if (rank(M, nz) != B.size()) throw std::invalid_argument("subalgebra basis is linearly dependent");
  }
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      const RVec br = to_rat(bracket(L, basis[i], basis[j]), nz);
      Vector coords;
      if (!coordinates_in(B, br, nz, coords)) throw std::invalid_argument("subalgebra is not closed under the bracket");
    }
  return Subalgebra{std::move(basis)};
}

std::vector<Cochain> relative_cochain_basis(const LieAlgebra& L, const Subalgebra& h, int k,
                                            std::vector<Expr>* conditions) {
  if (k < 0 || k > L.n) throw std::invalid_argument("cochain degree out of range");
  Normalizer nz(L.assumptions);
  const Dense C = dense_constants(L, nz);
  std::vector<RVec> hb;
  for (const auto& v : h.basis) hb.push_back(to_rat(v, nz));
  std::vector<Expr> conds;
  std::vector<Cochain> out;
  for (const RVec& v : relative_basis(C, hb, k, nz, conds)) out.push_back(to_exprs(v, nz));
  if (conditions) add_unique(*conditions, conds);
  return out;
}

Matrix ce_differential(const LieAlgebra& L, int k, Normalizer& nz) {
  const Dense C = dense_constants(L, nz);
  const std::size_t N = ordered_subsets(L.n, k).size(), M = ordered_subsets(L.n, k + 1).size();
  Matrix D(M, N);
  for (std::size_t j = 0; j < N; ++j) {
    RVec unit(N);
    unit[j] = RatFun(Rational(1));
    const RVec img = apply_d(C, unit, k);
    for (std::size_t i = 0; i < M; ++i) D(i, j) = img[i];
  }
  return D;
}

Cochain ce_apply(const LieAlgebra& L, const Cochain& omega, int k) {
  Normalizer nz(L.assumptions);
  const Dense C = dense_constants(L, nz);
  return to_exprs(apply_d(C, to_rat(omega, nz), k), nz);
}

CohomologyResult relative_cohomology(const LieAlgebra& L, const Subalgebra& h, int k) {
  if (k < 0 || k > L.n) throw std::invalid_argument("cohomology degree out of range");
  Normalizer nz(L.assumptions);
  const Dense C = dense_constants(L, nz);
  std::vector<RVec> hb;
  for (const auto& v : h.basis) hb.push_back(to_rat(v, nz));

  CohomologyResult r;
  r.degree = k;
  std::vector<Expr> conds;
  const std::vector<RVec> Bk = relative_basis(C, hb, k, nz, conds);
  const std::vector<RVec> Bprev = k > 0 ? relative_basis(C, hb, k - 1, nz, conds) : std::vector<RVec>{};
  const std::vector<RVec> Bnext = k < L.n ? relative_basis(C, hb, k + 1, nz, conds) : std::vector<RVec>{};

  const Matrix din = k > 0 ? restricted_d(C, Bprev, Bk, k - 1, nz) : Matrix(Bk.size(), 0);
  const Matrix dout = k < L.n ? restricted_d(C, Bk, Bnext, k, nz) : Matrix(0, Bk.size());
  const Rref rin = rref(din, nz), rout = rref(dout, nz);
  add_unique(conds, rin.conditions);
  add_unique(conds, rout.conditions);
  r.rank_in = rin.rank();
  r.rank_out = rout.rank();
  r.dimension = Bk.size() - r.rank_in - r.rank_out;
  r.d_in = to_expr_matrix(din, nz);
  r.d_out = to_expr_matrix(dout, nz);
  for (const RVec& b : Bk) r.cochains.push_back(to_exprs(b, nz));

  // cocycles not in the image, chosen greedily
  const std::vector<Vector> ker = nullspace(dout, nz);
  Matrix span(0, Bk.size());
  for (std::size_t j = 0; j < din.cols(); ++j) {
    Vector col(Bk.size());
    for (std::size_t i = 0; i < Bk.size(); ++i) col[i] = din(i, j);
    span.append_row(col);
  }
  std::size_t rk = span.rows() ? rank(span, nz) : 0;
  const std::size_t Nk = ordered_subsets(L.n, k).size();
  for (const Vector& z : ker) {
    Matrix trial = span;
    trial.append_row(z);
    const std::size_t rz = rank(trial, nz);
    if (rz == rk) continue;
    span = std::move(trial);
    rk = rz;
    RVec amb(Nk);
    for (std::size_t i = 0; i < Bk.size(); ++i)
      if (!z[i].is_zero())
        for (std::size_t t = 0; t < Nk; ++t)
          if (!Bk[i][t].is_zero()) amb[t] = amb[t] + z[i] * Bk[i][t];
    r.representatives.push_back(to_exprs(amb, nz));
  }
  add_unique(r.conditions, conds);
  return r;
}

bool d_squared_zero(const LieAlgebra& L) {
  Normalizer nz(L.assumptions);
  for (int k = 0; k + 2 <= L.n; ++k) {
    const Matrix a = ce_differential(L, k, nz), b = ce_differential(L, k + 1, nz);
    for (std::size_t i = 0; i < b.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) {
        std::vector<RatFun> t;
        for (std::size_t m = 0; m < a.rows(); ++m)
          if (!b(i, m).is_zero() && !a(m, j).is_zero()) t.push_back(b(i, m) * a(m, j));
        if (!sum(t).is_zero()) return false;
      }
  }
  return true;
}

namespace {

AssumptionSet drop_substituted(const AssumptionSet& A, const ExprMap<Expr>& values) {
  std::vector<Expr> keys;
  for (const auto& [k, v] : values) keys.push_back(k);
  AssumptionSet out;
  for (const auto& [e, s] : A.entries())
    if (!depends_on_any(e, keys)) out.declare(e, s);
  return out;
}

}  // namespace

LieAlgebra substitute(const LieAlgebra& L, const ExprMap<Expr>& values) {
  LieAlgebra out = L;
  out.assumptions = drop_substituted(L.assumptions, values);
  Normalizer nz(out.assumptions);
  for (Expr& e : out.c) e = nz.normalize(psc::substitute(e, values));
  return out;
}

Subalgebra substitute(const Subalgebra& h, const ExprMap<Expr>& values) {
  Subalgebra out = h;
  for (auto& v : out.basis)
    for (Expr& e : v) e = normalize(psc::substitute(e, values));
  return out;
}

LieAlgebra change_basis(const LieAlgebra& L, const ExprMatrix& Mx) {
  const int n = L.n;
  Normalizer nz(L.assumptions);
  const Dense C = dense_constants(L, nz);
  Matrix M(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) M(i, j) = nz.from_expr(Mx.at(i).at(j));
  const Matrix Mi = inverse(M, nz);
  // c'^a_{bc} = M_bi M_cj c^k_{ij} (M^{-1})_{ka}
  std::vector<RatFun> tmp(static_cast<std::size_t>(n) * n * n);  // tmp[k][b][c] = M_bi M_cj c^k_ij
  for (int k = 0; k < n; ++k)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::vector<RatFun> t;
        for (int i = 0; i < n; ++i)
          for (int j = 0; j < n; ++j)
            if (!M(b, i).is_zero() && !M(c, j).is_zero() && !C.at(k, i, j).is_zero())
              t.push_back(M(b, i) * M(c, j) * C.at(k, i, j));
        tmp[(static_cast<std::size_t>(k) * n + b) * n + c] = sum(t);
      }
  LieAlgebra out = L;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c) {
        std::vector<RatFun> t;
        for (int k = 0; k < n; ++k) {
          const RatFun& v = tmp[(static_cast<std::size_t>(k) * n + b) * n + c];
          if (!v.is_zero() && !Mi(k, a).is_zero()) t.push_back(v * Mi(k, a));
        }
        out.c[(static_cast<std::size_t>(a) * n + b) * n + c] = nz.to_expr(sum(t));
      }
  for (int i = 0; i < n; ++i) out.labels[i] = "f" + std::to_string(i + 1);
  out.provenance = L.provenance + ", change of basis";
  return out;
}

std::string cochain_string(const Cochain& omega, int n, int k) {
  const auto subs = ordered_subsets(n, k);
  std::vector<std::pair<Expr, std::string>> terms;
  for (std::size_t i = 0; i < subs.size() && i < omega.size(); ++i) {
    std::string basis;
    for (std::size_t j = 0; j < subs[i].size(); ++j) {
      if (j) basis += "∧";
      basis += "θ" + std::to_string(subs[i][j] + 1);
    }
    terms.emplace_back(omega[i], basis);
  }
  return combination_string(terms);
}

}  // namespace psc
