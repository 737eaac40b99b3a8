#include "psc/exprcore/linalg.hpp"

#include <map>
#include <stdexcept>

namespace psc {

std::vector<RatFun> Matrix::row(std::size_t i) const {
  return std::vector<RatFun>(a_.begin() + static_cast<std::ptrdiff_t>(i * cols_),
                             a_.begin() + static_cast<std::ptrdiff_t>((i + 1) * cols_));
}

void Matrix::append_row(const std::vector<RatFun>& r) {
  if (rows_ == 0 && cols_ == 0) cols_ = r.size();
  if (r.size() != cols_) throw std::invalid_argument("row length mismatch");
  a_.insert(a_.end(), r.begin(), r.end());
  ++rows_;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

void record_condition(const RatFun& pivot, Normalizer& n, std::vector<Expr>& conds) {
  if (pivot.is_constant()) return;
  auto add = [&](const Expr& e) {
    for (const Expr& c : conds)
      if (c == e) return;
    conds.push_back(e);
  };
  Rational c;
  Monomial m;
  Polynomial prim;
  n.split_content(pivot.num, c, m, prim);
  for (const auto& [a, e] : m.entries()) {
    if (n.atom_positive(a)) continue;
    if (a->kind == AtomKind::Exp) continue;
    add(a->expr);
  }
  if (!prim.is_constant()) add(n.to_expr(prim));
}

Rref rref(Matrix m, Normalizer& n) {
  Rref out;
  const std::size_t R = m.rows(), C = m.cols();
  std::size_t row = 0;
  for (std::size_t col = 0; col < C && row < R; ++col) {
    // prefer constant pivots, then the smallest entry
    std::size_t best = R;
    for (std::size_t i = row; i < R; ++i) {
      if (m(i, col).is_zero()) continue;
      if (best == R) {
        best = i;
        continue;
      }
      const bool bc = m(best, col).is_constant(), ic = m(i, col).is_constant();
      if (ic && !bc) best = i;
      else if (ic == bc && m(i, col).weight() < m(best, col).weight()) best = i;
    }
    if (best == R) continue;
    if (best != row)
      for (std::size_t j = 0; j < C; ++j) std::swap(m(best, j), m(row, j));
    const RatFun piv = m(row, col);
    record_condition(piv, n, out.conditions);
    const RatFun inv = n.inverse(piv);
    for (std::size_t j = col; j < C; ++j) m(row, j) = m(row, j) * inv;
    for (std::size_t i = 0; i < R; ++i) {
      if (i == row || m(i, col).is_zero()) continue;
      const RatFun f = m(i, col);
      for (std::size_t j = col; j < C; ++j)
        if (!m(row, j).is_zero()) m(i, j) = m(i, j) - f * m(row, j);
    }
    out.pivots.push_back(col);
    ++row;
  }
  out.reduced = std::move(m);
  return out;
}

std::size_t rank(const Matrix& m, Normalizer& n) { return rref(m, n).rank(); }

std::vector<Vector> nullspace(const Matrix& m, Normalizer& n, std::vector<Expr>* conditions) {
  const Rref r = rref(m, n);
  if (conditions) conditions->insert(conditions->end(), r.conditions.begin(), r.conditions.end());
  const std::size_t C = m.cols();
  std::vector<bool> is_pivot(C, false);
  for (std::size_t p : r.pivots) is_pivot[p] = true;
  std::vector<Vector> basis;
  for (std::size_t f = 0; f < C; ++f) {
    if (is_pivot[f]) continue;
    Vector v(C);
    v[f] = RatFun(Rational(1));
    for (std::size_t k = 0; k < r.pivots.size(); ++k) v[r.pivots[k]] = -r.reduced(k, f);
    basis.push_back(std::move(v));
  }
  return basis;
}

namespace {

RatFun det_rec(const Matrix& m, std::vector<std::size_t>& cols, std::size_t row) {
  const std::size_t k = cols.size();
  if (k == 0) return RatFun(Rational(1));
  if (k == 1) return m(row, cols[0]);
  std::vector<RatFun> terms;
  for (std::size_t i = 0; i < k; ++i) {
    const RatFun& a = m(row, cols[i]);
    if (a.is_zero()) continue;
    std::vector<std::size_t> rest;
    for (std::size_t j = 0; j < k; ++j)
      if (j != i) rest.push_back(cols[j]);
    RatFun minor = det_rec(m, rest, row + 1);
    if (minor.is_zero()) continue;
    RatFun t = a * minor;
    terms.push_back(i % 2 == 0 ? t : -t);
  }
  return sum(terms);
}

}  // namespace

RatFun determinant(const Matrix& m, Normalizer&) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant of non-square matrix");
  std::vector<std::size_t> cols(m.cols());
  for (std::size_t j = 0; j < cols.size(); ++j) cols[j] = j;
  return det_rec(m, cols, 0);
}

Matrix inverse(const Matrix& m, Normalizer& n) {
  const std::size_t N = m.rows();
  if (N != m.cols()) throw std::invalid_argument("inverse of non-square matrix");
  const RatFun det = determinant(m, n);
  if (det.is_zero()) throw std::domain_error("singular matrix");
  const RatFun inv_det = n.inverse(det);
  Matrix out(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      // cofactor C_ji
      Matrix minor(N - 1, N - 1);
      for (std::size_t r = 0, rr = 0; r < N; ++r) {
        if (r == j) continue;
        for (std::size_t c = 0, cc = 0; c < N; ++c) {
          if (c == i) continue;
          minor(rr, cc++) = m(r, c);
        }
        ++rr;
      }
      RatFun cof = determinant(minor, n);
      if ((i + j) % 2 == 1) cof = -cof;
      out(i, j) = cof * inv_det;
    }
  return out;
}

bool coordinates_in(const std::vector<Vector>& basis, const Vector& v, Normalizer& n, Vector& out) {
  const std::size_t k = basis.size();
  const std::size_t dim = v.size();
  Matrix aug(dim, k + 1);
  for (std::size_t i = 0; i < dim; ++i) {
    for (std::size_t j = 0; j < k; ++j) aug(i, j) = basis[j][i];
    aug(i, k) = v[i];
  }
  const Rref r = rref(aug, n);
  for (std::size_t p : r.pivots)
    if (p == k) return false;
  out.assign(k, RatFun());
  for (std::size_t row = 0; row < r.pivots.size(); ++row) out[r.pivots[row]] = r.reduced(row, k);
  return true;
}

namespace {

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const { return compare(a, b) < 0; }
};

}  // namespace

bool constant_coefficients(const std::vector<Vector>& basis, const Vector& target, std::span<const Expr> variables,
                           Normalizer& n, Vector& out, std::size_t* rank) {
  const std::size_t m = basis.size(), dim = target.size();
  for (const Vector& b : basis)
    if (b.size() != dim) throw std::invalid_argument("constant_coefficients: length mismatch");

  // per component: common denominator, then split numerators by variable monomials
  std::map<const Atom*, bool> depends;
  auto dep = [&](AtomRef a) {
    auto it = depends.find(a);
    if (it != depends.end()) return it->second;
    const bool d = depends_on_any(a->expr, variables);
    depends.emplace(a, d);
    return d;
  };
  Matrix sys;
  for (std::size_t i = 0; i < dim; ++i) {
    std::vector<const RatFun*> col(m + 1);
    for (std::size_t j = 0; j < m; ++j) col[j] = &basis[j][i];
    col[m] = &target[i];
    std::vector<std::pair<FactorRef, int>> den;
    for (const RatFun* r : col)
      for (const auto& [f, k] : r->den) {
        bool found = false;
        for (auto& [g, kk] : den)
          if (*g == *f) {
            kk = std::max(kk, k);
            found = true;
          }
        if (!found) den.emplace_back(f, k);
      }
    std::map<Monomial, std::vector<std::vector<Term>>, MonoLess> rows;
    for (std::size_t j = 0; j <= m; ++j) {
      Polynomial p = col[j]->num;
      if (p.is_zero()) continue;
      for (const auto& [f, k] : den) {
        int have = 0;
        for (const auto& [g, kk] : col[j]->den)
          if (*g == *f) have = kk;
        for (int e = have; e < k; ++e) p = p * *f;
      }
      p = reduce(p);
      for (const Term& t : p.terms()) {
        std::vector<Monomial::Entry> var, rest;
        for (const auto& en : t.mono.entries()) (dep(en.first) ? var : rest).push_back(en);
        auto& r = rows[Monomial(std::move(var))];
        if (r.empty()) r.resize(m + 1);
        r[j].push_back(Term{Monomial(std::move(rest)), t.coeff});
      }
    }
    for (auto& [mono, r] : rows) {
      Vector row(m + 1);
      for (std::size_t j = 0; j <= m; ++j) row[j] = RatFun(Polynomial::from_terms(std::move(r[j])));
      sys.append_row(row);
    }
  }
  out.assign(m, RatFun());
  if (sys.rows() == 0) {
    if (rank) *rank = 0;
    return true;
  }
  const Rref r = rref(sys, n);
  std::size_t rk = 0;
  for (std::size_t p : r.pivots) {
    if (p == m) return false;
    ++rk;
  }
  if (rank) *rank = rk;
  for (std::size_t row = 0; row < r.pivots.size(); ++row) out[r.pivots[row]] = r.reduced(row, m);
  return true;
}

}  // namespace psc
