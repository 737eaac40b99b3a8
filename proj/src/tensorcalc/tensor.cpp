#include "psc/tensorcalc/tensor.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace psc {

Chart::Chart(std::vector<Expr> c, AssumptionSet a) : coords(std::move(c)), assumptions(std::move(a)) {
  if (coords.empty()) throw std::invalid_argument("chart needs at least one coordinate");
  for (std::size_t i = 0; i < coords.size(); ++i) {
    if (!coords[i].is_symbol()) throw std::invalid_argument("chart coordinates must be symbols");
    for (std::size_t j = 0; j < i; ++j)
      if (coords[j].name() == coords[i].name()) throw std::invalid_argument("duplicate coordinate " + coords[i].name());
  }
}

std::optional<std::size_t> Chart::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < coords.size(); ++i)
    if (coords[i].name() == name) return i;
  return std::nullopt;
}

ChartRef make_chart(const std::vector<std::string>& coords, AssumptionSet assumptions) {
  std::vector<Expr> c;
  for (const std::string& s : coords) c.push_back(Expr::symbol(s, SymbolRole::Coordinate));
  return std::make_shared<const Chart>(std::move(c), std::move(assumptions));
}

Index canonical_index(const Index& idx, Symmetry sym, int& sign) {
  sign = 1;
  if (sym == Symmetry::None) return idx;
  Index out = idx;
  if (sym == Symmetry::Symmetric) {
    std::sort(out.begin(), out.end());
    return out;
  }
  // insertion sort counting transpositions
  for (std::size_t i = 1; i < out.size(); ++i)
    for (std::size_t j = i; j > 0 && out[j - 1] > out[j]; --j) {
      std::swap(out[j - 1], out[j]);
      sign = -sign;
    }
  for (std::size_t i = 1; i < out.size(); ++i)
    if (out[i] == out[i - 1]) sign = 0;
  return out;
}

std::vector<Index> ordered_subsets(int n, int k) {
  std::vector<Index> out;
  if (k < 0 || k > n) return out;
  Index cur(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) cur[static_cast<std::size_t>(i)] = i;
  while (true) {
    out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - k + i) --i;
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < k; ++j) cur[static_cast<std::size_t>(j)] = cur[static_cast<std::size_t>(j - 1)] + 1;
  }
  return out;
}

std::string index_string(const Index& idx) {
  std::ostringstream os;
  for (std::size_t i = 0; i < idx.size(); ++i) os << (i ? "," : "") << idx[i] + 1;
  return os.str();
}

TensorField::TensorField(ChartRef chart, int up, int down, Symmetry sym)
    : chart_(std::move(chart)), up_(up), down_(down), sym_(sym) {
  if (!chart_) throw std::invalid_argument("tensor needs a chart");
  if (up < 0 || down < 0) throw std::invalid_argument("negative valence");
  if (sym != Symmetry::None && up > 0 && down > 0)
    throw std::invalid_argument("symmetry is only supported on pure valence");
}

TensorField TensorField::scalar(ChartRef chart, const Expr& value) {
  TensorField t(std::move(chart), 0, 0);
  t.set({}, value);
  return t;
}

TensorField TensorField::vector(ChartRef chart, const std::vector<Expr>& components) {
  if (components.size() != chart->dim()) throw std::invalid_argument("vector field has wrong number of components");
  TensorField t(std::move(chart), 1, 0);
  for (std::size_t i = 0; i < components.size(); ++i) t.set({static_cast<int>(i)}, components[i]);
  return t;
}

Expr TensorField::get(const Index& idx) const {
  if (static_cast<int>(idx.size()) != rank()) throw std::invalid_argument("index has wrong length");
  int sign;
  const Index c = canonical_index(idx, sym_, sign);
  if (sign == 0) return Expr(0);
  auto it = comps_.find(c);
  if (it == comps_.end()) return Expr(0);
  return sign > 0 ? it->second : -it->second;
}

void TensorField::set(const Index& idx, const Expr& value) {
  if (static_cast<int>(idx.size()) != rank()) throw std::invalid_argument("index has wrong length");
  for (int i : idx)
    if (i < 0 || i >= static_cast<int>(dim())) throw std::out_of_range("index out of range");
  int sign;
  const Index c = canonical_index(idx, sym_, sign);
  if (sign == 0) {
    if (!value.is_zero()) throw std::invalid_argument("nonzero diagonal component of an antisymmetric tensor");
    return;
  }
  if (value.is_zero())
    comps_.erase(c);
  else
    comps_[c] = sign > 0 ? value : -value;
}

std::vector<Index> TensorField::canonical_indices() const {
  const int n = static_cast<int>(dim());
  const int k = rank();
  std::vector<Index> out;
  if (sym_ == Symmetry::Antisymmetric) return ordered_subsets(n, k);
  Index cur(static_cast<std::size_t>(k), 0);
  while (true) {
    bool ok = true;
    if (sym_ == Symmetry::Symmetric)
      for (int i = 1; i < k; ++i) ok = ok && cur[static_cast<std::size_t>(i - 1)] <= cur[static_cast<std::size_t>(i)];
    if (ok) out.push_back(cur);
    int i = k - 1;
    while (i >= 0 && cur[static_cast<std::size_t>(i)] == n - 1) {
      cur[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) break;
    ++cur[static_cast<std::size_t>(i)];
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dense helpers

namespace {

std::size_t flat(const Index& idx, std::size_t n) {
  std::size_t f = 0;
  for (int i : idx) f = f * n + static_cast<std::size_t>(i);
  return f;
}

std::size_t ipow(std::size_t n, int k) {
  std::size_t r = 1;
  for (int i = 0; i < k; ++i) r *= n;
  return r;
}

Index unflat(std::size_t f, std::size_t n, int k) {
  Index idx(static_cast<std::size_t>(k));
  for (int i = k - 1; i >= 0; --i) {
    idx[static_cast<std::size_t>(i)] = static_cast<int>(f % n);
    f /= n;
  }
  return idx;
}

void same_chart(const TensorField& a, const TensorField& b) {
  if (a.chart() != b.chart() && a.chart()->coords != b.chart()->coords)
    throw std::invalid_argument("tensor fields live on different charts");
}

std::vector<RatFun> partials(const RatFun& f, const Chart& c, Normalizer& n) {
  std::vector<RatFun> out;
  out.reserve(c.dim());
  for (const Expr& x : c.coords) out.push_back(n.diff(f, x));
  return out;
}

}  // namespace

std::vector<RatFun> dense(const TensorField& t, Normalizer& n) {
  const std::size_t N = t.dim();
  const int k = t.rank();
  std::vector<RatFun> d(ipow(N, k));
  for (std::size_t f = 0; f < d.size(); ++f) {
    const Expr e = t.get(unflat(f, N, k));
    if (!e.is_zero()) d[f] = n.from_expr(e);
  }
  return d;
}

TensorField from_dense(const ChartRef& chart, int up, int down, Symmetry sym, const std::vector<RatFun>& d,
                       Normalizer& n) {
  TensorField t(chart, up, down, sym);
  const std::size_t N = chart->dim();
  for (const Index& idx : t.canonical_indices()) {
    const RatFun& v = d[flat(idx, N)];
    if (!v.is_zero()) t.set(idx, n.to_expr(v));
  }
  return t;
}

// ---------------------------------------------------------------------------
// Operations

TensorField lie_bracket(const TensorField& X, const TensorField& Y) {
  same_chart(X, Y);
  if (X.up() != 1 || X.down() != 0 || Y.up() != 1 || Y.down() != 0)
    throw std::invalid_argument("lie_bracket needs vector fields");
  return lie_derivative(X, Y);
}

TensorField exterior_derivative(const TensorField& omega) {
  if (omega.up() != 0 || (omega.down() > 1 && omega.symmetry() != Symmetry::Antisymmetric))
    throw std::invalid_argument("exterior_derivative needs a differential form");
  const ChartRef& c = omega.chart();
  const int n = static_cast<int>(c->dim());
  const int l = omega.down();
  Normalizer nz(c->assumptions);
  TensorField out = TensorField::form(c, l + 1);
  if (l + 1 > n) return out;
  std::map<Index, std::vector<RatFun>> grads;
  for (const auto& [idx, e] : omega.components()) grads[idx] = partials(nz.from_expr(e), *c, nz);
  for (const Index& I : ordered_subsets(n, l + 1)) {
    std::vector<RatFun> terms;
    for (int i = 0; i <= l; ++i) {
      Index rest;
      for (int j = 0; j <= l; ++j)
        if (j != i) rest.push_back(I[static_cast<std::size_t>(j)]);
      auto it = grads.find(rest);
      if (it == grads.end()) continue;
      RatFun t = it->second[static_cast<std::size_t>(I[static_cast<std::size_t>(i)])];
      terms.push_back(i % 2 == 0 ? t : -t);
    }
    const RatFun v = sum(terms);
    if (!v.is_zero()) out.set(I, nz.to_expr(v));
  }
  return out;
}

namespace {

bool is_antisym_kind(const TensorField& t) {
  return t.rank() <= 1 || t.symmetry() == Symmetry::Antisymmetric;
}

int perm_sign(const Index& seq) {
  int sign;
  canonical_index(seq, Symmetry::Antisymmetric, sign);
  return sign;
}

}  // namespace

TensorField wedge(const TensorField& a, const TensorField& b) {
  same_chart(a, b);
  if (!is_antisym_kind(a) || !is_antisym_kind(b)) throw std::invalid_argument("wedge needs antisymmetric tensors");
  if ((a.up() > 0 && b.down() > 0) || (a.down() > 0 && b.up() > 0))
    throw std::invalid_argument("wedge of a form with a multivector");
  const bool contra = a.up() > 0 || b.up() > 0;
  const int p = a.rank(), q = b.rank();
  const ChartRef& c = a.chart();
  const int n = static_cast<int>(c->dim());
  Normalizer nz(c->assumptions);
  TensorField out = contra ? TensorField::multivector(c, p + q) : TensorField::form(c, p + q);
  if (p + q > n) return out;
  for (const Index& K : ordered_subsets(n, p + q)) {
    std::vector<RatFun> terms;
    for (const Index& pos : ordered_subsets(p + q, p)) {
      Index J, L, seq;
      std::vector<bool> in(static_cast<std::size_t>(p + q), false);
      for (int x : pos) in[static_cast<std::size_t>(x)] = true;
      for (int i = 0; i < p + q; ++i) (in[static_cast<std::size_t>(i)] ? J : L).push_back(K[static_cast<std::size_t>(i)]);
      const Expr ea = a.get(J), eb = b.get(L);
      if (ea.is_zero() || eb.is_zero()) continue;
      seq = J;
      seq.insert(seq.end(), L.begin(), L.end());
      RatFun t = nz.from_expr(ea) * nz.from_expr(eb);
      terms.push_back(perm_sign(seq) > 0 ? t : -t);
    }
    const RatFun v = sum(terms);
    if (!v.is_zero()) out.set(K, nz.to_expr(v));
  }
  return out;
}

TensorField wedge(const std::vector<TensorField>& factors) {
  if (factors.empty()) throw std::invalid_argument("empty wedge");
  TensorField acc = factors[0];
  for (std::size_t i = 1; i < factors.size(); ++i) acc = wedge(acc, factors[i]);
  return acc;
}

TensorField interior_product(const TensorField& chi, const TensorField& omega) {
  same_chart(chi, omega);
  if (chi.down() != 0 || !is_antisym_kind(chi)) throw std::invalid_argument("interior_product needs a multivector");
  if (omega.up() != 0 || !is_antisym_kind(omega)) throw std::invalid_argument("interior_product needs a form");
  const int l = chi.up(), m = omega.down();
  if (l > m) throw std::invalid_argument("multivector degree exceeds form degree");
  const ChartRef& c = chi.chart();
  const int n = static_cast<int>(c->dim());
  Normalizer nz(c->assumptions);
  TensorField out = TensorField::form(c, m - l);
  for (const Index& K : ordered_subsets(n, m - l)) {
    std::vector<RatFun> terms;
    for (const auto& [I, ce] : chi.components()) {
      Index seq = I;
      seq.insert(seq.end(), K.begin(), K.end());
      const Expr oe = omega.get(seq);
      if (oe.is_zero()) continue;
      terms.push_back(nz.from_expr(ce) * nz.from_expr(oe));
    }
    const RatFun v = sum(terms);
    if (!v.is_zero()) out.set(K, nz.to_expr(v));
  }
  return out;
}

TensorField lie_derivative(const TensorField& X, const TensorField& T) {
  same_chart(X, T);
  if (X.up() != 1 || X.down() != 0) throw std::invalid_argument("lie_derivative needs a vector field");
  const ChartRef& c = T.chart();
  const std::size_t N = c->dim();
  Normalizer nz(c->assumptions);
  std::vector<RatFun> Xv = dense(X, nz);
  std::vector<std::vector<RatFun>> dX(N);  // dX[a][b] = ∂_b X^a
  for (std::size_t a = 0; a < N; ++a) dX[a] = partials(Xv[a], *c, nz);
  std::vector<RatFun> Td = dense(T, nz);
  std::map<std::size_t, std::vector<RatFun>> dT;
  auto grad = [&](std::size_t f) -> const std::vector<RatFun>& {
    auto it = dT.find(f);
    if (it == dT.end()) it = dT.emplace(f, partials(Td[f], *c, nz)).first;
    return it->second;
  };
  const int up = T.up(), k = T.rank();
  TensorField out(c, T.up(), T.down(), T.symmetry());
  for (const Index& idx : out.canonical_indices()) {
    std::vector<RatFun> terms;
    const std::size_t f = flat(idx, N);
    if (!Td[f].is_zero()) {
      const auto& g = grad(f);
      for (std::size_t b = 0; b < N; ++b)
        if (!Xv[b].is_zero() && !g[b].is_zero()) terms.push_back(Xv[b] * g[b]);
    }
    for (int slot = 0; slot < k; ++slot) {
      const std::size_t a = static_cast<std::size_t>(idx[static_cast<std::size_t>(slot)]);
      for (std::size_t cidx = 0; cidx < N; ++cidx) {
        Index j = idx;
        j[static_cast<std::size_t>(slot)] = static_cast<int>(cidx);
        const RatFun& tv = Td[flat(j, N)];
        if (tv.is_zero()) continue;
        if (slot < up) {
          // - T^{..c..} ∂_c X^a
          const RatFun& d = dX[a][cidx];
          if (!d.is_zero()) terms.push_back(-(tv * d));
        } else {
          // + T_{..c..} ∂_b X^c
          const RatFun& d = dX[cidx][a];
          if (!d.is_zero()) terms.push_back(tv * d);
        }
      }
    }
    const RatFun v = sum(terms);
    if (!v.is_zero()) out.set(idx, nz.to_expr(v));
  }
  return out;
}

TensorField tensor_product(const TensorField& a, const TensorField& b) {
  same_chart(a, b);
  if (a.down() > 0 && b.up() > 0)
    throw std::invalid_argument("tensor_product expects contravariant slots before covariant ones");
  const ChartRef& c = a.chart();
  const std::size_t N = c->dim();
  Normalizer nz(c->assumptions);
  TensorField out(c, a.up() + b.up(), a.down() + b.down());
  const std::vector<RatFun> ad = dense(a, nz), bd = dense(b, nz);
  for (std::size_t i = 0; i < ad.size(); ++i) {
    if (ad[i].is_zero()) continue;
    for (std::size_t j = 0; j < bd.size(); ++j) {
      if (bd[j].is_zero()) continue;
      Index ia = unflat(i, N, a.rank()), ib = unflat(j, N, b.rank());
      Index idx;
      // contravariant of a, contravariant of b, covariant of a, covariant of b
      idx.insert(idx.end(), ia.begin(), ia.begin() + a.up());
      idx.insert(idx.end(), ib.begin(), ib.begin() + b.up());
      idx.insert(idx.end(), ia.begin() + a.up(), ia.end());
      idx.insert(idx.end(), ib.begin() + b.up(), ib.end());
      out.set(idx, nz.to_expr(ad[i] * bd[j]));
    }
  }
  return out;
}

TensorField add(const TensorField& a, const TensorField& b) {
  same_chart(a, b);
  if (a.up() != b.up() || a.down() != b.down()) throw std::invalid_argument("valence mismatch in add");
  const Symmetry sym = a.symmetry() == b.symmetry() ? a.symmetry() : Symmetry::None;
  Normalizer nz(a.chart()->assumptions);
  TensorField out(a.chart(), a.up(), a.down(), sym);
  for (const Index& idx : out.canonical_indices()) {
    const RatFun v = nz.from_expr(a.get(idx)) + nz.from_expr(b.get(idx));
    if (!v.is_zero()) out.set(idx, nz.to_expr(v));
  }
  return out;
}

TensorField scale(const Expr& c, const TensorField& a) {
  Normalizer nz(a.chart()->assumptions);
  const RatFun cr = nz.from_expr(c);
  TensorField out(a.chart(), a.up(), a.down(), a.symmetry());
  for (const auto& [idx, e] : a.components()) {
    const RatFun v = cr * nz.from_expr(e);
    if (!v.is_zero()) out.set(idx, nz.to_expr(v));
  }
  return out;
}

TensorField normalized(const TensorField& t) {
  Normalizer nz(t.chart()->assumptions);
  TensorField out(t.chart(), t.up(), t.down(), t.symmetry());
  for (const auto& [idx, e] : t.components()) out.set(idx, nz.normalize(e));
  return out;
}

bool equals(const TensorField& a, const TensorField& b) {
  if (a.up() != b.up() || a.down() != b.down() || a.dim() != b.dim()) return false;
  Normalizer nz(a.chart()->assumptions);
  TensorField probe(a.chart(), a.up(), a.down());
  for (const Index& idx : probe.canonical_indices())
    if (!(nz.from_expr(a.get(idx)) - nz.from_expr(b.get(idx))).is_zero()) return false;
  return true;
}

TensorField substitute(const TensorField& t, const ExprMap<Expr>& values) {
  Normalizer nz(t.chart()->assumptions);
  TensorField out(t.chart(), t.up(), t.down(), t.symmetry());
  for (const auto& [idx, e] : t.components()) out.set(idx, nz.normalize(psc::substitute(e, values)));
  return out;
}

std::string combination_string(const std::vector<std::pair<Expr, std::string>>& terms) {
  std::string out;
  bool first = true;
  for (const auto& [c, basis] : terms) {
    if (c.is_zero()) continue;
    const bool neg = !c.is(Kind::Add) && split_coefficient(c).first < 0;
    const Expr mag = neg ? -c : c;
    if (!first) out += neg ? " - " : " + ";
    else if (neg) out += "-";
    first = false;
    if (mag.is_one()) {
      out += basis.empty() ? "1" : basis;
      continue;
    }
    out += mag.is(Kind::Add) ? "(" + to_string(mag) + ")" : to_string(mag);
    if (!basis.empty()) out += "*" + basis;
  }
  return first ? "0" : out;
}

}  // namespace psc
