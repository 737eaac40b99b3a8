#include "psc/tensorcalc/curvature.hpp"

#include <stdexcept>

#include "psc/exprcore/linalg.hpp"

namespace psc {

namespace {

struct Dense4 {
  std::size_t n;
  std::vector<RatFun> v;
  explicit Dense4(std::size_t n_, int k) : n(n_), v(1) {
    for (int i = 0; i < k; ++i) v.resize(v.size() * n);
  }
  RatFun& at(std::size_t a, std::size_t b) { return v[a * n + b]; }
  RatFun& at(std::size_t a, std::size_t b, std::size_t c) { return v[(a * n + b) * n + c]; }
  RatFun& at(std::size_t a, std::size_t b, std::size_t c, std::size_t d) { return v[((a * n + b) * n + c) * n + d]; }
};

}  // namespace

CurvatureBundle curvature_suite(const TensorField& g, int det_sign) {
  if (g.up() != 0 || g.down() != 2) throw std::invalid_argument("curvature_suite needs a (0,2) metric");
  if (det_sign != 1 && det_sign != -1) throw std::invalid_argument("det_sign must be +1 or -1");
  const ChartRef& chart = g.chart();
  const std::size_t n = chart->dim();
  Normalizer nz(chart->assumptions);

  Matrix G(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) G(a, b) = nz.from_expr(g.get({static_cast<int>(a), static_cast<int>(b)}));
  const RatFun det = determinant(G, nz);
  if (det.is_zero()) throw std::domain_error("metric is singular");
  const Matrix Gi = inverse(G, nz);

  // dg(c, a, b) = ∂_c g_ab
  Dense4 dg(n, 3);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      if (G(a, b).is_zero()) continue;
      for (std::size_t c = 0; c < n; ++c) {
        const RatFun d = nz.diff(G(a, b), chart->coords[c]);
        dg.at(c, a, b) = d;
        dg.at(c, b, a) = d;
      }
    }

  // Γ^a_{bc} = ½ g^{ad}(∂_b g_dc + ∂_c g_bd − ∂_d g_bc)
  Dense4 gam(n, 3);
  const RatFun half(Rational(1, 2));
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t c = b; c < n; ++c) {
      std::vector<RatFun> lower(n);  // Γ_{d bc}
      for (std::size_t d = 0; d < n; ++d) lower[d] = sum({dg.at(b, d, c), dg.at(c, b, d), -dg.at(d, b, c)});
      for (std::size_t a = 0; a < n; ++a) {
        std::vector<RatFun> t;
        for (std::size_t d = 0; d < n; ++d)
          if (!Gi(a, d).is_zero() && !lower[d].is_zero()) t.push_back(Gi(a, d) * lower[d]);
        const RatFun v = half * sum(t);
        gam.at(a, b, c) = v;
        gam.at(a, c, b) = v;
      }
    }

  // dgam(e, a, b, c) = ∂_e Γ^a_{bc}
  Dense4 dgam(n, 4);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = b; c < n; ++c) {
        if (gam.at(a, b, c).is_zero()) continue;
        for (std::size_t e = 0; e < n; ++e) {
          const RatFun d = nz.diff(gam.at(a, b, c), chart->coords[e]);
          dgam.at(e, a, b, c) = d;
          dgam.at(e, a, c, b) = d;
        }
      }

  // R^a_{bcd} = ∂_c Γ^a_{db} − ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} − Γ^a_{de}Γ^e_{cb}
  Dense4 riem(n, 4);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = c + 1; d < n; ++d) {
          std::vector<RatFun> t{dgam.at(c, a, d, b), -dgam.at(d, a, c, b)};
          for (std::size_t e = 0; e < n; ++e) {
            if (!gam.at(a, c, e).is_zero() && !gam.at(e, d, b).is_zero()) t.push_back(gam.at(a, c, e) * gam.at(e, d, b));
            if (!gam.at(a, d, e).is_zero() && !gam.at(e, c, b).is_zero())
              t.push_back(-(gam.at(a, d, e) * gam.at(e, c, b)));
          }
          const RatFun v = sum(t);
          riem.at(a, b, c, d) = v;
          riem.at(a, b, d, c) = -v;
        }

  // R_{ab} = R^c_{acb}
  Matrix Ric(n, n);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      std::vector<RatFun> t;
      for (std::size_t c = 0; c < n; ++c)
        if (!riem.at(c, a, c, b).is_zero()) t.push_back(riem.at(c, a, c, b));
      Ric(a, b) = sum(t);
      Ric(b, a) = Ric(a, b);
    }
  std::vector<RatFun> rt;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      if (!Gi(a, b).is_zero() && !Ric(a, b).is_zero()) rt.push_back(Gi(a, b) * Ric(a, b));
  const RatFun R = sum(rt);

  // E^{ab} = g^{ac} g^{bd} R_{cd} − ½ R g^{ab}
  Matrix up(n, n);  // g^{ac} R_{cd}
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t d = 0; d < n; ++d) {
      std::vector<RatFun> t;
      for (std::size_t c = 0; c < n; ++c)
        if (!Gi(a, c).is_zero() && !Ric(c, d).is_zero()) t.push_back(Gi(a, c) * Ric(c, d));
      up(a, d) = sum(t);
    }
  Matrix E(n, n);
  const RatFun halfR = half * R;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      std::vector<RatFun> t;
      for (std::size_t d = 0; d < n; ++d)
        if (!up(a, d).is_zero() && !Gi(b, d).is_zero()) t.push_back(up(a, d) * Gi(b, d));
      if (!Gi(a, b).is_zero()) t.push_back(-(halfR * Gi(a, b)));
      E(a, b) = sum(t);
      E(b, a) = E(a, b);
    }

  const RatFun abs_det = det_sign > 0 ? det : -det;
  const RatFun sq = nz.pow(abs_det, Rational(1, 2));

  CurvatureBundle out;
  out.christoffel = from_dense(chart, 1, 2, Symmetry::None, gam.v, nz);
  out.riemann = from_dense(chart, 1, 3, Symmetry::None, riem.v, nz);
  out.ricci = TensorField::symmetric2(chart);
  out.einstein = TensorField::symmetric2(chart, true);
  out.inverse_metric = TensorField::symmetric2(chart, true);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a; b < n; ++b) {
      const Index idx{static_cast<int>(a), static_cast<int>(b)};
      out.ricci.set(idx, nz.to_expr(Ric(a, b)));
      out.einstein.set(idx, nz.to_expr(E(a, b)));
      out.inverse_metric.set(idx, nz.to_expr(Gi(a, b)));
    }
  out.scalar = nz.to_expr(R);
  out.det = nz.to_expr(det);
  out.sqrt_abs_det = nz.to_expr(sq);
  out.volume = TensorField::form(chart, static_cast<int>(n));
  Index top;
  for (std::size_t i = 0; i < n; ++i) top.push_back(static_cast<int>(i));
  out.volume.set(top, out.sqrt_abs_det);
  return out;
}

std::vector<Expr> einstein_divergence(const CurvatureBundle& c) {
  const ChartRef& chart = c.einstein.chart();
  const std::size_t n = chart->dim();
  Normalizer nz(chart->assumptions);
  const std::vector<RatFun> E = dense(c.einstein, nz);
  const std::vector<RatFun> G = dense(c.christoffel, nz);
  auto e = [&](std::size_t a, std::size_t b) -> const RatFun& { return E[a * n + b]; };
  auto gm = [&](std::size_t a, std::size_t b, std::size_t cc) -> const RatFun& { return G[(a * n + b) * n + cc]; };
  std::vector<Expr> out;
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<RatFun> t;
    for (std::size_t a = 0; a < n; ++a) {
      if (!e(a, b).is_zero()) t.push_back(nz.diff(e(a, b), chart->coords[a]));
      for (std::size_t k = 0; k < n; ++k) {
        if (!gm(a, a, k).is_zero() && !e(k, b).is_zero()) t.push_back(gm(a, a, k) * e(k, b));
        if (!gm(b, a, k).is_zero() && !e(a, k).is_zero()) t.push_back(gm(b, a, k) * e(a, k));
      }
    }
    out.push_back(nz.to_expr(sum(t)));
  }
  return out;
}

}  // namespace psc
