#pragma once

// Independent reference computations used by the tests. Nothing here calls
// into the symbolic engine.

#include <gmpxx.h>

#include <array>
#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

// ---- brute-force Chevalley-Eilenberg complex over Q ----

// c[a][b][c] = c^a_{bc}
using Constants = std::vector<std::vector<std::vector<mpq_class>>>;

inline std::vector<std::vector<int>> subsets(int n, int k) {
  std::vector<std::vector<int>> out;
  std::vector<int> cur;
  std::function<void(int)> rec = [&](int start) {
    if (static_cast<int>(cur.size()) == k) {
      out.push_back(cur);
      return;
    }
    for (int i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

inline int subset_index(const std::vector<std::vector<int>>& S, std::vector<int> s, int& sign) {
  sign = 1;
  for (std::size_t i = 0; i < s.size(); ++i)
    for (std::size_t j = i + 1; j < s.size(); ++j) {
      if (s[i] == s[j]) return -1;
      if (s[i] > s[j]) {
        std::swap(s[i], s[j]);
        sign = -sign;
      }
    }
  for (std::size_t i = 0; i < S.size(); ++i)
    if (S[i] == s) return static_cast<int>(i);
  return -1;
}

// (dω)(x_0..x_k) = Σ_{i<j} (-1)^{i+j} ω([x_i,x_j], x_0..^i..^j..x_k), on basis elements
inline std::vector<std::vector<mpq_class>> differential(const Constants& c, int k) {
  const int n = static_cast<int>(c.size());
  const auto Sk = subsets(n, k), Sk1 = subsets(n, k + 1);
  std::vector<std::vector<mpq_class>> D(Sk1.size(), std::vector<mpq_class>(Sk.size()));
  for (std::size_t row = 0; row < Sk1.size(); ++row) {
    const auto& x = Sk1[row];
    for (int i = 0; i <= k; ++i)
      for (int j = i + 1; j <= k; ++j) {
        std::vector<int> rest;
        for (int t = 0; t <= k; ++t)
          if (t != i && t != j) rest.push_back(x[t]);
        const mpq_class s = ((i + j) % 2 == 0) ? 1 : -1;
        for (int a = 0; a < n; ++a) {
          const mpq_class& coef = c[a][x[i]][x[j]];
          if (coef == 0) continue;
          std::vector<int> args{a};
          args.insert(args.end(), rest.begin(), rest.end());
          int sg = 0;
          const int col = subset_index(Sk, args, sg);
          if (col < 0) continue;
          D[row][col] += s * coef * sg;
        }
      }
  }
  return D;
}

inline std::size_t rank(std::vector<std::vector<mpq_class>> m) {
  if (m.empty()) return 0;
  const std::size_t R = m.size(), C = m[0].size();
  std::size_t r = 0;
  for (std::size_t col = 0; col < C && r < R; ++col) {
    std::size_t p = r;
    while (p < R && m[p][col] == 0) ++p;
    if (p == R) continue;
    std::swap(m[p], m[r]);
    for (std::size_t i = 0; i < R; ++i) {
      if (i == r || m[i][col] == 0) continue;
      const mpq_class f = m[i][col] / m[r][col];
      for (std::size_t j = col; j < C; ++j) m[i][j] -= f * m[r][j];
    }
    ++r;
  }
  return r;
}

inline std::size_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  std::size_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * static_cast<std::size_t>(n - k + i) / static_cast<std::size_t>(i);
  return r;
}

// dim H^k(g) of the absolute complex
inline std::size_t betti(const Constants& c, int k) {
  const int n = static_cast<int>(c.size());
  const std::size_t dk = binom(n, k);
  const std::size_t rout = k < n ? rank(differential(c, k)) : 0;
  const std::size_t rin = k > 0 ? rank(differential(c, k - 1)) : 0;
  return dk - rout - rin;
}

// d∘d on Λ^k
inline bool dd_zero(const Constants& c, int k) {
  const auto A = differential(c, k), B = differential(c, k + 1);
  for (std::size_t i = 0; i < B.size(); ++i)
    for (std::size_t j = 0; j < A[0].size(); ++j) {
      mpq_class s = 0;
      for (std::size_t t = 0; t < A.size(); ++t) s += B[i][t] * A[t][j];
      if (s != 0) return false;
    }
  return true;
}

// ---- finite-difference curvature ----

using Point = std::vector<long double>;
using MetricFn = std::function<std::vector<std::vector<long double>>(const Point&)>;

inline std::vector<std::vector<long double>> invert(std::vector<std::vector<long double>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<long double>> inv(n, std::vector<long double>(n, 0));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t i = c + 1; i < n; ++i)
      if (std::fabs(a[i][c]) > std::fabs(a[p][c])) p = i;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    const long double d = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (std::size_t i = 0; i < n; ++i) {
      if (i == c) continue;
      const long double f = a[i][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[i][j] -= f * a[c][j];
        inv[i][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

// Γ^a_{bc} by central differences of g, index [a][b][c]
inline std::vector<std::vector<std::vector<long double>>> christoffel(const MetricFn& g, const Point& x,
                                                                      long double h = 1e-4L) {
  const std::size_t n = x.size();
  std::vector<std::vector<std::vector<long double>>> dg(n);  // dg[c][a][b] = ∂_c g_ab
  for (std::size_t c = 0; c < n; ++c) {
    Point xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const auto gp = g(xp), gm = g(xm);
    dg[c].assign(n, std::vector<long double>(n));
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) dg[c][a][b] = (gp[a][b] - gm[a][b]) / (2 * h);
  }
  const auto gi = invert(g(x));
  std::vector<std::vector<std::vector<long double>>> G(n, std::vector<std::vector<long double>>(n, std::vector<long double>(n)));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c) {
        long double s = 0;
        for (std::size_t d = 0; d < n; ++d) s += gi[a][d] * (dg[b][d][c] + dg[c][d][b] - dg[d][b][c]);
        G[a][b][c] = s / 2;
      }
  return G;
}

struct NumericCurvature {
  std::vector<std::vector<long double>> ricci;
  long double scalar = 0;
  std::vector<std::vector<long double>> einstein_up;  // E^{ab}
};

// R^a_{bcd} = ∂_c Γ^a_{db} - ∂_d Γ^a_{cb} + Γ^a_{ce}Γ^e_{db} - Γ^a_{de}Γ^e_{cb}; R_bd = R^a_{bad}
inline NumericCurvature curvature(const MetricFn& g, const Point& x, long double h = 1e-4L) {
  const std::size_t n = x.size();
  const auto G = christoffel(g, x, h / 10);
  std::vector<decltype(christoffel(g, x))> dG(n);
  for (std::size_t c = 0; c < n; ++c) {
    Point xp = x, xm = x;
    xp[c] += h;
    xm[c] -= h;
    const auto Gp = christoffel(g, xp, h / 10), Gm = christoffel(g, xm, h / 10);
    dG[c] = Gp;
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b)
        for (std::size_t d = 0; d < n; ++d) dG[c][a][b][d] = (Gp[a][b][d] - Gm[a][b][d]) / (2 * h);
  }
  NumericCurvature out;
  out.ricci.assign(n, std::vector<long double>(n, 0));
  for (std::size_t b = 0; b < n; ++b)
    for (std::size_t d = 0; d < n; ++d) {
      long double s = 0;
      for (std::size_t a = 0; a < n; ++a) {
        // R^a_{bad}
        s += dG[a][a][d][b] - dG[d][a][a][b];
        for (std::size_t e = 0; e < n; ++e) s += G[a][a][e] * G[e][d][b] - G[a][d][e] * G[e][a][b];
      }
      out.ricci[b][d] = s;
    }
  const auto gx = g(x);
  const auto gi = invert(gx);
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out.scalar += gi[a][b] * out.ricci[a][b];
  out.einstein_up.assign(n, std::vector<long double>(n, 0));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) {
      long double s = 0;
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) s += gi[a][c] * gi[b][d] * (out.ricci[c][d] - out.scalar * gx[c][d] / 2);
      out.einstein_up[a][b] = s;
    }
  return out;
}

inline bool close(long double a, long double b, long double rel, long double abs_floor = 1e-9L) {
  return std::fabs(a - b) <= rel * std::max(std::fabs(a), std::fabs(b)) + abs_floor;
}

}  // namespace oracle
