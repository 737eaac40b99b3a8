#pragma once

#include <string>
#include <vector>

#include "oracles.hpp"
#include "psc/exprcore/parse.hpp"
#include "psc/liecoh/lie.hpp"

namespace bianchi {

struct Type {
  std::string name;
  bool class_a;
  // brackets [e_i, e_j] = Σ coef e_k, as (i, j, k, coef)
  std::vector<std::tuple<int, int, int, long>> brackets;
};

inline std::vector<Type> types() {
  return {
      {"I", true, {}},
      {"II", true, {{1, 2, 0, 1}}},
      {"III", false, {{0, 2, 0, 1}}},
      {"IV", false, {{0, 2, 0, 1}, {1, 2, 0, 1}, {1, 2, 1, 1}}},
      {"V", false, {{0, 2, 0, 1}, {1, 2, 1, 1}}},
      {"VI0", true, {{0, 2, 0, 1}, {1, 2, 1, -1}}},
      {"VIh", false, {{0, 2, 0, 1}, {1, 2, 1, 2}}},
      {"VII0", true, {{0, 2, 1, -1}, {1, 2, 0, 1}}},
      {"VIIh", false, {{0, 2, 0, 1}, {0, 2, 1, -1}, {1, 2, 0, 1}, {1, 2, 1, 1}}},
      {"VIII", true, {{0, 1, 2, -1}, {1, 2, 0, 1}, {2, 0, 1, 1}}},
      {"IX", true, {{0, 1, 2, 1}, {1, 2, 0, 1}, {2, 0, 1, 1}}},
  };
}

inline oracle::Constants constants(const Type& t) {
  oracle::Constants c(3, std::vector<std::vector<mpq_class>>(3, std::vector<mpq_class>(3)));
  for (const auto& [i, j, k, v] : t.brackets) {
    c[k][i][j] += v;
    c[k][j][i] -= v;
  }
  return c;
}

inline psc::LieAlgebra algebra(const Type& t) {
  const oracle::Constants c = constants(t);
  std::vector<psc::Expr> flat;
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int k = 0; k < 3; ++k) flat.push_back(psc::Expr(psc::Rational(c[a][b][k])));
  return psc::lie_algebra_from_constants(flat, 3);
}

}  // namespace bianchi
