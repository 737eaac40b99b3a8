#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "psc/exprcore/ratfun.hpp"

namespace psc {

/// Dense matrix over the rational-function field.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), a_(rows * cols) {}

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  RatFun& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  const RatFun& operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }

  std::vector<RatFun> row(std::size_t i) const;
  void append_row(const std::vector<RatFun>& r);
  Matrix transposed() const;

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<RatFun> a_;
};

using Vector = std::vector<RatFun>;

struct Rref {
  Matrix reduced;
  std::vector<std::size_t> pivots;  // pivot column of each nonzero row
  /// Non-constant pivot values met during elimination (primitive parts of
  /// the numerators, as expressions); the rank may drop where one vanishes.
  std::vector<Expr> conditions;
  std::size_t rank() const { return pivots.size(); }
};

Rref rref(Matrix m, Normalizer& n);
std::size_t rank(const Matrix& m, Normalizer& n);
/// Basis of {x : m x = 0}, one vector per free column with a 1 there.
std::vector<Vector> nullspace(const Matrix& m, Normalizer& n, std::vector<Expr>* conditions = nullptr);

/// Determinant by cofactor expansion (small matrices).
RatFun determinant(const Matrix& m, Normalizer& n);
/// Inverse via adjugate / determinant; throws std::domain_error if singular.
Matrix inverse(const Matrix& m, Normalizer& n);

/// Coordinates of `v` in the span of `basis` (solves exactly); false if v is
/// not in the span.
bool coordinates_in(const std::vector<Vector>& basis, const Vector& v, Normalizer& n, Vector& out);

/// Solves target = Σ c_j basis_j with coefficients c_j free of `variables`
/// (coefficient extraction over the variable-dependent atoms). Returns false
/// when no such combination exists; `rank` receives the rank of the system
/// (basis.size() means the c_j are unique).
bool constant_coefficients(const std::vector<Vector>& basis, const Vector& target, std::span<const Expr> variables,
                           Normalizer& n, Vector& out, std::size_t* rank = nullptr);

/// Adds the non-constant factors of a pivot to `conds` (deduplicated).
void record_condition(const RatFun& pivot, Normalizer& n, std::vector<Expr>& conds);

}  // namespace psc
