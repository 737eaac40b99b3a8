#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "psc/varreduce/reduce.hpp"

namespace psc {

/// Invalid problem file. `pointer` is a JSON pointer; line/column are 1-based
/// (0 when unknown).
class ProblemError : public std::runtime_error {
 public:
  ProblemError(const std::string& message, std::string pointer, std::size_t line, std::size_t column);
  const std::string& pointer() const { return pointer_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string pointer_;
  std::size_t line_, column_;
};

enum class LagrangianKind { None, EinsteinHilbert, Density };

struct ProblemSpec {
  std::string name;
  std::string origin;
  ChartRef chart;
  std::vector<std::string> parameters;
  std::vector<std::string> functions;
  AssumptionSet assumptions;
  ExprMap<Expr> substitutions;  // from --set

  std::vector<TensorField> generators;
  std::optional<LieAlgebra> algebra;  // given structure constants
  std::vector<std::vector<Expr>> isotropy;  // over the algebra basis, with given constants
  std::optional<PointSpec> point;
  std::string fiber = "metric";

  std::optional<TensorField> ansatz;
  int det_sign = -1;
  std::vector<std::string> reduced_fields;
  std::optional<TensorField> chi;

  LagrangianKind lagrangian = LagrangianKind::None;
  Expr density;
  std::vector<std::string> density_fields;
  ExprMap<Expr> field_ansatz;  // field symbol -> expression in the chart
  Expr volume = Expr(1);

  QuotientSpec quotient;
  std::vector<Pairing> pairings;
  std::optional<int> degree;
};

ProblemSpec parse_problem(const std::string& text, const std::string& origin,
                          const std::vector<std::pair<std::string, std::string>>& sets = {});
ProblemSpec load_problem(const std::string& path, const std::vector<std::pair<std::string, std::string>>& sets = {});

/// Byte offset of every value (members: of the key) keyed by JSON pointer.
std::map<std::string, std::size_t> json_positions(const std::string& text);

}  // namespace psc
