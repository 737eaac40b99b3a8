#pragma once

#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>

#include "psc/exprcore/expr.hpp"

namespace psc {

/// Syntax or name-resolution error; offset is a byte offset into the input.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& message, std::size_t offset);
  std::size_t offset() const { return offset_; }

 private:
  std::size_t offset_;
};

struct ParseOptions {
  /// Names parsed as coordinates / reduced fields; everything else is a parameter.
  std::set<std::string> coordinates;
  std::set<std::string> reduced_fields;
  /// When set, only these names may be applied as unknown functions.
  std::optional<std::set<std::string>> functions;
};

/// Parses the expression grammar: integers, identifiers, + - * / ^ (with ^
/// right-associative and a rational-constant exponent), and calls exp, sqrt,
/// sin, cos, diff(f(u),u,k) and f(u) for unknown univariate functions.
Expr parse(std::string_view text, const ParseOptions& options = {});

}  // namespace psc
