#include "psc/exprcore/parse.hpp"

#include <cctype>

#include "psc/exprcore/calculus.hpp"

namespace psc {

ParseError::ParseError(const std::string& message, std::size_t offset)
    : std::runtime_error(message + " at offset " + std::to_string(offset)), offset_(offset) {}

namespace {

// Common function names outside the supported set; rejected rather than
// silently treated as unknown functions.
const std::set<std::string>& unsupported_functions() {
  static const std::set<std::string> names = {
      "log", "ln",   "tan",  "cot",  "sec",   "csc",   "sinh", "cosh", "tanh",
      "abs", "asin", "acos", "atan", "atan2", "floor", "ceil", "sign", "pow"};
  return names;
}

class Parser {
 public:
  Parser(std::string_view text, const ParseOptions& options) : text_(text), opt_(options) {}

  Expr run() {
    Expr e = expression();
    skip_space();
    if (pos_ != text_.size()) fail("unexpected character '" + std::string(1, text_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(msg, pos_); }
  [[noreturn]] void fail_at(const std::string& msg, std::size_t at) const { throw ParseError(msg, at); }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input");
      fail(std::string("expected '") + c + "'");
    }
  }

  Expr expression() {
    std::vector<Expr> terms;
    terms.push_back(term());
    for (;;) {
      if (accept('+'))
        terms.push_back(term());
      else if (accept('-'))
        terms.push_back(-term());
      else
        break;
    }
    return terms.size() == 1 ? terms[0] : add(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = acc * unary();
      } else if (accept('/')) {
        const std::size_t at = pos_;
        Expr d = unary();
        if (d.is_zero()) fail_at("division by zero", at);
        acc = acc / d;
      } else {
        break;
      }
    }
    return acc;
  }

  Expr unary() {
    if (accept('-')) return -unary();
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip_space();
    if (accept('^')) {
      skip_space();
      const std::size_t at = pos_;
      Expr e = unary();  // right-associative
      if (!e.is_number()) fail_at("exponent must be a rational constant", at);
      if (base.is_zero() && e.number() < 0) fail_at("division by zero", at);
      return pow(base, e.number());
    }
    return base;
  }

  Expr primary() {
    skip_space();
    if (pos_ >= text_.size()) fail("unexpected end of input");
    const char c = text_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c))) return number();
    if (std::isalpha(static_cast<unsigned char>(c))) return identifier();
    if (accept('(')) {
      Expr e = expression();
      expect(')');
      return e;
    }
    fail("unexpected character '" + std::string(1, c) + "'");
  }

  Expr number() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    if (pos_ < text_.size() && (text_[pos_] == '.' || text_[pos_] == 'e' || text_[pos_] == 'E'))
      fail("only integer literals are supported");
    return Expr(Rational(Integer(std::string(text_.substr(start, pos_ - start)))));
  }

  Expr identifier() {
    const std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_'))
      ++pos_;
    const std::string name(text_.substr(start, pos_ - start));
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '(') {
      ++pos_;
      return call(name, start);
    }
    SymbolRole role = SymbolRole::Parameter;
    if (opt_.coordinates.count(name)) role = SymbolRole::Coordinate;
    if (opt_.reduced_fields.count(name)) role = SymbolRole::ReducedField;
    return Expr::symbol(name, role);
  }

  std::vector<Expr> arguments() {
    std::vector<Expr> args;
    if (accept(')')) return args;
    args.push_back(expression());
    while (accept(',')) args.push_back(expression());
    expect(')');
    return args;
  }

  Expr call(const std::string& name, std::size_t at) {
    std::vector<Expr> args = arguments();
    auto arity = [&](std::size_t n) {
      if (args.size() != n)
        fail_at(name + " expects " + std::to_string(n) + " argument(s), got " + std::to_string(args.size()), at);
    };
    if (name == "exp") {
      arity(1);
      return exp(args[0]);
    }
    if (name == "sqrt") {
      arity(1);
      return sqrt(args[0]);
    }
    if (name == "sin") {
      arity(1);
      return sin(args[0]);
    }
    if (name == "cos") {
      arity(1);
      return cos(args[0]);
    }
    if (name == "diff") {
      if (args.size() != 2 && args.size() != 3) fail_at("diff expects 2 or 3 arguments", at);
      unsigned k = 1;
      if (args.size() == 3) {
        if (!args[2].is_number() || !is_integer(args[2].number()) || args[2].number() < 0)
          fail_at("diff order must be a non-negative integer", at);
        k = static_cast<unsigned>(args[2].number().get_num().get_ui());
      }
      const Expr& f = args[0];
      // diff(f(A),A,k) denotes the k-th derivative of f evaluated at A.
      if (f.is(Kind::FnApp) && f.arg() == args[1])
        return Expr::function(f.name(), f.arg(), f.order() + k);
      if (!args[1].is_symbol()) fail_at("diff variable must be a symbol", at);
      Expr r = f;
      for (unsigned i = 0; i < k; ++i) r = differentiate(r, args[1]);
      return r;
    }
    if (unsupported_functions().count(name)) fail_at("unknown function '" + name + "'", at);
    if (opt_.functions && !opt_.functions->count(name)) fail_at("unknown function '" + name + "'", at);
    arity(1);
    return Expr::function(name, args[0], 0);
  }

  std::string_view text_;
  const ParseOptions& opt_;
  std::size_t pos_ = 0;
};

}  // namespace

Expr parse(std::string_view text, const ParseOptions& options) { return Parser(text, options).run(); }

}  // namespace psc
