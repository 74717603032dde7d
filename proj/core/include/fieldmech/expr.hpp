#pragma once

#include <memory>
#include <string>
#include <string_view>

#include "fieldmech/grid.hpp"

namespace fieldmech {

class ParseError : public Error {
public:
  ParseError(const std::string& what, int line, int col)
      : Error("parse error at " + std::to_string(line) + ":" +
              std::to_string(col) + ": " + what),
        line(line),
        col(col) {}
  int line, col;
};

/// Runtime evaluation failure: division by zero, sqrt of a negative value,
/// or a power with a domain violation. Never reported as a silent NaN.
class EvalError : public Error {
public:
  explicit EvalError(const std::string& what) : Error(what) {}
};

struct Bindings {
  double x = 0, y = 0, z = 0, r = 0;
  static Bindings at(const Vec3& p) { return {p.x, p.y, p.z, p.norm()}; }
};

/// Arithmetic expression over the variables x, y, z, r with the call set
/// sin, cos, exp, sqrt, abs. `^` takes a constant exponent and binds
/// tightest. Deep-copying value type.
class ExprAst {
public:
  ExprAst() = default;
  ExprAst(const ExprAst& o);
  ExprAst(ExprAst&&) noexcept = default;
  ExprAst& operator=(const ExprAst& o);
  ExprAst& operator=(ExprAst&&) noexcept = default;
  ~ExprAst();

  static ExprAst number(double v);
  static ExprAst variable(char name);  // one of x y z r
  static ExprAst unary_minus(ExprAst a);
  static ExprAst binary(char op, ExprAst a, ExprAst b);  // + - * /
  static ExprAst power(ExprAst base, double exponent);
  static ExprAst call(const std::string& fn, ExprAst arg);

  /// Parses a single expression. `line` seeds reported positions when the
  /// text is embedded in a larger document; `col0` offsets columns.
  static ExprAst parse(std::string_view text, int line = 1, int col0 = 1);

  bool empty() const { return root_ == nullptr; }
  double eval(const Bindings& b) const;
  double eval_at(const Vec3& p) const { return eval(Bindings::at(p)); }

  /// Fully parenthesized round-trippable form: parse(pretty()) is
  /// structurally identical.
  std::string pretty() const;
  bool structurally_equal(const ExprAst& o) const;

  struct Node;
  const Node* root() const { return root_.get(); }

private:
  explicit ExprAst(std::unique_ptr<Node> n) : root_(std::move(n)) {}
  std::unique_ptr<Node> root_;
};

/// Node layout is public so independent evaluators (tests, differentiation)
/// can walk the tree.
struct ExprAst::Node {
  enum class Kind { Number, Var, Neg, Add, Sub, Mul, Div, Pow, Call };
  enum class Fn { Sin, Cos, Exp, Sqrt, Abs };
  Kind kind;
  double number = 0.0;    // Number value or Pow exponent
  char var = 'x';         // Var
  Fn fn = Fn::Sin;        // Call
  std::unique_ptr<Node> a, b;
};

}  // namespace fieldmech
