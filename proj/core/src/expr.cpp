#include "fieldmech/expr.hpp"

#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>

namespace fieldmech {

using Node = ExprAst::Node;
using Kind = Node::Kind;
using Fn = Node::Fn;

namespace {

std::unique_ptr<Node> clone(const Node* n) {
  if (!n) return nullptr;
  auto c = std::make_unique<Node>();
  c->kind = n->kind;
  c->number = n->number;
  c->var = n->var;
  c->fn = n->fn;
  c->a = clone(n->a.get());
  c->b = clone(n->b.get());
  return c;
}

std::unique_ptr<Node> make(Kind k) {
  auto n = std::make_unique<Node>();
  n->kind = k;
  return n;
}

const char* fn_name(Fn f) {
  switch (f) {
    case Fn::Sin: return "sin";
    case Fn::Cos: return "cos";
    case Fn::Exp: return "exp";
    case Fn::Sqrt: return "sqrt";
    case Fn::Abs: return "abs";
  }
  return "?";
}

std::string fmt_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ExprAst::ExprAst(const ExprAst& o) : root_(clone(o.root_.get())) {}
ExprAst& ExprAst::operator=(const ExprAst& o) {
  if (this != &o) root_ = clone(o.root_.get());
  return *this;
}
ExprAst::~ExprAst() = default;

ExprAst ExprAst::number(double v) {
  auto n = make(Kind::Number);
  n->number = v;
  return ExprAst(std::move(n));
}

ExprAst ExprAst::variable(char name) {
  if (name != 'x' && name != 'y' && name != 'z' && name != 'r')
    throw Error(std::string("unknown variable '") + name + "'");
  auto n = make(Kind::Var);
  n->var = name;
  return ExprAst(std::move(n));
}

ExprAst ExprAst::unary_minus(ExprAst a) {
  if (a.empty()) throw Error("unary minus of empty expression");
  // Literals fold so Neg(Number) is unrepresentable; the parser does the
  // same, which keeps parse(pretty()) an identity on trees.
  if (a.root_->kind == Kind::Number) {
    a.root_->number = -a.root_->number;
    return a;
  }
  auto n = make(Kind::Neg);
  n->a = std::move(a.root_);
  return ExprAst(std::move(n));
}

ExprAst ExprAst::binary(char op, ExprAst a, ExprAst b) {
  if (a.empty() || b.empty()) throw Error("binary op on empty expression");
  Kind k;
  switch (op) {
    case '+': k = Kind::Add; break;
    case '-': k = Kind::Sub; break;
    case '*': k = Kind::Mul; break;
    case '/': k = Kind::Div; break;
    default: throw Error(std::string("unknown operator '") + op + "'");
  }
  auto n = make(k);
  n->a = std::move(a.root_);
  n->b = std::move(b.root_);
  return ExprAst(std::move(n));
}

ExprAst ExprAst::power(ExprAst base, double exponent) {
  if (base.empty()) throw Error("power of empty expression");
  auto n = make(Kind::Pow);
  n->number = exponent;
  n->a = std::move(base.root_);
  return ExprAst(std::move(n));
}

ExprAst ExprAst::call(const std::string& fn, ExprAst arg) {
  if (arg.empty()) throw Error("call on empty expression");
  Fn f;
  if (fn == "sin") f = Fn::Sin;
  else if (fn == "cos") f = Fn::Cos;
  else if (fn == "exp") f = Fn::Exp;
  else if (fn == "sqrt") f = Fn::Sqrt;
  else if (fn == "abs") f = Fn::Abs;
  else throw Error("unknown function '" + fn + "'");
  auto n = make(Kind::Call);
  n->fn = f;
  n->a = std::move(arg.root_);
  return ExprAst(std::move(n));
}

// ---------------------------------------------------------------------------
// Parser. Recursive descent:
//   expr    := term (('+'|'-') term)*
//   term    := unary (('*'|'/') unary)*
//   unary   := '-' unary | postfix
//   postfix := primary ('^' signed-number)?
//   primary := number | ident | ident '(' expr ')' | '(' expr ')'
// A leading '-' on a number literal folds into the literal so pretty()
// output reparses to an identical tree.

namespace {

struct Parser {
  std::string_view text;
  size_t pos = 0;
  int line;
  int col;

  Parser(std::string_view t, int line0, int col0)
      : text(t), line(line0), col(col0) {}

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError(msg, line, col);
  }
  [[noreturn]] void fail_at(const std::string& msg, int l, int c) const {
    throw ParseError(msg, l, c);
  }

  char peek() const { return pos < text.size() ? text[pos] : '\0'; }

  void advance() {
    if (pos >= text.size()) return;
    if (text[pos] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
    ++pos;
  }

  void skip_ws() {
    while (pos < text.size() && std::isspace((unsigned char)text[pos]))
      advance();
  }

  bool eat(char c) {
    skip_ws();
    if (peek() != c) return false;
    advance();
    return true;
  }

  double number_literal() {
    skip_ws();
    int l = line, c = col;
    size_t start = pos;
    if (peek() == '-' || peek() == '+') advance();
    bool digits = false;
    while (std::isdigit((unsigned char)peek())) { advance(); digits = true; }
    if (peek() == '.') {
      advance();
      while (std::isdigit((unsigned char)peek())) { advance(); digits = true; }
    }
    if (!digits) fail_at("expected a number", l, c);
    if (peek() == 'e' || peek() == 'E') {
      advance();
      if (peek() == '-' || peek() == '+') advance();
      if (!std::isdigit((unsigned char)peek()))
        fail("malformed exponent in number literal");
      while (std::isdigit((unsigned char)peek())) advance();
    }
    std::string lit(text.substr(start, pos - start));
    char* end = nullptr;
    double v = std::strtod(lit.c_str(), &end);
    if (!end || *end != '\0') fail_at("malformed number '" + lit + "'", l, c);
    return v;
  }

  std::string ident() {
    size_t start = pos;
    while (std::isalnum((unsigned char)peek()) || peek() == '_') advance();
    return std::string(text.substr(start, pos - start));
  }

  std::unique_ptr<Node> expr() {
    auto lhs = term();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '+' && c != '-') return lhs;
      advance();
      auto n = make(c == '+' ? Kind::Add : Kind::Sub);
      n->a = std::move(lhs);
      n->b = term();
      lhs = std::move(n);
    }
  }

  std::unique_ptr<Node> term() {
    auto lhs = unary();
    for (;;) {
      skip_ws();
      char c = peek();
      if (c != '*' && c != '/') return lhs;
      advance();
      auto n = make(c == '*' ? Kind::Mul : Kind::Div);
      n->a = std::move(lhs);
      n->b = unary();
      lhs = std::move(n);
    }
  }

  std::unique_ptr<Node> unary() {
    skip_ws();
    if (peek() == '-') {
      advance();
      auto inner = unary();
      if (inner->kind == Kind::Number) {
        inner->number = -inner->number;
        return inner;
      }
      auto n = make(Kind::Neg);
      n->a = std::move(inner);
      return n;
    }
    return postfix();
  }

  std::unique_ptr<Node> postfix() {
    auto base = primary();
    skip_ws();
    if (peek() != '^') return base;
    advance();
    double e = number_literal();
    auto n = make(Kind::Pow);
    n->number = e;
    n->a = std::move(base);
    skip_ws();
    if (peek() == '^') fail("'^' does not chain; parenthesize the base");
    return n;
  }

  std::unique_ptr<Node> primary() {
    skip_ws();
    int l = line, c = col;
    char ch = peek();
    if (ch == '\0') fail("unexpected end of expression");
    if (ch == '(') {
      advance();
      auto inner = expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isdigit((unsigned char)ch) || ch == '.') {
      auto n = make(Kind::Number);
      n->number = number_literal();
      return n;
    }
    if (std::isalpha((unsigned char)ch) || ch == '_') {
      std::string name = ident();
      skip_ws();
      if (peek() == '(') {
        advance();
        Fn f;
        if (name == "sin") f = Fn::Sin;
        else if (name == "cos") f = Fn::Cos;
        else if (name == "exp") f = Fn::Exp;
        else if (name == "sqrt") f = Fn::Sqrt;
        else if (name == "abs") f = Fn::Abs;
        else fail_at("unknown function '" + name + "'", l, c);
        auto n = make(Kind::Call);
        n->fn = f;
        n->a = expr();
        if (!eat(')')) fail("expected ')' after call argument");
        return n;
      }
      if (name.size() == 1 && (name == "x" || name == "y" || name == "z" ||
                               name == "r")) {
        auto n = make(Kind::Var);
        n->var = name[0];
        return n;
      }
      fail_at("unknown identifier '" + name + "'", l, c);
    }
    fail(std::string("unexpected character '") + ch + "'");
  }
};

}  // namespace

ExprAst ExprAst::parse(std::string_view text, int line, int col0) {
  Parser p(text, line, col0);
  auto root = p.expr();
  p.skip_ws();
  if (p.peek() != '\0')
    throw ParseError(std::string("trailing input starting at '") + p.peek() +
                     "'", p.line, p.col);
  return ExprAst(std::move(root));
}

// ---------------------------------------------------------------------------

namespace {

double eval_node(const Node* n, const Bindings& b) {
  switch (n->kind) {
    case Kind::Number: return n->number;
    case Kind::Var:
      switch (n->var) {
        case 'x': return b.x;
        case 'y': return b.y;
        case 'z': return b.z;
        default: return b.r;
      }
    case Kind::Neg: return -eval_node(n->a.get(), b);
    case Kind::Add: return eval_node(n->a.get(), b) + eval_node(n->b.get(), b);
    case Kind::Sub: return eval_node(n->a.get(), b) - eval_node(n->b.get(), b);
    case Kind::Mul: return eval_node(n->a.get(), b) * eval_node(n->b.get(), b);
    case Kind::Div: {
      double den = eval_node(n->b.get(), b);
      if (den == 0.0) throw EvalError("division by zero");
      return eval_node(n->a.get(), b) / den;
    }
    case Kind::Pow: {
      double base = eval_node(n->a.get(), b);
      double v = std::pow(base, n->number);
      if (!std::isfinite(v))
        throw EvalError("power domain violation: base " + fmt_number(base) +
                        ", exponent " + fmt_number(n->number));
      return v;
    }
    case Kind::Call: {
      double arg = eval_node(n->a.get(), b);
      switch (n->fn) {
        case Fn::Sin: return std::sin(arg);
        case Fn::Cos: return std::cos(arg);
        case Fn::Exp: return std::exp(arg);
        case Fn::Sqrt:
          if (arg < 0.0)
            throw EvalError("sqrt of negative value " + fmt_number(arg));
          return std::sqrt(arg);
        case Fn::Abs: return std::fabs(arg);
      }
      throw EvalError("corrupt call node");
    }
  }
  throw EvalError("corrupt expression node");
}

void print_node(const Node* n, std::string& out) {
  switch (n->kind) {
    case Kind::Number: out += fmt_number(n->number); return;
    case Kind::Var: out += n->var; return;
    case Kind::Neg:
      out += "-(";
      print_node(n->a.get(), out);
      out += ')';
      return;
    case Kind::Add:
    case Kind::Sub:
    case Kind::Mul:
    case Kind::Div: {
      char op = n->kind == Kind::Add ? '+'
              : n->kind == Kind::Sub ? '-'
              : n->kind == Kind::Mul ? '*' : '/';
      out += '(';
      print_node(n->a.get(), out);
      out += op;
      print_node(n->b.get(), out);
      out += ')';
      return;
    }
    case Kind::Pow: {
      // A base printing with a leading '-' must be parenthesized: '^' binds
      // tighter than unary minus, so "-2^3" would reparse as -(2^3).
      const Node* base = n->a.get();
      bool wrap = base->kind == Kind::Neg ||
                  (base->kind == Kind::Number && std::signbit(base->number));
      out += '(';
      if (wrap) out += '(';
      print_node(base, out);
      if (wrap) out += ')';
      out += '^';
      out += fmt_number(n->number);
      out += ')';
      return;
    }
    case Kind::Call:
      out += fn_name(n->fn);
      out += '(';
      print_node(n->a.get(), out);
      out += ')';
      return;
  }
}

bool equal_node(const Node* a, const Node* b) {
  if (!a || !b) return a == b;
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case Kind::Number: return a->number == b->number;
    case Kind::Var: return a->var == b->var;
    case Kind::Pow:
      return a->number == b->number && equal_node(a->a.get(), b->a.get());
    case Kind::Call:
      return a->fn == b->fn && equal_node(a->a.get(), b->a.get());
    case Kind::Neg: return equal_node(a->a.get(), b->a.get());
    default:
      return equal_node(a->a.get(), b->a.get()) &&
             equal_node(a->b.get(), b->b.get());
  }
}

}  // namespace

double ExprAst::eval(const Bindings& b) const {
  if (!root_) throw EvalError("evaluating empty expression");
  return eval_node(root_.get(), b);
}

std::string ExprAst::pretty() const {
  if (!root_) return "";
  std::string out;
  print_node(root_.get(), out);
  return out;
}

bool ExprAst::structurally_equal(const ExprAst& o) const {
  return equal_node(root_.get(), o.root_.get());
}

}  // namespace fieldmech
