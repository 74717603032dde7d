#include <doctest.h>

#include <bit>
#include <cmath>
#include <cstdint>
#include <random>
#include <string>

#include "fieldmech/expr.hpp"

using namespace fieldmech;

namespace {

// Independent tree walk with the same contract as the library evaluator:
// division checks the denominator before touching the numerator, powers
// reject non-finite results, sqrt rejects negative arguments, and the other
// calls pass through untouched.
double walk(const ExprAst::Node* n, const Bindings& b) {
  using K = ExprAst::Node::Kind;
  using F = ExprAst::Node::Fn;
  switch (n->kind) {
    case K::Number: return n->number;
    case K::Var:
      switch (n->var) {
        case 'x': return b.x;
        case 'y': return b.y;
        case 'z': return b.z;
        default: return b.r;
      }
    case K::Neg: return -walk(n->a.get(), b);
    case K::Add: {
      double l = walk(n->a.get(), b);
      return l + walk(n->b.get(), b);
    }
    case K::Sub: {
      double l = walk(n->a.get(), b);
      return l - walk(n->b.get(), b);
    }
    case K::Mul: {
      double l = walk(n->a.get(), b);
      return l * walk(n->b.get(), b);
    }
    case K::Div: {
      double den = walk(n->b.get(), b);
      if (den == 0.0) throw EvalError("division by zero");
      return walk(n->a.get(), b) / den;
    }
    case K::Pow: {
      double base = walk(n->a.get(), b);
      double v = std::pow(base, n->number);
      if (!std::isfinite(v)) throw EvalError("power domain violation");
      return v;
    }
    case K::Call: {
      double arg = walk(n->a.get(), b);
      switch (n->fn) {
        case F::Sin: return std::sin(arg);
        case F::Cos: return std::cos(arg);
        case F::Exp: return std::exp(arg);
        case F::Sqrt:
          if (arg < 0.0) throw EvalError("sqrt of negative value");
          return std::sqrt(arg);
        case F::Abs: return std::fabs(arg);
      }
      throw EvalError("corrupt call node");
    }
  }
  throw EvalError("corrupt expression node");
}

ExprAst random_ast(std::mt19937_64& rng, int depth) {
  auto pick = [&](int n) { return static_cast<int>(rng() % n); };
  if (depth <= 0 || pick(4) == 0) {
    if (pick(2) == 0) {
      static const double numbers[] = {0.0, 1.0, -2.0, 0.5, 3.25, 7.0, -0.125};
      return ExprAst::number(numbers[pick(7)]);
    }
    return ExprAst::variable("xyzr"[pick(4)]);
  }
  switch (pick(8)) {
    case 0: return ExprAst::unary_minus(random_ast(rng, depth - 1));
    case 1:
      return ExprAst::binary('+', random_ast(rng, depth - 1),
                             random_ast(rng, depth - 1));
    case 2:
      return ExprAst::binary('-', random_ast(rng, depth - 1),
                             random_ast(rng, depth - 1));
    case 3:
      return ExprAst::binary('*', random_ast(rng, depth - 1),
                             random_ast(rng, depth - 1));
    case 4:
      return ExprAst::binary('/', random_ast(rng, depth - 1),
                             random_ast(rng, depth - 1));
    case 5: {
      static const double exps[] = {-2.0, -1.0, 0.5, 1.0, 2.0, 3.0};
      return ExprAst::power(random_ast(rng, depth - 1),
                            exps[pick(6)]);
    }
    default: {
      static const char* fns[] = {"sin", "cos", "exp", "sqrt", "abs"};
      return ExprAst::call(fns[pick(5)], random_ast(rng, depth - 1));
    }
  }
}

}  // namespace

TEST_CASE("worked evaluation examples") {
  CHECK(ExprAst::parse("0.5*r^2").eval({0, 0, 0, 2.0}) == 2.0);
  CHECK(ExprAst::parse("sin(x) + cos(x)^2").eval({0, 0, 0, 0}) == 1.0);
  Vec3 p{3.0, 4.0, 0.0};
  CHECK(ExprAst::parse("r").eval_at(p) == 5.0);
}

TEST_CASE("precedence and associativity") {
  Bindings b{2.0, 0, 0, 0};
  CHECK(ExprAst::parse("2+3*4^2").eval(b) == 50.0);
  CHECK(ExprAst::parse("2*3^2").eval(b) == 18.0);
  CHECK(ExprAst::parse("-x^2").eval(b) == -4.0);    // ^ binds under unary -
  CHECK(ExprAst::parse("(-x)^2").eval(b) == 4.0);
  CHECK(ExprAst::parse("2-3-4").eval(b) == -5.0);   // left associative
  CHECK(ExprAst::parse("12/2/3").eval(b) == 2.0);
  CHECK(ExprAst::parse("2\n\t + 3").eval(b) == 5.0);  // whitespace incl. newline
}

TEST_CASE("parse errors carry positions") {
  try {
    ExprAst::parse("0.5*k^2");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.col == 5);
    CHECK(std::string(e.what()).find("unknown identifier 'k'") !=
          std::string::npos);
  }

  CHECK_THROWS_AS(ExprAst::parse("x^y"), ParseError);   // exponent not const
  CHECK_THROWS_AS(ExprAst::parse("2^2^2"), ParseError); // ^ does not chain
  CHECK_THROWS_AS(ExprAst::parse("sin x"), ParseError);
  CHECK_THROWS_AS(ExprAst::parse("foo(x)"), ParseError);
  CHECK_THROWS_AS(ExprAst::parse("(x"), ParseError);
  CHECK_THROWS_AS(ExprAst::parse("x +"), ParseError);
  CHECK_THROWS_AS(ExprAst::parse(""), ParseError);
  CHECK_THROWS_AS(ExprAst::parse("x 3"), ParseError);   // trailing input

  // line/col seeding for embedded text
  try {
    ExprAst::parse("q", 7, 12);
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 7);
    CHECK(e.col == 12);
  }
}

TEST_CASE("evaluation errors are typed, not silent NaNs") {
  CHECK_THROWS_AS(ExprAst::parse("1/x").eval({0, 0, 0, 0}), EvalError);
  CHECK_THROWS_AS(ExprAst::parse("sqrt(x)").eval({-1, 0, 0, 0}), EvalError);
  CHECK_THROWS_AS(ExprAst::parse("x^0.5").eval({-2, 0, 0, 0}), EvalError);
  CHECK_THROWS_AS(ExprAst::parse("x^-1").eval({0, 0, 0, 0}), EvalError);
  CHECK_THROWS_AS(ExprAst().eval({}), EvalError);  // empty expression
  // exp overflow is legal (IEEE inf), not an error
  CHECK(ExprAst::parse("exp(x)").eval({1e4, 0, 0, 0}) ==
        std::numeric_limits<double>::infinity());
}

TEST_CASE("pretty output reparses to a structurally equal tree") {
  const char* cases[] = {
      "0.5*r^2", "sin(x)+cos(y)^2*exp(-z)", "-(x+y)/(z-4)",
      "abs(x)-sqrt(r)+1.25", "2+3*4^2", "-x^2",
  };
  for (const char* c : cases) {
    ExprAst a = ExprAst::parse(c);
    ExprAst b = ExprAst::parse(a.pretty());
    CHECK(a.structurally_equal(b));
    CHECK(b.structurally_equal(a));
  }

  std::mt19937_64 rng(101);
  for (int i = 0; i < 200; ++i) {
    ExprAst a = random_ast(rng, 5);
    ExprAst b = ExprAst::parse(a.pretty());
    CHECK(a.structurally_equal(b));
  }

  // structural inequality is detected
  CHECK(!ExprAst::parse("x+y").structurally_equal(ExprAst::parse("y+x")));
  CHECK(!ExprAst::parse("x").structurally_equal(ExprAst::parse("2")));
}

TEST_CASE("copying is deep and preserves structure") {
  ExprAst a = ExprAst::parse("sin(x)*r^2 - 3/y");
  ExprAst b = a;
  CHECK(a.structurally_equal(b));
  CHECK(b.root() != a.root());
  ExprAst c;
  c = a;
  CHECK(c.structurally_equal(a));
}

TEST_CASE("library evaluator agrees bit for bit with an independent walker") {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> coord(-3.0, 3.0);
  int evaluated = 0, thrown = 0;
  for (int i = 0; i < 1000; ++i) {
    ExprAst ast = random_ast(rng, 6);
    for (int rep = 0; rep < 3; ++rep) {
      Vec3 p{coord(rng), coord(rng), coord(rng)};
      Bindings b = Bindings::at(p);
      bool lib_threw = false, mine_threw = false;
      double lib = 0.0, mine = 0.0;
      try {
        lib = ast.eval(b);
      } catch (const EvalError&) {
        lib_threw = true;
      }
      try {
        mine = walk(ast.root(), b);
      } catch (const EvalError&) {
        mine_threw = true;
      }
      CHECK(lib_threw == mine_threw);
      if (!lib_threw && !mine_threw) {
        CHECK(std::bit_cast<std::uint64_t>(lib) ==
              std::bit_cast<std::uint64_t>(mine));
        ++evaluated;
      } else {
        ++thrown;
      }
    }
  }
  // The generator must exercise both paths to mean anything.
  CHECK(evaluated > 500);
  CHECK(thrown > 20);
}

TEST_CASE("parser survives fuzzed input") {
  std::mt19937_64 rng(777);
  const std::string alphabet = "xyzr0123456789.+-*/^()sincoexpqrtab _,";
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<size_t> ch(0, alphabet.size() - 1);
  int parsed = 0;
  for (int i = 0; i < 20000; ++i) {
    std::string s;
    int n = len(rng);
    for (int j = 0; j < n; ++j) s += alphabet[ch(rng)];
    try {
      ExprAst a = ExprAst::parse(s);
      ++parsed;
      try {
        a.eval({1.0, -0.5, 0.25, 1.25});
      } catch (const EvalError&) {
      }
    } catch (const ParseError&) {
    }
  }
  CHECK(parsed > 100);  // the alphabet is dense enough to hit valid text
}
