#include <doctest.h>

#include <cmath>
#include <random>

#include "expr.hpp"
#include "presets.hpp"

using namespace hyko;
using namespace hyko::expr;

TEST_CASE("parse builds the expected tree") {
  Expr e = parse("(q^2 + p^2)/2");
  REQUIRE(e->kind == NodeKind::div);
  REQUIRE(e->lhs->kind == NodeKind::add);
  CHECK(e->lhs->lhs->kind == NodeKind::pow);
  CHECK(e->lhs->rhs->kind == NodeKind::pow);
  CHECK(e->rhs->kind == NodeKind::number);
  CHECK(e->rhs->value == 2.0);
}

TEST_CASE("unknown identifiers are named in the error") {
  try {
    parse("0.5*lambda*q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("lambda") != std::string::npos);
  }
}

TEST_CASE("syntax errors carry positions") {
  try {
    parse("sin(q");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line == 1);
    CHECK(e.column == 6);
  }
}

TEST_CASE("evaluation basics") {
  auto g = build_grid(-1, 1, -3, 3, 4, 4, Boundary::periodic);
  CHECK(evaluate_on_grid(parse("1"), g).minCoeff() == 1.0);
  CHECK(evaluate(parse("q*p"), 0.5, -2.0) == doctest::Approx(-1.0));
  CHECK(evaluate(parse("2^3^2"), 0, 0) == doctest::Approx(512.0));
  CHECK(evaluate(parse("-q^2"), 3.0, 0) == doctest::Approx(-9.0));
  CHECK(evaluate(parse("2^-2"), 0, 0) == doctest::Approx(0.25));
  CHECK(evaluate(parse("abs(-3)+sqrt(4)"), 0, 0) == doctest::Approx(5.0));
}

TEST_CASE("harmonic preset table matches the expression") {
  auto g = build_grid(-2, 2, -2, 2, 16, 16, Boundary::periodic);
  RVec from_expr = evaluate_on_grid(parse("(q^2+p^2)/2"), g);
  RVec table = preset_energy_on_grid(ClassicalPreset::harmonic, g);
  CHECK((from_expr - table).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("domain errors are structured") {
  CHECK_THROWS_AS(evaluate(parse("1/(q-1)"), 1.0, 0.0), EvalError);
  CHECK_THROWS_AS(evaluate(parse("sqrt(q)"), -2.0, 0.0), EvalError);
  CHECK_THROWS_AS(evaluate(parse("(-2)^0.5"), 0.0, 0.0), EvalError);
  auto g = build_grid(0, 2, 0, 2, 4, 4, Boundary::periodic);
  CHECK_THROWS_AS(evaluate_on_grid(parse("1/(q-1)"), g), EvalError);
}

namespace {

Expr random_ast(std::mt19937_64& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_real_distribution<double> num(0.1, 4.0);
  auto node = [&](NodeKind k, Expr lhs, Expr rhs) {
    auto n = std::make_shared<Node>();
    n->kind = k;
    n->lhs = std::move(lhs);
    n->rhs = std::move(rhs);
    return Expr(n);
  };
  switch (pick(rng)) {
    case 0: {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::number;
      n->value = num(rng);
      return n;
    }
    case 1: return node(NodeKind::var_q, nullptr, nullptr);
    case 2: return node(NodeKind::var_p, nullptr, nullptr);
    case 3: return node(NodeKind::add, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 4: return node(NodeKind::sub, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 5: return node(NodeKind::mul, random_ast(rng, depth - 1), random_ast(rng, depth - 1));
    case 6: return node(NodeKind::unary_minus, random_ast(rng, depth - 1), nullptr);
    case 7: {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::call;
      n->func = static_cast<Func>(std::uniform_int_distribution<int>(0, 2)(rng));  // sin/cos/exp
      n->lhs = random_ast(rng, depth - 1);
      return Expr(n);
    }
    case 8: {
      // a power with a fixed small integer exponent stays total
      auto exp_node = std::make_shared<Node>();
      exp_node->kind = NodeKind::number;
      exp_node->value = std::uniform_int_distribution<int>(1, 3)(rng);
      return node(NodeKind::pow, random_ast(rng, depth - 1), exp_node);
    }
    default:
      return node(NodeKind::div, random_ast(rng, depth - 1), [&] {
        auto n = std::make_shared<Node>();
        n->kind = NodeKind::number;
        n->value = num(rng) + 0.5;
        return Expr(n);
      }());
  }
}

}  // namespace

TEST_CASE("print/parse round-trip on random trees") {
  std::mt19937_64 rng(20240817);
  for (int i = 0; i < 1000; ++i) {
    Expr e = random_ast(rng, 8);
    std::string s = print(e);
    Expr back = parse(s);
    CHECK(equal(e, back));
    // printing is idempotent through a second round
    CHECK(print(back) == s);
  }
}

TEST_CASE("grid evaluator agrees with the tree-walking reference") {
  std::mt19937_64 rng(77);
  auto g = build_grid(-1.5, 1.5, -1.5, 1.5, 6, 6, Boundary::periodic);
  int checked = 0;
  for (int i = 0; i < 1000; ++i) {
    Expr e = random_ast(rng, 6);
    RVec grid_values;
    try {
      grid_values = evaluate_on_grid(e, g);
    } catch (const EvalError&) {
      continue;  // tree hit a domain error somewhere on the grid
    }
    ++checked;
    for (int j = 0; j < g.size(); j += 7) {
      double ref = evaluate(e, g.q_of(j), g.p_of(j));
      double scale = std::max(1.0, std::abs(ref));
      CHECK(std::abs(grid_values(j) - ref) / scale < 1e-12);
    }
  }
  CHECK(checked > 500);
}
