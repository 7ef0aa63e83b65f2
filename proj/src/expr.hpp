#pragma once

#include <memory>
#include <string>

#include "common.hpp"
#include "grid.hpp"

namespace hyko {
namespace expr {

// Phase-space expressions over the variables q and p.
//
//   expr   := term (('+' | '-') term)*
//   term   := unary (('*' | '/') unary)*
//   unary  := '-' unary | power
//   power  := atom ['^' unary]              (right-associative)
//   atom   := number | 'q' | 'p' | func '(' expr ')' | '(' expr ')'
//   func   := 'sin' | 'cos' | 'exp' | 'sqrt' | 'abs'
//
// '^' with a negative base requires an integer exponent; division by zero,
// sqrt of a negative number, and non-finite results are evaluation errors.

enum class NodeKind { number, var_q, var_p, unary_minus, add, sub, mul, div, pow, call };
enum class Func { sin, cos, exp, sqrt, abs };

struct Node {
  NodeKind kind;
  double value = 0.0;                 // number
  Func func = Func::sin;              // call
  std::shared_ptr<const Node> lhs;    // unary operand / call argument / binary lhs
  std::shared_ptr<const Node> rhs;    // binary rhs
};

using Expr = std::shared_ptr<const Node>;

// Parses UTF-8 text (at most 64 KiB). Throws ParseError with 1-based
// line/column on syntax errors and unknown identifiers.
Expr parse(const std::string& text);

// Prints with minimal parentheses; print(parse(s)) re-parses to an equal AST.
std::string print(const Expr& e);

bool equal(const Expr& a, const Expr& b);

struct EvalError : Error {
  EvalError(std::string msg, double q, double p)
      : Error(ErrorCode::numerical, std::move(msg)), q(q), p(p) {}
  double q, p;
};

// Single-point evaluation by direct tree walk.
double evaluate(const Expr& e, double q, double p);

// Grid evaluation through a compiled postfix program (the fast path; the
// tree walk above is the independent reference). A NaN/Inf anywhere reports
// the offending grid point.
RVec evaluate_on_grid(const Expr& e, const PhaseSpaceGrid& grid);

}  // namespace expr
}  // namespace hyko
