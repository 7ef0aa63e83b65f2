#include "expr.hpp"

#include <cmath>
#include <cstdlib>
#include <vector>

namespace hyko {
namespace expr {

namespace {

struct Token {
  enum Kind { number, ident, plus, minus, star, slash, caret, lparen, rparen, end } kind;
  double value = 0.0;
  std::string text;
  int line = 1, column = 1;
};

class Lexer {
 public:
  explicit Lexer(const std::string& src) : src_(src) {}

  Token next() {
    skip_ws();
    Token t;
    t.line = line_;
    t.column = column_;
    if (pos_ >= src_.size()) {
      t.kind = Token::end;
      return t;
    }
    char c = src_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') {
      const char* start = src_.c_str() + pos_;
      char* after = nullptr;
      double v = std::strtod(start, &after);
      if (after == start) fail("malformed number", t.line, t.column);
      size_t len = after - start;
      advance(len);
      t.kind = Token::number;
      t.value = v;
      return t;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = pos_;
      while (j < src_.size() &&
             (std::isalnum(static_cast<unsigned char>(src_[j])) || src_[j] == '_'))
        ++j;
      t.kind = Token::ident;
      t.text = src_.substr(pos_, j - pos_);
      advance(j - pos_);
      return t;
    }
    switch (c) {
      case '+': t.kind = Token::plus; break;
      case '-': t.kind = Token::minus; break;
      case '*': t.kind = Token::star; break;
      case '/': t.kind = Token::slash; break;
      case '^': t.kind = Token::caret; break;
      case '(': t.kind = Token::lparen; break;
      case ')': t.kind = Token::rparen; break;
      default:
        fail(std::string("unexpected character '") + c + "'", t.line, t.column);
    }
    advance(1);
    return t;
  }

  [[noreturn]] static void fail(const std::string& msg, int line, int column) {
    throw ParseError(msg + " at line " + std::to_string(line) + ", column " +
                         std::to_string(column),
                     line, column);
  }

 private:
  void skip_ws() {
    while (pos_ < src_.size()) {
      char c = src_[pos_];
      if (c == '\n') {
        ++line_;
        column_ = 1;
        ++pos_;
      } else if (c == ' ' || c == '\t' || c == '\r') {
        advance(1);
      } else {
        break;
      }
    }
  }
  void advance(size_t n) {
    pos_ += n;
    column_ += static_cast<int>(n);
  }

  const std::string& src_;
  size_t pos_ = 0;
  int line_ = 1, column_ = 1;
};

Expr make(NodeKind k, Expr lhs = nullptr, Expr rhs = nullptr) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return n;
}

class Parser {
 public:
  explicit Parser(const std::string& src) : lexer_(src) { shift(); }

  Expr parse_all() {
    Expr e = parse_expr();
    if (tok_.kind != Token::end)
      Lexer::fail("unexpected trailing input", tok_.line, tok_.column);
    return e;
  }

 private:
  void shift() { tok_ = lexer_.next(); }

  Expr parse_expr() {
    Expr lhs = parse_term();
    while (tok_.kind == Token::plus || tok_.kind == Token::minus) {
      NodeKind k = tok_.kind == Token::plus ? NodeKind::add : NodeKind::sub;
      shift();
      lhs = make(k, lhs, parse_term());
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (tok_.kind == Token::star || tok_.kind == Token::slash) {
      NodeKind k = tok_.kind == Token::star ? NodeKind::mul : NodeKind::div;
      shift();
      lhs = make(k, lhs, parse_unary());
    }
    return lhs;
  }

  Expr parse_unary() {
    if (tok_.kind == Token::minus) {
      shift();
      return make(NodeKind::unary_minus, parse_unary());
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_atom();
    if (tok_.kind == Token::caret) {
      shift();
      return make(NodeKind::pow, base, parse_unary());  // right-associative
    }
    return base;
  }

  Expr parse_atom() {
    if (tok_.kind == Token::number) {
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::number;
      n->value = tok_.value;
      shift();
      return n;
    }
    if (tok_.kind == Token::ident) {
      std::string name = tok_.text;
      int line = tok_.line, column = tok_.column;
      shift();
      if (name == "q") return make(NodeKind::var_q);
      if (name == "p") return make(NodeKind::var_p);
      Func f;
      if (name == "sin") f = Func::sin;
      else if (name == "cos") f = Func::cos;
      else if (name == "exp") f = Func::exp;
      else if (name == "sqrt") f = Func::sqrt;
      else if (name == "abs") f = Func::abs;
      else Lexer::fail("unknown identifier '" + name + "'", line, column);
      expect(Token::lparen, "'('");
      Expr arg = parse_expr();
      expect(Token::rparen, "')'");
      auto n = std::make_shared<Node>();
      n->kind = NodeKind::call;
      n->func = f;
      n->lhs = arg;
      return n;
    }
    if (tok_.kind == Token::lparen) {
      shift();
      Expr e = parse_expr();
      expect(Token::rparen, "')'");
      return e;
    }
    Lexer::fail("expected a number, variable, function, or '('", tok_.line, tok_.column);
  }

  void expect(Token::Kind k, const std::string& what) {
    if (tok_.kind != k) Lexer::fail("expected " + what, tok_.line, tok_.column);
    shift();
  }

  Lexer lexer_;
  Token tok_;
};

int precedence(NodeKind k) {
  switch (k) {
    case NodeKind::add:
    case NodeKind::sub: return 1;
    case NodeKind::mul:
    case NodeKind::div: return 2;
    case NodeKind::unary_minus: return 3;
    case NodeKind::pow: return 4;
    default: return 5;
  }
}

void print_rec(const Expr& e, std::string& out, int parent_prec, bool rhs_of_parent) {
  int prec = precedence(e->kind);
  bool parens = prec < parent_prec || (prec == parent_prec && rhs_of_parent);
  switch (e->kind) {
    case NodeKind::number: {
      char buf[40];
      std::snprintf(buf, sizeof buf, "%.17g", e->value);
      out += buf;
      return;
    }
    case NodeKind::var_q: out += 'q'; return;
    case NodeKind::var_p: out += 'p'; return;
    case NodeKind::unary_minus:
      if (parens) out += '(';
      out += '-';
      print_rec(e->lhs, out, prec, true);
      if (parens) out += ')';
      return;
    case NodeKind::call: {
      static const char* names[] = {"sin", "cos", "exp", "sqrt", "abs"};
      out += names[static_cast<int>(e->func)];
      out += '(';
      print_rec(e->lhs, out, 0, false);
      out += ')';
      return;
    }
    default: {
      const char* op = e->kind == NodeKind::add   ? "+"
                       : e->kind == NodeKind::sub ? "-"
                       : e->kind == NodeKind::mul ? "*"
                       : e->kind == NodeKind::div ? "/"
                                                  : "^";
      if (parens) out += '(';
      // '^' is right-associative: parenthesize an operator lhs of equal precedence
      bool lhs_tight = e->kind == NodeKind::pow;
      print_rec(e->lhs, out, prec, lhs_tight);
      out += op;
      print_rec(e->rhs, out, prec, e->kind != NodeKind::pow);
      if (parens) out += ')';
      return;
    }
  }
}

[[noreturn]] void eval_fail(const std::string& what, double q, double p) {
  char buf[128];
  std::snprintf(buf, sizeof buf, "%s at (q=%g, p=%g)", what.c_str(), q, p);
  throw EvalError(buf, q, p);
}

double apply_pow(double base, double exponent, double q, double p) {
  if (base < 0.0 && exponent != std::floor(exponent))
    eval_fail("negative base with non-integer exponent", q, p);
  return std::pow(base, exponent);
}

double apply_func(Func f, double x, double q, double p) {
  switch (f) {
    case Func::sin: return std::sin(x);
    case Func::cos: return std::cos(x);
    case Func::exp: return std::exp(x);
    case Func::sqrt:
      if (x < 0.0) eval_fail("sqrt of a negative number", q, p);
      return std::sqrt(x);
    case Func::abs: return std::fabs(x);
  }
  eval_fail("unknown function", q, p);
}

// A flat postfix program: cheaper than a pointer-chasing walk over 4k+ points.
struct Instr {
  NodeKind op;
  double value;
  Func func;
};

void compile(const Expr& e, std::vector<Instr>& prog) {
  switch (e->kind) {
    case NodeKind::number:
    case NodeKind::var_q:
    case NodeKind::var_p:
      prog.push_back({e->kind, e->value, Func::sin});
      return;
    case NodeKind::unary_minus:
    case NodeKind::call:
      compile(e->lhs, prog);
      prog.push_back({e->kind, 0.0, e->func});
      return;
    default:
      compile(e->lhs, prog);
      compile(e->rhs, prog);
      prog.push_back({e->kind, 0.0, Func::sin});
      return;
  }
}

double run_program(const std::vector<Instr>& prog, std::vector<double>& stack,
                   double q, double p) {
  stack.clear();
  for (const auto& in : prog) {
    switch (in.op) {
      case NodeKind::number: stack.push_back(in.value); break;
      case NodeKind::var_q: stack.push_back(q); break;
      case NodeKind::var_p: stack.push_back(p); break;
      case NodeKind::unary_minus: stack.back() = -stack.back(); break;
      case NodeKind::call: stack.back() = apply_func(in.func, stack.back(), q, p); break;
      default: {
        double b = stack.back();
        stack.pop_back();
        double& a = stack.back();
        switch (in.op) {
          case NodeKind::add: a += b; break;
          case NodeKind::sub: a -= b; break;
          case NodeKind::mul: a *= b; break;
          case NodeKind::div:
            if (b == 0.0) eval_fail("division by zero", q, p);
            a /= b;
            break;
          case NodeKind::pow: a = apply_pow(a, b, q, p); break;
          default: eval_fail("corrupt program", q, p);
        }
      }
    }
  }
  return stack.back();
}

}  // namespace

Expr parse(const std::string& text) {
  if (text.size() > 64 * 1024) throw ParseError("expression exceeds 64 KiB", 1, 1);
  return Parser(text).parse_all();
}

std::string print(const Expr& e) {
  std::string out;
  print_rec(e, out, 0, false);
  return out;
}

bool equal(const Expr& a, const Expr& b) {
  if (a->kind != b->kind) return false;
  switch (a->kind) {
    case NodeKind::number: return a->value == b->value;
    case NodeKind::var_q:
    case NodeKind::var_p: return true;
    case NodeKind::unary_minus: return equal(a->lhs, b->lhs);
    case NodeKind::call: return a->func == b->func && equal(a->lhs, b->lhs);
    default: return equal(a->lhs, b->lhs) && equal(a->rhs, b->rhs);
  }
}

double evaluate(const Expr& e, double q, double p) {
  switch (e->kind) {
    case NodeKind::number: return e->value;
    case NodeKind::var_q: return q;
    case NodeKind::var_p: return p;
    case NodeKind::unary_minus: return -evaluate(e->lhs, q, p);
    case NodeKind::add: return evaluate(e->lhs, q, p) + evaluate(e->rhs, q, p);
    case NodeKind::sub: return evaluate(e->lhs, q, p) - evaluate(e->rhs, q, p);
    case NodeKind::mul: return evaluate(e->lhs, q, p) * evaluate(e->rhs, q, p);
    case NodeKind::div: {
      double b = evaluate(e->rhs, q, p);
      if (b == 0.0) eval_fail("division by zero", q, p);
      return evaluate(e->lhs, q, p) / b;
    }
    case NodeKind::pow:
      return apply_pow(evaluate(e->lhs, q, p), evaluate(e->rhs, q, p), q, p);
    case NodeKind::call: return apply_func(e->func, evaluate(e->lhs, q, p), q, p);
  }
  eval_fail("corrupt expression", q, p);
}

RVec evaluate_on_grid(const Expr& e, const PhaseSpaceGrid& grid) {
  std::vector<Instr> prog;
  compile(e, prog);
  std::vector<double> stack;
  stack.reserve(16);
  RVec out(grid.size());
  for (int i = 0; i < grid.size(); ++i) {
    double q = grid.q_of(i), p = grid.p_of(i);
    double v = run_program(prog, stack, q, p);
    if (!std::isfinite(v)) eval_fail("non-finite value", q, p);
    out(i) = v;
  }
  return out;
}

}  // namespace expr
}  // namespace hyko
