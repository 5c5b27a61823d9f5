#include "ellx/expr.hpp"

#include <cctype>
#include <cmath>
#include <map>
#include <sstream>
#include <utility>
#include <vector>

namespace ellx {
namespace detail {

enum class Op {
  constant,
  variable,
  add,
  sub,
  mul,
  div,
  pow,
  neg,
  sin,
  cos,
  tan,
  asin,
  acos,
  atan,
  atan2,
  sinh,
  cosh,
  tanh,
  exp,
  log,
  sqrt,
  abs,
  min,
  max,
};

struct ExprNode {
  Op op = Op::constant;
  double value = 0.0;  // constant
  int axis = 0;        // variable
  NodePtr a, b;        // operands
};

namespace {

NodePtr make_const(double v) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::constant;
  n->value = v;
  return n;
}

NodePtr make_var(int axis) {
  auto n = std::make_shared<ExprNode>();
  n->op = Op::variable;
  n->axis = axis;
  return n;
}

NodePtr make_node(Op op, NodePtr a, NodePtr b = nullptr) {
  auto n = std::make_shared<ExprNode>();
  n->op = op;
  n->a = std::move(a);
  n->b = std::move(b);
  return n;
}

bool is_const(const NodePtr& n, double v) {
  return n->op == Op::constant && n->value == v;
}

double fold(Op op, double x, double y);

/// Build with light algebraic simplification; keeps derivative trees small.
NodePtr simplify(Op op, NodePtr a, NodePtr b = nullptr) {
  const bool ac = a && a->op == Op::constant;
  const bool bc = b && b->op == Op::constant;
  if (ac && (b == nullptr || bc)) {
    return make_const(fold(op, a->value, b ? b->value : 0.0));
  }
  switch (op) {
    case Op::add:
      if (is_const(a, 0.0)) return b;
      if (is_const(b, 0.0)) return a;
      break;
    case Op::sub:
      if (is_const(b, 0.0)) return a;
      if (is_const(a, 0.0)) return simplify(Op::neg, b);
      break;
    case Op::mul:
      if (is_const(a, 0.0) || is_const(b, 0.0)) return make_const(0.0);
      if (is_const(a, 1.0)) return b;
      if (is_const(b, 1.0)) return a;
      break;
    case Op::div:
      if (is_const(a, 0.0)) return make_const(0.0);
      if (is_const(b, 1.0)) return a;
      break;
    case Op::pow:
      if (is_const(b, 1.0)) return a;
      if (is_const(b, 0.0)) return make_const(1.0);
      break;
    case Op::neg:
      if (a->op == Op::neg) return a->a;
      break;
    default:
      break;
  }
  return make_node(op, std::move(a), std::move(b));
}

double fold(Op op, double x, double y) {
  switch (op) {
    case Op::add: return x + y;
    case Op::sub: return x - y;
    case Op::mul: return x * y;
    case Op::div: return x / y;
    case Op::pow: return std::pow(x, y);
    case Op::neg: return -x;
    case Op::sin: return std::sin(x);
    case Op::cos: return std::cos(x);
    case Op::tan: return std::tan(x);
    case Op::asin: return std::asin(x);
    case Op::acos: return std::acos(x);
    case Op::atan: return std::atan(x);
    case Op::atan2: return std::atan2(x, y);
    case Op::sinh: return std::sinh(x);
    case Op::cosh: return std::cosh(x);
    case Op::tanh: return std::tanh(x);
    case Op::exp: return std::exp(x);
    case Op::log: return std::log(x);
    case Op::sqrt: return std::sqrt(x);
    case Op::abs: return std::abs(x);
    case Op::min: return std::min(x, y);
    case Op::max: return std::max(x, y);
    case Op::constant:
    case Op::variable:
      break;
  }
  throw Error("expr: cannot fold non-arithmetic node");
}

double eval(const ExprNode& n, std::span<const double> x) {
  switch (n.op) {
    case Op::constant: return n.value;
    case Op::variable: return x[static_cast<std::size_t>(n.axis)];
    case Op::neg: return -eval(*n.a, x);
    case Op::sin: return std::sin(eval(*n.a, x));
    case Op::cos: return std::cos(eval(*n.a, x));
    case Op::tan: return std::tan(eval(*n.a, x));
    case Op::asin: return std::asin(eval(*n.a, x));
    case Op::acos: return std::acos(eval(*n.a, x));
    case Op::atan: return std::atan(eval(*n.a, x));
    case Op::sinh: return std::sinh(eval(*n.a, x));
    case Op::cosh: return std::cosh(eval(*n.a, x));
    case Op::tanh: return std::tanh(eval(*n.a, x));
    case Op::exp: return std::exp(eval(*n.a, x));
    case Op::log: return std::log(eval(*n.a, x));
    case Op::sqrt: return std::sqrt(eval(*n.a, x));
    case Op::abs: return std::abs(eval(*n.a, x));
    case Op::add: return eval(*n.a, x) + eval(*n.b, x);
    case Op::sub: return eval(*n.a, x) - eval(*n.b, x);
    case Op::mul: return eval(*n.a, x) * eval(*n.b, x);
    case Op::div: return eval(*n.a, x) / eval(*n.b, x);
    case Op::pow: return std::pow(eval(*n.a, x), eval(*n.b, x));
    case Op::atan2: return std::atan2(eval(*n.a, x), eval(*n.b, x));
    case Op::min: return std::min(eval(*n.a, x), eval(*n.b, x));
    case Op::max: return std::max(eval(*n.a, x), eval(*n.b, x));
  }
  throw Error("expr: corrupt node");
}

NodePtr diff(const NodePtr& n, int axis);

NodePtr chain(const NodePtr& outer_d, const NodePtr& inner, int axis) {
  return simplify(Op::mul, outer_d, diff(inner, axis));
}

NodePtr diff(const NodePtr& n, int axis) {
  switch (n->op) {
    case Op::constant:
      return make_const(0.0);
    case Op::variable:
      return make_const(n->axis == axis ? 1.0 : 0.0);
    case Op::add:
      return simplify(Op::add, diff(n->a, axis), diff(n->b, axis));
    case Op::sub:
      return simplify(Op::sub, diff(n->a, axis), diff(n->b, axis));
    case Op::neg:
      return simplify(Op::neg, diff(n->a, axis));
    case Op::mul:
      return simplify(Op::add, simplify(Op::mul, diff(n->a, axis), n->b),
                      simplify(Op::mul, n->a, diff(n->b, axis)));
    case Op::div:
      // (a/b)' = (a'b - ab') / b^2
      return simplify(
          Op::div,
          simplify(Op::sub, simplify(Op::mul, diff(n->a, axis), n->b),
                   simplify(Op::mul, n->a, diff(n->b, axis))),
          simplify(Op::mul, n->b, n->b));
    case Op::pow: {
      if (n->b->op == Op::constant) {
        // (a^c)' = c a^(c-1) a'
        const double c = n->b->value;
        return simplify(
            Op::mul, make_const(c),
            simplify(Op::mul, simplify(Op::pow, n->a, make_const(c - 1.0)),
                     diff(n->a, axis)));
      }
      // a^b = exp(b log a): (a^b)' = a^b (b' log a + b a'/a)
      auto self = make_node(Op::pow, n->a, n->b);
      auto t1 = simplify(Op::mul, diff(n->b, axis), simplify(Op::log, n->a));
      auto t2 = simplify(Op::div, simplify(Op::mul, n->b, diff(n->a, axis)),
                         n->a);
      return simplify(Op::mul, self, simplify(Op::add, t1, t2));
    }
    case Op::sin:
      return chain(simplify(Op::cos, n->a), n->a, axis);
    case Op::cos:
      return chain(simplify(Op::neg, simplify(Op::sin, n->a)), n->a, axis);
    case Op::tan: {
      auto c = simplify(Op::cos, n->a);
      return chain(simplify(Op::div, make_const(1.0), simplify(Op::mul, c, c)),
                   n->a, axis);
    }
    case Op::asin: {
      auto one_minus = simplify(Op::sub, make_const(1.0),
                                simplify(Op::mul, n->a, n->a));
      return chain(simplify(Op::div, make_const(1.0),
                            simplify(Op::sqrt, one_minus)),
                   n->a, axis);
    }
    case Op::acos: {
      auto one_minus = simplify(Op::sub, make_const(1.0),
                                simplify(Op::mul, n->a, n->a));
      return chain(simplify(Op::neg,
                            simplify(Op::div, make_const(1.0),
                                     simplify(Op::sqrt, one_minus))),
                   n->a, axis);
    }
    case Op::atan: {
      auto denom = simplify(Op::add, make_const(1.0),
                            simplify(Op::mul, n->a, n->a));
      return chain(simplify(Op::div, make_const(1.0), denom), n->a, axis);
    }
    case Op::atan2: {
      // d atan2(y,x) = (x dy - y dx) / (x^2 + y^2)
      auto num = simplify(Op::sub, simplify(Op::mul, n->b, diff(n->a, axis)),
                          simplify(Op::mul, n->a, diff(n->b, axis)));
      auto den = simplify(Op::add, simplify(Op::mul, n->a, n->a),
                          simplify(Op::mul, n->b, n->b));
      return simplify(Op::div, num, den);
    }
    case Op::sinh:
      return chain(simplify(Op::cosh, n->a), n->a, axis);
    case Op::cosh:
      return chain(simplify(Op::sinh, n->a), n->a, axis);
    case Op::tanh: {
      auto t = simplify(Op::tanh, n->a);
      return chain(simplify(Op::sub, make_const(1.0), simplify(Op::mul, t, t)),
                   n->a, axis);
    }
    case Op::exp:
      return chain(make_node(Op::exp, n->a), n->a, axis);
    case Op::log:
      return simplify(Op::div, diff(n->a, axis), n->a);
    case Op::sqrt: {
      auto self = make_node(Op::sqrt, n->a);
      return simplify(Op::div, diff(n->a, axis),
                      simplify(Op::mul, make_const(2.0), self));
    }
    case Op::abs:
      // sign(a) a' away from zero
      return simplify(Op::mul,
                      simplify(Op::div, n->a, make_node(Op::abs, n->a)),
                      diff(n->a, axis));
    case Op::min:
    case Op::max:
      throw Error("expr: min/max are not differentiable");
  }
  throw Error("expr: corrupt node");
}

NodePtr substitute(const NodePtr& n, int axis, double value) {
  switch (n->op) {
    case Op::constant:
      return n;
    case Op::variable:
      return n->axis == axis ? make_const(value) : n;
    default: {
      NodePtr a = n->a ? substitute(n->a, axis, value) : nullptr;
      NodePtr b = n->b ? substitute(n->b, axis, value) : nullptr;
      return b ? simplify(n->op, a, b) : simplify(n->op, a);
    }
  }
}

const char* fn_name(Op op) {
  switch (op) {
    case Op::sin: return "sin";
    case Op::cos: return "cos";
    case Op::tan: return "tan";
    case Op::asin: return "asin";
    case Op::acos: return "acos";
    case Op::atan: return "atan";
    case Op::atan2: return "atan2";
    case Op::sinh: return "sinh";
    case Op::cosh: return "cosh";
    case Op::tanh: return "tanh";
    case Op::exp: return "exp";
    case Op::log: return "log";
    case Op::sqrt: return "sqrt";
    case Op::abs: return "abs";
    case Op::min: return "min";
    case Op::max: return "max";
    default: return nullptr;
  }
}

void print(const ExprNode& n, std::ostringstream& out) {
  switch (n.op) {
    case Op::constant: {
      out << n.value;
      return;
    }
    case Op::variable:
      out << 'x' << (n.axis + 1);
      return;
    case Op::neg:
      out << "(-";
      print(*n.a, out);
      out << ')';
      return;
    case Op::add:
    case Op::sub:
    case Op::mul:
    case Op::div:
    case Op::pow: {
      const char sym = n.op == Op::add   ? '+'
                       : n.op == Op::sub ? '-'
                       : n.op == Op::mul ? '*'
                       : n.op == Op::div ? '/'
                                         : '^';
      out << '(';
      print(*n.a, out);
      out << sym;
      print(*n.b, out);
      out << ')';
      return;
    }
    default: {
      out << fn_name(n.op) << '(';
      print(*n.a, out);
      if (n.b) {
        out << ',';
        print(*n.b, out);
      }
      out << ')';
      return;
    }
  }
}

// ---------------------------------------------------------------- parser

struct Parser {
  std::string_view src;
  std::size_t pos = 0;
  int dim;

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("expr: " + msg + " at column " + std::to_string(pos + 1) +
                         " in \"" + std::string(src) + "\"",
                     pos + 1);
  }

  void skip_ws() {
    while (pos < src.size() && std::isspace(static_cast<unsigned char>(src[pos]))) ++pos;
  }

  bool eat(char c) {
    skip_ws();
    if (pos < src.size() && src[pos] == c) {
      ++pos;
      return true;
    }
    return false;
  }

  char peek() {
    skip_ws();
    return pos < src.size() ? src[pos] : '\0';
  }

  NodePtr parse_expr() {
    NodePtr lhs = parse_term();
    for (;;) {
      if (eat('+')) {
        lhs = simplify(Op::add, lhs, parse_term());
      } else if (eat('-')) {
        lhs = simplify(Op::sub, lhs, parse_term());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_term() {
    NodePtr lhs = parse_unary();
    for (;;) {
      if (eat('*')) {
        lhs = simplify(Op::mul, lhs, parse_unary());
      } else if (eat('/')) {
        lhs = simplify(Op::div, lhs, parse_unary());
      } else {
        return lhs;
      }
    }
  }

  NodePtr parse_unary() {
    if (eat('-')) return simplify(Op::neg, parse_unary());
    if (eat('+')) return parse_unary();
    return parse_power();
  }

  NodePtr parse_power() {
    NodePtr base = parse_primary();
    if (eat('^')) {
      // right-associative, unary binds tighter on the exponent
      return simplify(Op::pow, base, parse_unary());
    }
    return base;
  }

  NodePtr parse_primary() {
    skip_ws();
    if (pos >= src.size()) fail("unexpected end of expression");
    const char c = src[pos];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return parse_number();
    if (c == '(') {
      ++pos;
      NodePtr inner = parse_expr();
      if (!eat(')')) fail("expected ')'");
      return inner;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') return parse_ident();
    fail(std::string("unexpected character '") + c + "'");
  }

  NodePtr parse_number() {
    const char* begin = src.data() + pos;
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin) fail("invalid number");
    pos += static_cast<std::size_t>(end - begin);
    return make_const(v);
  }

  NodePtr parse_ident() {
    const std::size_t start = pos;
    while (pos < src.size() &&
           (std::isalnum(static_cast<unsigned char>(src[pos])) || src[pos] == '_')) {
      ++pos;
    }
    const std::string name(src.substr(start, pos - start));
    if (name == "pi") return make_const(M_PI);
    if (name == "e") return make_const(M_E);
    if (name.size() >= 2 && name[0] == 'x') {
      bool digits = true;
      for (std::size_t i = 1; i < name.size(); ++i) {
        digits = digits && std::isdigit(static_cast<unsigned char>(name[i]));
      }
      if (digits) {
        const int axis = std::stoi(name.substr(1)) - 1;
        if (axis < 0 || axis >= dim) {
          pos = start;
          fail("variable " + name + " out of range for dimension " +
               std::to_string(dim));
        }
        return make_var(axis);
      }
    }
    static const std::map<std::string, std::pair<Op, int>> fns = {
        {"sin", {Op::sin, 1}},   {"cos", {Op::cos, 1}},
        {"tan", {Op::tan, 1}},   {"asin", {Op::asin, 1}},
        {"acos", {Op::acos, 1}}, {"atan", {Op::atan, 1}},
        {"atan2", {Op::atan2, 2}}, {"sinh", {Op::sinh, 1}},
        {"cosh", {Op::cosh, 1}}, {"tanh", {Op::tanh, 1}},
        {"exp", {Op::exp, 1}},   {"log", {Op::log, 1}},
        {"sqrt", {Op::sqrt, 1}}, {"abs", {Op::abs, 1}},
        {"min", {Op::min, 2}},   {"max", {Op::max, 2}},
        {"pow", {Op::pow, 2}},
    };
    const auto it = fns.find(name);
    if (it == fns.end()) {
      pos = start;
      fail("unknown identifier '" + name + "'");
    }
    if (!eat('(')) fail("expected '(' after " + name);
    NodePtr a = parse_expr();
    NodePtr b;
    if (it->second.second == 2) {
      if (!eat(',')) fail("expected ',' in " + name + "(...)");
      b = parse_expr();
    }
    if (!eat(')')) fail("expected ')'");
    return b ? simplify(it->second.first, a, b) : simplify(it->second.first, a);
  }
};

}  // namespace
}  // namespace detail

using detail::NodePtr;

Expr::Expr() : node_(detail::make_const(0.0)), dim_(0) {}

Expr::Expr(NodePtr node, int dim) : node_(std::move(node)), dim_(dim) {}

Expr Expr::parse(std::string_view src, int dimension) {
  if (dimension < 0) throw Error("expr: negative dimension");
  detail::Parser p{src, 0, dimension};
  NodePtr root = p.parse_expr();
  p.skip_ws();
  if (p.pos != src.size()) p.fail("trailing input");
  return Expr(std::move(root), dimension);
}

Expr Expr::constant(double value) { return Expr(detail::make_const(value), 0); }

Expr Expr::variable(int axis, int dimension) {
  if (axis < 0 || axis >= dimension) throw Error("expr: variable axis out of range");
  return Expr(detail::make_var(axis), dimension);
}

double Expr::operator()(std::span<const double> x) const {
  return detail::eval(*node_, x);
}

double Expr::operator()(const Vec& x) const {
  return detail::eval(*node_, std::span<const double>(x.data(), static_cast<std::size_t>(x.size())));
}

double Expr::operator()(double x) const {
  return detail::eval(*node_, std::span<const double>(&x, 1));
}

Expr Expr::derivative(int axis) const {
  return Expr(detail::diff(node_, axis), dim_);
}

Expr Expr::substituted(int axis, double value) const {
  return Expr(detail::substitute(node_, axis, value), dim_);
}

std::string Expr::str() const {
  std::ostringstream out;
  out.precision(17);
  detail::print(*node_, out);
  return out.str();
}

namespace {
int join_dim(const Expr& a, const Expr& b) { return std::max(a.dimension(), b.dimension()); }
}  // namespace

Expr operator+(const Expr& a, const Expr& b) {
  return Expr(detail::simplify(detail::Op::add, a.node_, b.node_), join_dim(a, b));
}
Expr operator-(const Expr& a, const Expr& b) {
  return Expr(detail::simplify(detail::Op::sub, a.node_, b.node_), join_dim(a, b));
}
Expr operator*(const Expr& a, const Expr& b) {
  return Expr(detail::simplify(detail::Op::mul, a.node_, b.node_), join_dim(a, b));
}
Expr operator/(const Expr& a, const Expr& b) {
  return Expr(detail::simplify(detail::Op::div, a.node_, b.node_), join_dim(a, b));
}
Expr operator-(const Expr& a) {
  return Expr(detail::simplify(detail::Op::neg, a.node_), a.dimension());
}

}  // namespace ellx
