#pragma once

#include <cstddef>
#include <memory>
#include <span>
#include <string>
#include <string_view>

#include "ellx/error.hpp"
#include "ellx/types.hpp"

namespace ellx {

class ParseError : public Error {
 public:
  ParseError(const std::string& what, std::size_t column)
      : Error(what), column_(column) {}
  std::size_t column() const { return column_; }

 private:
  std::size_t column_;
};

namespace detail {
struct ExprNode;
using NodePtr = std::shared_ptr<const ExprNode>;
}  // namespace detail

/// Immutable arithmetic expression over variables x1..xn with exact
/// symbolic differentiation. The language covers +, -, *, /, ^, the
/// functions sin cos tan asin acos atan atan2 sinh cosh tanh exp log
/// sqrt abs pow min max, and the constants pi and e.
class Expr {
 public:
  Expr();  // constant 0

  static Expr parse(std::string_view src, int dimension);
  static Expr constant(double value);
  static Expr variable(int axis, int dimension);

  double operator()(std::span<const double> x) const;
  double operator()(const Vec& x) const;
  double operator()(double x) const;  // 1-d convenience

  /// Exact derivative w.r.t. variable `axis` (0-based).
  Expr derivative(int axis) const;

  /// Fix variable `axis` to a constant; the dimension is unchanged.
  Expr substituted(int axis, double value) const;

  int dimension() const { return dim_; }
  std::string str() const;

  friend Expr operator+(const Expr&, const Expr&);
  friend Expr operator-(const Expr&, const Expr&);
  friend Expr operator*(const Expr&, const Expr&);
  friend Expr operator/(const Expr&, const Expr&);
  friend Expr operator-(const Expr&);

 private:
  Expr(detail::NodePtr node, int dim);

  detail::NodePtr node_;
  int dim_;
};

}  // namespace ellx
