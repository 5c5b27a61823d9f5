#pragma once

#include <functional>
#include <limits>
#include <optional>
#include <vector>

#include "ellx/expr.hpp"
#include "ellx/types.hpp"

namespace ellx {

enum class Regularity { c0_alpha, c2_alpha, c4_alpha };

/// Smooth invertible map R^n -> R^n with first and second derivatives.
/// Expression-backed maps differentiate exactly; closure-backed maps fall
/// back to central differences at spacing fd_h.
class Diffeomorphism {
 public:
  using MapFn = std::function<Vec(const Vec&)>;
  using JacFn = std::function<Mat(const Vec&)>;
  using SecondFn = std::function<std::vector<Mat>(const Vec&)>;

  Diffeomorphism(int n, MapFn fwd, JacFn jac = nullptr, SecondFn second = nullptr);

  static Diffeomorphism identity(int n);
  static Diffeomorphism affine(const Mat& linear, const Vec& shift);
  static Diffeomorphism from_exprs(const std::vector<Expr>& components);
  /// outer(inner(x)) with chain-rule first and second derivatives.
  static Diffeomorphism compose(const Diffeomorphism& outer, const Diffeomorphism& inner);

  int dim() const { return n_; }
  Vec operator()(const Vec& x) const { return fwd_(x); }
  Mat jacobian(const Vec& x) const;
  /// second_derivatives(x)[k] is the Hessian of component k.
  std::vector<Mat> second_derivatives(const Vec& x) const;

  void set_analytic_inverse(MapFn inv) { inv_ = std::move(inv); }
  bool has_analytic_inverse() const { return static_cast<bool>(inv_); }
  /// Analytic inverse when present, Newton iteration otherwise.
  Vec inverse(const Vec& y, const Vec& x_guess) const;

  Regularity regularity = Regularity::c2_alpha;
  double valid_radius = std::numeric_limits<double>::infinity();
  double fd_h = 1e-5;

 private:
  int n_;
  MapFn fwd_;
  JacFn jac_;
  SecondFn second_;
  MapFn inv_;
};

/// Newton solve of F(x) = y starting from x_guess.
/// Throws on a singular Jacobian (|det| < 1e-8) or non-convergence.
Vec invert_at(const Diffeomorphism& F, const Vec& y, const Vec& x_guess,
              double tol = 1e-10, int max_iter = 50);

/// Largest sampled radius R' <= R such that on B_{R'}(0) the Jacobian
/// determinant stays >= det_floor in magnitude and the sampled map is
/// injective. Found by bisection over the radius.
double jacobian_radius(const Diffeomorphism& F, double R, double det_floor,
                       int samples_per_axis = 9);

}  // namespace ellx
