#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ellx/diffeomorphism.hpp"
#include "ellx/domain.hpp"
#include "ellx/fields.hpp"
#include "ellx/norms.hpp"

namespace ellx {

/// Coefficient function: expression-backed coefficients differentiate
/// exactly, closure-backed ones by central differences at fd_h.
class Coefficient {
 public:
  Coefficient() : Coefficient(0.0) {}
  Coefficient(double constant);  // NOLINT(google-explicit-constructor)
  Coefficient(Expr e);           // NOLINT(google-explicit-constructor)
  Coefficient(int dim, RealFn f);

  double operator()(const Vec& x) const { return f_(x); }
  double d(int axis, const Vec& x) const;
  double d2(int i, int j, const Vec& x) const;

  bool expression_backed() const { return expr_.has_value(); }
  const std::optional<Expr>& expr() const { return expr_; }

  double fd_h = 1e-5;

 private:
  RealFn f_;
  std::optional<Expr> expr_;
};

/// Lu = sum_ij a_ij d_i d_j u + sum_i b_i d_i u + c u with ellipticity
/// constant lambda and coefficient bound Lambda.
class EllipticOperator {
 public:
  EllipticOperator(int n, std::vector<std::vector<Coefficient>> a,
                   std::vector<Coefficient> b, Coefficient c, double lambda,
                   double Lambda,
                   Regularity coeff_regularity = Regularity::c0_alpha);

  static EllipticOperator laplacian(int n);
  static EllipticOperator from_exprs(const std::vector<std::vector<std::string>>& a,
                                     const std::vector<std::string>& b,
                                     const std::string& c, int n, double lambda,
                                     double Lambda,
                                     Regularity reg = Regularity::c2_alpha);

  int dim() const { return n_; }
  const Coefficient& a(int i, int j) const;
  const Coefficient& b(int i) const;
  const Coefficient& c() const { return c_; }

  /// Symmetrized coefficient matrix (a + a^T)/2; only the quadratic form
  /// enters the operator since Hessians are symmetric.
  Mat a_at(const Vec& x) const;
  Vec b_at(const Vec& x) const;
  double c_at(const Vec& x) const;

  /// L - omega (the zeroth-order coefficient shifted down by omega).
  EllipticOperator shifted(double omega) const;

  double lambda = 1.0;
  double Lambda = 1.0;
  Regularity coeff_regularity = Regularity::c0_alpha;

 private:
  int n_;
  std::vector<std::vector<Coefficient>> a_;
  std::vector<Coefficient> b_;
  Coefficient c_;
};

/// (Lu)(x) via finite differences at spacing h; one-sided stencils may be
/// selected per axis for boundary points.
double apply(const EllipticOperator& L, const ScalarField& u, const Vec& x,
             double h, const StencilSides& sides = {},
             const std::optional<FdBounds>& bounds = std::nullopt);

/// (Lu) at a mesh node of a grid function, using the grid spacing;
/// one-sided stencils are chosen automatically at mesh edges.
double apply(const EllipticOperator& L, const GridFunction& u,
             std::span<const int> node);

struct EllipticityReport {
  double lambda_est = 0.0;
  bool ok = false;
  Vec worst_point;
  Vec worst_direction;
};

/// Sampled check of xi^T a(x) xi >= lambda |xi|^2; lambda_est is the
/// smallest sampled Rayleigh quotient.
EllipticityReport verify_ellipticity(const EllipticOperator& L,
                                     const DomainSpec& domain, int n_points,
                                     int n_directions);

struct DissipativityReport {
  Vec x_star;
  double margin = 0.0;   // sign(u(x*)) * (Lu)(x*)
  double u_at_star = 0.0;
};

/// Evaluates the dissipativity inequality at the argmax of |u| for a grid
/// function vanishing on the boundary: for c <= 0 the margin must be
/// nonpositive up to finite-difference error.
DissipativityReport dissipativity_margin(const EllipticOperator& L,
                                         const GridFunction& u,
                                         const DomainSpec& domain);

/// sup c over the sampled closure plus a Hoelder-modulus safety term.
double sup_c_omega(const EllipticOperator& L, const DomainSpec& domain, double h,
                   double alpha, double c_holder_norm = 0.0);

struct MaxPrincipleReport {
  double lu_min = 0.0, lu_max = 0.0;
  bool checked_super = false, checked_sub = false, checked_equal = false;
  double sup_interior = 0.0, sup_boundary_plus = 0.0;
  double inf_interior = 0.0, sup_boundary_minus = 0.0;
  double sup_abs_interior = 0.0, sup_abs_boundary = 0.0;
  double worst_violation = 0.0;
  double tol = 0.0;
  bool ok = false;
};

/// Checks the weak maximum principle statements that apply to u according
/// to the sampled sign of Lu. Report-only; never throws on violations.
MaxPrincipleReport max_principle_check(const GridFunction& u,
                                       const EllipticOperator& L,
                                       const ScalarField& f,
                                       const DomainSpec& domain,
                                       double fd_tol = 1e-6);

}  // namespace ellx
