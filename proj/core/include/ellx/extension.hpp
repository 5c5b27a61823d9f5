#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ellx/operator.hpp"
#include "ellx/reflection.hpp"
#include "ellx/smoothing.hpp"

namespace ellx {

/// 1-d input profile on [0, C]: value plus optional analytic derivatives
/// (used for exact admissibility checks; finite differences otherwise).
struct Profile1D {
  std::function<double(double)> f;
  std::function<double(double)> df;   // optional
  std::function<double(double)> d2f;  // optional
  double support_end = 1.0;           // C
};

/// Result of the squeezed-reflection extension in one dimension:
/// (Eu)(s) = -u(F_{a,b}(s)) for -delta < s < 0, u(s) for s >= 0, and
/// extended = eta * Eu with a cutoff plateau on [-delta/2, C].
struct Extension1D {
  double a = 1.0, b = 0.0, delta = 0.0, R = 0.0;
  ScalarField raw;
  ScalarField eta;
  ScalarField extended;
  double boundary_residual = 0.0;  // |a u'' + b u'|(0+)
  double support_lo = 0.0;         // -3 delta / 4
};

/// Requires u(0) = 0 and a u''(0+) + b u'(0+) = 0 within tol; rejects
/// otherwise, reporting the residual.
Extension1D extend_1d(const Profile1D& u, double a, double b, double R,
                      double admissibility_tol = 1e-8);

/// Half-cuboid extension across {x_n = 0} on Q = [-R,R]^n using the
/// reflection with parameters a_nn(x',0), b_n(x',0) and the common depth
/// delta(lambda, Lambda, R).
struct HalfspaceExtension {
  double delta = 0.0;
  double R = 0.0;
  ScalarField raw;
  ScalarField extended;
  double max_u_on_seam = 0.0;
  double max_Lu_on_seam = 0.0;
  double max_cross_term = 0.0;
};

HalfspaceExtension extend_halfspace(const ScalarField& u,
                                    const EllipticOperator& L, double R,
                                    double admissibility_tol = 1e-6,
                                    double fd_h = 1e-4);

/// One-sided agreement of values and derivatives across a seam, plus the
/// sampled Hoelder seminorm of the second derivative near it.
struct SeamReport {
  double value_mismatch = 0.0;
  double first_mismatch = 0.0;
  double second_mismatch = 0.0;
  double second_holder = 0.0;
  double h = 0.0;
  double alpha = 0.0;
};

/// 1-d seam at s = 0.
SeamReport verify_extension_smoothness(const ScalarField& Eu, double alpha,
                                       double h, double window = 0.05);

/// Seam {x_n = 0} at the given tangential sample points (worst case over
/// the samples; mixed d_i d_n derivatives included).
SeamReport verify_extension_smoothness(const ScalarField& Eu,
                                       const std::vector<Vec>& seam_points,
                                       double alpha, double h,
                                       double window = 0.05);

}  // namespace ellx
