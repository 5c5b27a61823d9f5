#pragma once

#include <vector>

#include "ellx/diffeomorphism.hpp"
#include "ellx/operator.hpp"

namespace ellx {

/// Pullback g -> g o F.
ScalarField pullback(const Diffeomorphism& F, const ScalarField& g);

/// L2 = T_F^{-1} o L1 o T_F: the operator acting in the image variable y
/// whose coefficients come from the chain rule through F.
struct TransformedOperator {
  EllipticOperator op;
  Diffeomorphism map;
};

/// Coefficients at y are produced by inverting F at y and applying
///   a~_kl = (DF a DF^T)_kl,  b~_k = tr(a H(F_k)) + (DF b)_k,  c~ = c.
/// The transformed ellipticity constant is estimated as
/// lambda * min sampled sigma_min(DF)^2 over the ball of sample_radius
/// around sample_center (in source coordinates); the coefficient bound is
/// raised to the sampled magnitudes of a~ and b~.
TransformedOperator pushforward_operator(const EllipticOperator& L1,
                                         const Diffeomorphism& F,
                                         double sample_radius = 1.0,
                                         const Vec& sample_center = Vec());

/// Boundary-flattening shear F(x) = (x' + g(x') x_n, x_n) with
/// g_i = -a_in(x',0)/a_nn(x',0); removes the a_in cross terms on {x_n=0}.
struct FlatteningMap {
  Diffeomorphism F;
  double R_prime = 0.0;
};

FlatteningMap build_flattening_map(const EllipticOperator& L1, double R,
                                   double det_floor = 1e-3);

/// max over boundary samples (points with y_n = 0) and i < n of |a~_in(y)|.
double verify_no_cross_terms(const TransformedOperator& L2,
                             const std::vector<Vec>& boundary_samples);

}  // namespace ellx
