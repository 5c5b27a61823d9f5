#pragma once

#include "ellx/domain.hpp"
#include "ellx/fields.hpp"

namespace ellx {

/// C-infinity step: 0 for t <= 0, 1 for t >= 1, strictly monotone between.
double smooth_step(double t);

/// 1 for s <= a, 0 for s >= b, smooth and monotone in between.
double smooth_step_down(double s, double a, double b);

/// Convolution of u with the normalized bump of radius 1/k, evaluated on
/// the interior sub-mesh that keeps the kernel support inside the grid.
/// The discrete kernel weights are normalized to unit mass, so neither
/// the sup norm nor any sampled Hoelder quotient can grow.
GridFunction mollify(const GridFunction& u, int k);

/// Smooth eta with eta == 1 on `inner`, supp(eta) compactly inside
/// `outer`, and 0 <= eta <= 1. Built from a mollified transition in the
/// distance-to-inner coordinate.
ScalarField cutoff(const DomainSpec& inner, const DomainSpec& outer);

/// 1-d cutoff: 1 on [plateau_lo, plateau_hi], support inside
/// (support_lo, support_hi).
ScalarField cutoff_1d(double support_lo, double plateau_lo, double plateau_hi,
                      double support_hi);

}  // namespace ellx
