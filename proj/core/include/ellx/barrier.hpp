#pragma once

#include <vector>

#include "ellx/operator.hpp"

namespace ellx {

/// Barrier pair at one epsilon: w+ = g(x0) + eps + k w, w- mirrored.
struct BarrierPair {
  double epsilon = 0.0;
  double k_eps = 0.0;
  ScalarField w_plus;
  ScalarField w_minus;
};

/// Net of barriers at a boundary point satisfying the external sphere
/// condition, built from the pinch function w = tau (R^-sigma - r^-sigma).
struct BarrierNet {
  Vec x0;
  Vec sphere_center;
  double sphere_R = 0.0;
  double tau = 0.0;
  double sigma = 0.0;
  ScalarField w;
  std::vector<BarrierPair> pairs;
  double max_Lw = 0.0;  // sampled max of Lw over the domain, must be <= -1
};

/// sigma starts at max(1, ceil(C1 / lambda)) and doubles until the radial
/// bracket is strictly negative on the mesh; tau then scales the worst
/// slack to -1. Throws if the sphere touches the boundary anywhere except
/// x0 (sampled), reporting the violating boundary point.
BarrierNet build_barrier(const EllipticOperator& L, const ScalarField& f,
                         const ScalarField& g, const Vec& x0,
                         const Vec& sphere_center, double sphere_R,
                         const std::vector<double>& epsilons,
                         const DomainSpec& domain, double h);

/// Exact radial evaluation of L applied to tau (R^-sigma - r^-sigma).
double barrier_Lw(const EllipticOperator& L, const Vec& x, const Vec& center,
                  double R, double sigma, double tau);

}  // namespace ellx
