#pragma once

#include "ellx/operator.hpp"

namespace ellx {

/// Supersolution / subsolution pair v+ >= u >= v- for Lu = f, u = g,
/// built from the exponential slab profile.
struct ComparisonPair {
  ScalarField v_plus;
  ScalarField v_minus;
  double gamma = 0.0;
  double slab_width = 0.0;   // d
  double slab_offset = 0.0;  // translation of x1 so the slab starts at 0
  double sup_g = 0.0;
  double f_norm = 0.0;
};

/// Requires c <= 0 on the sampled mesh. gamma is the smallest value
/// Lambda/lambda + j (j = 1, 2, ...) for which the sampled inequality
/// Lv+ <= -|f| holds.
ComparisonPair build_comparison_pair(const EllipticOperator& L,
                                     const ScalarField& f, const ScalarField& g,
                                     const DomainSpec& domain, double h);

struct SandwichReport {
  bool ok = false;
  double worst_low = 0.0;   // max of (v- - u), positive means violation
  double worst_high = 0.0;  // max of (u - v+)
};

SandwichReport check_sandwich(const ComparisonPair& pair, const GridFunction& u,
                              const DomainSpec& domain, double tol = 1e-6);

/// sup_boundary |g| + max_x (e^{gamma d} - e^{gamma x1}) |f| / lambda;
/// every solution of Lu = f, u = g must stay below this in sup norm.
double interior_sup_bound(const EllipticOperator& L, const ScalarField& f,
                          const ScalarField& g, const DomainSpec& domain,
                          double h);

}  // namespace ellx
