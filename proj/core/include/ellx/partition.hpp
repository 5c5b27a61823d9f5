#pragma once

#include <array>
#include <functional>
#include <vector>

#include "ellx/diffeomorphism.hpp"
#include "ellx/domain.hpp"
#include "ellx/smoothing.hpp"

namespace ellx {

/// One member of an open cover together with its smooth plateau bump:
/// bump == 1 on the shrunken core, supp(bump) inside the set.
struct CoverSet {
  std::function<bool(const Vec&)> member;
  ScalarField bump;

  static CoverSet ball(const Vec& center, double r, double shrink = 0.25);
  static CoverSet box(const Vec& lo, const Vec& hi, double shrink = 0.25);
  /// Set pulled back through a chart map: member/bump are evaluated on
  /// z = to_chart(x) with per-axis (support_lo, plateau_lo, plateau_hi,
  /// support_hi) windows; guard short-circuits points where the chart map
  /// is invalid.
  static CoverSet chart_window(const Diffeomorphism& to_chart,
                               const std::vector<std::array<double, 4>>& windows,
                               std::function<bool(const Vec&)> guard = nullptr);
};

/// Weights Phi_i = eta_i / max(sum eta_j, 1): sum to 1 on the covered
/// closure, stay in [0,1], never exceed 1 anywhere.
struct PartitionOfUnity {
  std::vector<ScalarField> weights;
  double weight_sum(const Vec& x) const;
};

/// Verifies that the plateaus cover the sampled closure of omega (so the
/// weight sum is exactly 1 there); throws naming an uncovered point.
PartitionOfUnity build_partition(const std::vector<CoverSet>& cover,
                                 const DomainSpec& omega, double sample_h);

}  // namespace ellx
