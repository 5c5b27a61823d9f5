#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <utility>
#include <vector>

#include "ellx/diffeomorphism.hpp"
#include "ellx/types.hpp"

namespace ellx {

/// Boundary smoothness class k + alpha.
struct BoundaryOrder {
  int k = 2;
  double alpha = 1.0;
};

/// Chart straightening a boundary patch: psi maps the patch onto a ball
/// around 0 with the boundary going to {y_n = 0} and the inside of the
/// domain to {y_n > 0}. guard marks where the chart map is valid.
struct BoundaryChart {
  Diffeomorphism psi;
  double R = 1.0;
  std::function<bool(const Vec&)> guard;
};

/// Bounded region: box, ball, half-cuboid [-R,R]^{n-1} x [0,R], or a
/// chart atlas given by a membership predicate plus boundary charts.
class DomainSpec {
 public:
  enum class Kind { box, ball, half_cuboid, chart_atlas };

  static DomainSpec box(const Vec& lo, const Vec& hi);
  static DomainSpec interval(double lo, double hi);
  static DomainSpec ball(const Vec& center, double radius);
  static DomainSpec half_cuboid(int n, double R);
  static DomainSpec chart_atlas(std::function<bool(const Vec&)> inside,
                                const Vec& bbox_lo, const Vec& bbox_hi,
                                std::vector<BoundaryChart> charts,
                                int boundary_density = 512);

  Kind kind() const { return kind_; }
  int dim() const { return n_; }
  bool contains(const Vec& x, double shrink = 0.0) const;
  double boundary_distance(const Vec& x) const;
  /// Distance to the boundary with a portion removed (portion given as a
  /// predicate on boundary points); always computed from boundary samples.
  double boundary_distance_excluding(
      const Vec& x, const std::function<bool(const Vec&)>& portion) const;
  double diameter() const;
  std::pair<Vec, Vec> bounding_box() const;
  /// Deterministic dense boundary sample set.
  const std::vector<Vec>& boundary_points() const { return boundary_points_; }

  const std::vector<BoundaryChart>& charts() const { return charts_; }

  // box / half_cuboid parameters
  const Vec& lo() const { return lo_; }
  const Vec& hi() const { return hi_; }
  // ball parameters
  const Vec& center() const { return center_; }
  double radius() const { return radius_; }

  BoundaryOrder boundary_order;

 private:
  DomainSpec() = default;

  Kind kind_ = Kind::box;
  int n_ = 0;
  Vec lo_, hi_;
  Vec center_;
  double radius_ = 0.0;
  std::function<bool(const Vec&)> inside_;
  std::vector<BoundaryChart> charts_;
  std::vector<Vec> boundary_points_;

  void build_boundary_samples(int density);
};

}  // namespace ellx
