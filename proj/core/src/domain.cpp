#include "ellx/domain.hpp"

#include <algorithm>
#include <cmath>

#include "ellx/error.hpp"

namespace ellx {

DomainSpec DomainSpec::box(const Vec& lo, const Vec& hi) {
  if (lo.size() != hi.size() || lo.size() < 1) throw Error("DomainSpec: bad box corners");
  for (int i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) throw Error("DomainSpec: box has empty extent");
    if (!std::isfinite(lo[i]) || !std::isfinite(hi[i])) throw Error("DomainSpec: box must be bounded");
  }
  DomainSpec d;
  d.kind_ = Kind::box;
  d.n_ = static_cast<int>(lo.size());
  d.lo_ = lo;
  d.hi_ = hi;
  d.build_boundary_samples(512);
  return d;
}

DomainSpec DomainSpec::interval(double lo, double hi) { return box(vec1(lo), vec1(hi)); }

DomainSpec DomainSpec::ball(const Vec& center, double radius) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw Error("DomainSpec: ball radius must be positive and finite");
  DomainSpec d;
  d.kind_ = Kind::ball;
  d.n_ = static_cast<int>(center.size());
  d.center_ = center;
  d.radius_ = radius;
  d.lo_ = center.array() - radius;
  d.hi_ = center.array() + radius;
  d.build_boundary_samples(512);
  return d;
}

DomainSpec DomainSpec::half_cuboid(int n, double R) {
  if (n < 1 || !(R > 0.0)) throw Error("DomainSpec: bad half-cuboid parameters");
  Vec lo = Vec::Constant(n, -R);
  Vec hi = Vec::Constant(n, R);
  lo[n - 1] = 0.0;
  DomainSpec d;
  d.kind_ = Kind::half_cuboid;
  d.n_ = n;
  d.lo_ = lo;
  d.hi_ = hi;
  d.build_boundary_samples(512);
  return d;
}

DomainSpec DomainSpec::chart_atlas(std::function<bool(const Vec&)> inside,
                                   const Vec& bbox_lo, const Vec& bbox_hi,
                                   std::vector<BoundaryChart> charts,
                                   int boundary_density) {
  if (charts.empty()) throw Error("DomainSpec: chart atlas needs at least one chart");
  DomainSpec d;
  d.kind_ = Kind::chart_atlas;
  d.n_ = static_cast<int>(bbox_lo.size());
  d.lo_ = bbox_lo;
  d.hi_ = bbox_hi;
  d.inside_ = std::move(inside);
  d.charts_ = std::move(charts);
  d.build_boundary_samples(boundary_density);
  // charts must cover the sampled boundary
  for (const Vec& p : d.boundary_points_) {
    bool covered = false;
    for (const auto& c : d.charts_) {
      if (c.guard && !c.guard(p)) continue;
      const Vec y = c.psi(p);
      if (y.norm() <= c.R && std::abs(y[d.n_ - 1]) <= 1e-9) {
        covered = true;
        break;
      }
    }
    if (!covered) {
      throw Error("DomainSpec: charts do not cover the boundary near (" +
                  std::to_string(p[0]) + ", ...)");
    }
  }
  return d;
}

bool DomainSpec::contains(const Vec& x, double shrink) const {
  switch (kind_) {
    case Kind::box:
    case Kind::half_cuboid: {
      for (int i = 0; i < n_; ++i) {
        if (x[i] <= lo_[i] + shrink || x[i] >= hi_[i] - shrink) return false;
      }
      return true;
    }
    case Kind::ball:
      return (x - center_).norm() < radius_ - shrink;
    case Kind::chart_atlas:
      if (!inside_(x)) return false;
      return shrink <= 0.0 || boundary_distance(x) > shrink;
  }
  return false;
}

double DomainSpec::boundary_distance(const Vec& x) const {
  switch (kind_) {
    case Kind::box:
    case Kind::half_cuboid: {
      bool inside = true;
      double dist_in = std::numeric_limits<double>::infinity();
      double out_sq = 0.0;
      for (int i = 0; i < n_; ++i) {
        const double below = lo_[i] - x[i];
        const double above = x[i] - hi_[i];
        if (below > 0) {
          inside = false;
          out_sq += below * below;
        } else if (above > 0) {
          inside = false;
          out_sq += above * above;
        } else {
          dist_in = std::min(dist_in, std::min(x[i] - lo_[i], hi_[i] - x[i]));
        }
      }
      return inside ? dist_in : std::sqrt(out_sq);
    }
    case Kind::ball:
      return std::abs(radius_ - (x - center_).norm());
    case Kind::chart_atlas: {
      double best = std::numeric_limits<double>::infinity();
      for (const Vec& p : boundary_points_) best = std::min(best, (x - p).norm());
      return best;
    }
  }
  return 0.0;
}

double DomainSpec::boundary_distance_excluding(
    const Vec& x, const std::function<bool(const Vec&)>& portion) const {
  double best = std::numeric_limits<double>::infinity();
  for (const Vec& p : boundary_points_) {
    if (portion && portion(p)) continue;
    best = std::min(best, (x - p).norm());
  }
  if (!std::isfinite(best)) throw Error("DomainSpec: boundary portion covers the whole boundary");
  return best;
}

double DomainSpec::diameter() const {
  if (kind_ == Kind::ball) return 2.0 * radius_;
  return (hi_ - lo_).norm();
}

std::pair<Vec, Vec> DomainSpec::bounding_box() const { return {lo_, hi_}; }

void DomainSpec::build_boundary_samples(int density) {
  boundary_points_.clear();
  switch (kind_) {
    case Kind::box:
    case Kind::half_cuboid: {
      if (n_ == 1) {
        boundary_points_.push_back(lo_);
        boundary_points_.push_back(hi_);
        return;
      }
      // each face sampled on a regular lattice
      const int per_axis = std::max(2, static_cast<int>(std::round(
                                           std::pow(static_cast<double>(density),
                                                    1.0 / (n_ - 1)))));
      for (int face_axis = 0; face_axis < n_; ++face_axis) {
        for (int side = 0; side < 2; ++side) {
          std::vector<int> idx(static_cast<std::size_t>(n_ - 1), 0);
          for (;;) {
            Vec p(n_);
            int j = 0;
            for (int i = 0; i < n_; ++i) {
              if (i == face_axis) {
                p[i] = side == 0 ? lo_[i] : hi_[i];
              } else {
                p[i] = lo_[i] + (hi_[i] - lo_[i]) * idx[static_cast<std::size_t>(j)] / (per_axis - 1);
                ++j;
              }
            }
            boundary_points_.push_back(p);
            int axis = n_ - 2;
            while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
              idx[static_cast<std::size_t>(axis)] = 0;
              --axis;
            }
            if (axis < 0) break;
          }
        }
      }
      return;
    }
    case Kind::ball: {
      if (n_ == 1) {
        boundary_points_.push_back(vec1(center_[0] - radius_));
        boundary_points_.push_back(vec1(center_[0] + radius_));
      } else if (n_ == 2) {
        for (int k = 0; k < density; ++k) {
          const double t = 2.0 * M_PI * k / density;
          boundary_points_.push_back(center_ + radius_ * vec2(std::cos(t), std::sin(t)));
        }
      } else {
        // Fibonacci lattice on the sphere
        const double golden = M_PI * (3.0 - std::sqrt(5.0));
        for (int k = 0; k < density; ++k) {
          const double z = 1.0 - 2.0 * (k + 0.5) / density;
          const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
          const double t = golden * k;
          Vec p = center_;
          p[0] += radius_ * r * std::cos(t);
          p[1] += radius_ * r * std::sin(t);
          p[2] += radius_ * z;
          boundary_points_.push_back(p);
        }
      }
      return;
    }
    case Kind::chart_atlas: {
      // pull boundary samples back through each chart's {y_n = 0} slice
      for (const auto& c : charts_) {
        const int per_axis = std::max(2, static_cast<int>(std::round(
                                             std::pow(static_cast<double>(density) /
                                                          static_cast<double>(charts_.size()),
                                                      1.0 / std::max(1, n_ - 1)))));
        std::vector<int> idx(static_cast<std::size_t>(n_ - 1), 0);
        const Vec guess = Vec::Zero(n_);
        for (;;) {
          Vec y = Vec::Zero(n_);
          for (int i = 0; i < n_ - 1; ++i) {
            y[i] = -c.R + 2.0 * c.R * idx[static_cast<std::size_t>(i)] / (per_axis - 1);
          }
          if (y.norm() <= c.R) {
            boundary_points_.push_back(c.psi.inverse(y, guess));
          }
          int axis = n_ - 2;
          while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
            idx[static_cast<std::size_t>(axis)] = 0;
            --axis;
          }
          if (axis < 0) break;
        }
      }
      return;
    }
  }
}

}  // namespace ellx
