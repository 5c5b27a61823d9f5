#include "ellx/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "ellx/error.hpp"

namespace ellx {

namespace {

double bump_half(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

// exp(-1/(1-t^2)) on |t| < 1, the standard mollifier profile
double bump(double t) {
  const double s = 1.0 - t * t;
  return s > 0.0 ? std::exp(-1.0 / s) : 0.0;
}

double set_distance(const DomainSpec& s, const Vec& x) {
  if (s.contains(x)) return 0.0;
  return s.boundary_distance(x);
}

}  // namespace

double smooth_step(double t) {
  const double a = bump_half(t);
  const double b = bump_half(1.0 - t);
  return a / (a + b);
}

double smooth_step_down(double s, double a, double b) {
  if (!(b > a)) throw Error("smooth_step_down: need a < b");
  return smooth_step((b - s) / (b - a));
}

GridFunction mollify(const GridFunction& u, int k) {
  if (k < 1) throw Error("mollify: k must be a positive integer");
  const Mesh& mesh = u.mesh();
  const int n = mesh.dim();
  const double radius = 1.0 / k;
  const int margin = static_cast<int>(std::ceil(radius / mesh.h));

  Mesh inner;
  inner.h = mesh.h;
  inner.origin = mesh.origin.array() + margin * mesh.h;
  for (int c : mesh.counts) {
    const int ic = c - 2 * margin;
    if (ic < 3) {
      // smallest k whose kernel radius leaves a >= 3 node core
      const int max_margin = (c - 3) / 2;
      const int k_needed = max_margin >= 1
                               ? static_cast<int>(std::ceil(1.0 / (max_margin * mesh.h)))
                               : -1;
      throw Error("mollify: kernel radius 1/k = " + std::to_string(radius) +
                  " exceeds the grid margin; " +
                  (k_needed > 0 ? "requires k >= " + std::to_string(k_needed)
                                : "grid too small for any k"));
    }
    inner.counts.push_back(ic);
  }

  // discrete kernel on the offset lattice, normalized to unit mass
  std::vector<std::pair<std::vector<int>, double>> kernel;
  std::vector<int> off(static_cast<std::size_t>(n), -margin);
  double mass = 0.0;
  for (;;) {
    double r2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double z = off[static_cast<std::size_t>(i)] * mesh.h;
      r2 += z * z;
    }
    const double w = bump(std::sqrt(r2) * k);
    if (w > 0.0) {
      kernel.emplace_back(off, w);
      mass += w;
    }
    int axis = n - 1;
    while (axis >= 0 && ++off[static_cast<std::size_t>(axis)] > margin) {
      off[static_cast<std::size_t>(axis)] = -margin;
      --axis;
    }
    if (axis < 0) break;
  }
  if (kernel.empty() || mass <= 0.0) throw Error("mollify: empty kernel (grid too coarse for k)");
  for (auto& [o, w] : kernel) w /= mass;

  std::vector<double> out(static_cast<std::size_t>(inner.size()));
  std::vector<int> idx, src;
  for (long f = 0; f < inner.size(); ++f) {
    inner.unflat(f, idx);
    double acc = 0.0;
    for (const auto& [o, w] : kernel) {
      src = idx;
      for (int i = 0; i < n; ++i) {
        src[static_cast<std::size_t>(i)] += margin - o[static_cast<std::size_t>(i)];
      }
      acc += w * u.value(src);
    }
    out[static_cast<std::size_t>(f)] = acc;
  }
  return GridFunction(inner, std::move(out));
}

ScalarField cutoff(const DomainSpec& inner, const DomainSpec& outer) {
  if (inner.dim() != outer.dim()) throw Error("cutoff: dimension mismatch");
  // margin = dist(inner, boundary of outer), minimized on inner's boundary
  double margin = std::numeric_limits<double>::infinity();
  for (const Vec& p : inner.boundary_points()) {
    if (!outer.contains(p)) throw Error("cutoff: inner set is not inside outer");
    margin = std::min(margin, outer.boundary_distance(p));
  }
  if (!(margin > 0.0)) throw Error("cutoff: zero margin between inner and outer");

  DomainSpec inner_copy = inner;
  const double a = 0.25 * margin, b = 0.75 * margin;
  return ScalarField(inner.dim(), [inner_copy, a, b](const Vec& x) {
    return smooth_step_down(set_distance(inner_copy, x), a, b);
  });
}

ScalarField cutoff_1d(double support_lo, double plateau_lo, double plateau_hi,
                      double support_hi) {
  if (!(support_lo < plateau_lo && plateau_lo <= plateau_hi && plateau_hi < support_hi)) {
    throw Error("cutoff_1d: need support_lo < plateau_lo <= plateau_hi < support_hi");
  }
  return ScalarField(1, [=](const Vec& x) {
    const double s = x[0];
    const double up = smooth_step((s - support_lo) / (plateau_lo - support_lo));
    const double down = smooth_step_down(s, plateau_hi, support_hi);
    return up * down;
  });
}

}  // namespace ellx
