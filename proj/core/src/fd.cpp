#include "ellx/fd.hpp"

#include <cmath>
#include <string>

namespace ellx {

namespace {

void check_bounds(const Vec& x, const std::optional<FdBounds>& bounds) {
  if (!bounds) return;
  for (int i = 0; i < x.size(); ++i) {
    if (x[i] < bounds->lo[i] - 1e-14 || x[i] > bounds->hi[i] + 1e-14) {
      throw Error("fd: stencil point leaves domain at axis " +
                  std::to_string(i + 1) + " (value " + std::to_string(x[i]) +
                  ")");
    }
  }
}

double at(const RealFn& f, Vec x, int axis, int steps, double h,
          const std::optional<FdBounds>& bounds) {
  x[axis] += steps * h;
  check_bounds(x, bounds);
  return f(x);
}

}  // namespace

double fd_d1(const RealFn& f, const Vec& x, int axis, double h, int side,
             const std::optional<FdBounds>& bounds) {
  if (h <= 0.0) throw Error("fd: spacing must be positive");
  auto u = [&](int k) { return at(f, x, axis, k, h, bounds); };
  if (side == 0) return (u(1) - u(-1)) / (2.0 * h);
  if (side > 0) return (-3.0 * u(0) + 4.0 * u(1) - u(2)) / (2.0 * h);
  return (3.0 * u(0) - 4.0 * u(-1) + u(-2)) / (2.0 * h);
}

double fd_d2(const RealFn& f, const Vec& x, int axis, double h, int side,
             const std::optional<FdBounds>& bounds) {
  if (h <= 0.0) throw Error("fd: spacing must be positive");
  auto u = [&](int k) { return at(f, x, axis, k, h, bounds); };
  if (side == 0) return (u(1) - 2.0 * u(0) + u(-1)) / (h * h);
  if (side > 0) return (2.0 * u(0) - 5.0 * u(1) + 4.0 * u(2) - u(3)) / (h * h);
  return (2.0 * u(0) - 5.0 * u(-1) + 4.0 * u(-2) - u(-3)) / (h * h);
}

double fd_cross(const RealFn& f, const Vec& x, int i, int j, double h,
                int side_i, int side_j, const std::optional<FdBounds>& bounds) {
  if (i == j) return fd_d2(f, x, i, h, side_i, bounds);
  if (side_i == 0 && side_j == 0) {
    Vec p = x;
    auto u = [&](int ki, int kj) {
      Vec q = x;
      q[i] += ki * h;
      q[j] += kj * h;
      check_bounds(q, bounds);
      return f(q);
    };
    return (u(1, 1) - u(1, -1) - u(-1, 1) + u(-1, -1)) / (4.0 * h * h);
  }
  // compose one-sided first derivatives
  RealFn dj = [&](const Vec& p) { return fd_d1(f, p, j, h, side_j, bounds); };
  return fd_d1(dj, x, i, h, side_i, bounds);
}

Vec fd_gradient(const RealFn& f, const Vec& x, double h,
                const StencilSides& sides, const std::optional<FdBounds>& bounds) {
  const int n = static_cast<int>(x.size());
  Vec g(n);
  for (int i = 0; i < n; ++i) g[i] = fd_d1(f, x, i, h, sides.at(i), bounds);
  return g;
}

Mat fd_hessian(const RealFn& f, const Vec& x, double h,
               const StencilSides& sides, const std::optional<FdBounds>& bounds) {
  const int n = static_cast<int>(x.size());
  Mat hess(n, n);
  for (int i = 0; i < n; ++i) {
    hess(i, i) = fd_d2(f, x, i, h, sides.at(i), bounds);
    for (int j = i + 1; j < n; ++j) {
      const double v = fd_cross(f, x, i, j, h, sides.at(i), sides.at(j), bounds);
      hess(i, j) = v;
      hess(j, i) = v;
    }
  }
  return hess;
}

double fd_d1_1d(const RealFn1& f, double x, double h, int side) {
  RealFn g = [&](const Vec& p) { return f(p[0]); };
  return fd_d1(g, vec1(x), 0, h, side);
}

double fd_d2_1d(const RealFn1& f, double x, double h, int side) {
  RealFn g = [&](const Vec& p) { return f(p[0]); };
  return fd_d2(g, vec1(x), 0, h, side);
}

}  // namespace ellx
