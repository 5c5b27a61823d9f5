#pragma once

#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "ellx/error.hpp"
#include "ellx/types.hpp"

namespace ellx {

using RealFn = std::function<double(const Vec&)>;
using RealFn1 = std::function<double(double)>;

/// Per-axis stencil side: -1 backward, 0 central, +1 forward.
struct StencilSides {
  std::vector<int> side;  // empty means central everywhere

  int at(int axis) const {
    return axis < static_cast<int>(side.size()) ? side[static_cast<std::size_t>(axis)] : 0;
  }
  static StencilSides central() { return {}; }
  static StencilSides one_sided(int axis, int s, int dim) {
    StencilSides st;
    st.side.assign(static_cast<std::size_t>(dim), 0);
    st.side[static_cast<std::size_t>(axis)] = s;
    return st;
  }
};

/// Optional axis-aligned evaluation bounds; stencil points leaving the
/// bounds raise an error instead of silently evaluating outside.
struct FdBounds {
  Vec lo, hi;
};

double fd_d1(const RealFn& f, const Vec& x, int axis, double h, int side = 0,
             const std::optional<FdBounds>& bounds = std::nullopt);
double fd_d2(const RealFn& f, const Vec& x, int axis, double h, int side = 0,
             const std::optional<FdBounds>& bounds = std::nullopt);
double fd_cross(const RealFn& f, const Vec& x, int i, int j, double h,
                int side_i = 0, int side_j = 0,
                const std::optional<FdBounds>& bounds = std::nullopt);

Vec fd_gradient(const RealFn& f, const Vec& x, double h,
                const StencilSides& sides = {},
                const std::optional<FdBounds>& bounds = std::nullopt);
Mat fd_hessian(const RealFn& f, const Vec& x, double h,
               const StencilSides& sides = {},
               const std::optional<FdBounds>& bounds = std::nullopt);

// 1-d conveniences used by the seam checks
double fd_d1_1d(const RealFn1& f, double x, double h, int side = 0);
double fd_d2_1d(const RealFn1& f, double x, double h, int side = 0);

}  // namespace ellx
