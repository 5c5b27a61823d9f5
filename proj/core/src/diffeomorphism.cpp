#include "ellx/diffeomorphism.hpp"

#include <cmath>
#include <string>

#include "ellx/error.hpp"
#include "ellx/fd.hpp"

namespace ellx {

Diffeomorphism::Diffeomorphism(int n, MapFn fwd, JacFn jac, SecondFn second)
    : n_(n), fwd_(std::move(fwd)), jac_(std::move(jac)), second_(std::move(second)) {
  if (n_ < 1) throw Error("Diffeomorphism: dimension must be >= 1");
  if (!fwd_) throw Error("Diffeomorphism: missing forward map");
}

Diffeomorphism Diffeomorphism::identity(int n) {
  Mat linear = Mat::Identity(n, n);
  return affine(linear, Vec::Zero(n));
}

Diffeomorphism Diffeomorphism::affine(const Mat& linear, const Vec& shift) {
  const int n = static_cast<int>(linear.rows());
  Diffeomorphism d(
      n, [linear, shift](const Vec& x) -> Vec { return linear * x + shift; },
      [linear](const Vec&) { return linear; },
      [n](const Vec&) { return std::vector<Mat>(static_cast<std::size_t>(n), Mat::Zero(n, n)); });
  Eigen::PartialPivLU<Mat> lu(linear);
  if (std::abs(lu.determinant()) > 1e-14) {
    d.set_analytic_inverse([lu, shift](const Vec& y) -> Vec { return lu.solve(y - shift); });
  }
  d.regularity = Regularity::c4_alpha;
  return d;
}

Diffeomorphism Diffeomorphism::from_exprs(const std::vector<Expr>& components) {
  const int n = static_cast<int>(components.size());
  std::vector<std::vector<Expr>> d1(static_cast<std::size_t>(n));
  std::vector<std::vector<std::vector<Expr>>> d2(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    auto& dk = d1[static_cast<std::size_t>(k)];
    auto& dk2 = d2[static_cast<std::size_t>(k)];
    dk2.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
      dk.push_back(components[static_cast<std::size_t>(k)].derivative(i));
      for (int j = 0; j < n; ++j) {
        dk2[static_cast<std::size_t>(i)].push_back(dk.back().derivative(j));
      }
    }
  }
  auto fwd = [components, n](const Vec& x) -> Vec {
    Vec y(n);
    for (int k = 0; k < n; ++k) y[k] = components[static_cast<std::size_t>(k)](x);
    return y;
  };
  auto jac = [d1, n](const Vec& x) -> Mat {
    Mat J(n, n);
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) J(k, i) = d1[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)](x);
    }
    return J;
  };
  auto second = [d2, n](const Vec& x) -> std::vector<Mat> {
    std::vector<Mat> H(static_cast<std::size_t>(n), Mat(n, n));
    for (int k = 0; k < n; ++k) {
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
          H[static_cast<std::size_t>(k)](i, j) =
              d2[static_cast<std::size_t>(k)][static_cast<std::size_t>(i)][static_cast<std::size_t>(j)](x);
        }
      }
    }
    return H;
  };
  return Diffeomorphism(n, fwd, jac, second);
}

Mat Diffeomorphism::jacobian(const Vec& x) const {
  if (jac_) return jac_(x);
  Mat J(n_, n_);
  for (int k = 0; k < n_; ++k) {
    RealFn comp = [this, k](const Vec& p) { return fwd_(p)[k]; };
    for (int i = 0; i < n_; ++i) J(k, i) = fd_d1(comp, x, i, fd_h);
  }
  return J;
}

std::vector<Mat> Diffeomorphism::second_derivatives(const Vec& x) const {
  if (second_) return second_(x);
  std::vector<Mat> H;
  H.reserve(static_cast<std::size_t>(n_));
  for (int k = 0; k < n_; ++k) {
    RealFn comp = [this, k](const Vec& p) { return fwd_(p)[k]; };
    H.push_back(fd_hessian(comp, x, fd_h));
  }
  return H;
}

Vec Diffeomorphism::inverse(const Vec& y, const Vec& x_guess) const {
  if (inv_) return inv_(y);
  return invert_at(*this, y, x_guess);
}

Diffeomorphism Diffeomorphism::compose(const Diffeomorphism& outer, const Diffeomorphism& inner) {
  if (outer.dim() != inner.dim()) throw Error("Diffeomorphism: compose dimension mismatch");
  const int n = outer.dim();
  auto fwd = [outer, inner](const Vec& x) -> Vec { return outer(inner(x)); };
  auto jac = [outer, inner](const Vec& x) -> Mat {
    return outer.jacobian(inner(x)) * inner.jacobian(x);
  };
  auto second = [outer, inner, n](const Vec& x) -> std::vector<Mat> {
    const Vec mid = inner(x);
    const Mat Ji = inner.jacobian(x);
    const Mat Jo = outer.jacobian(mid);
    const auto Hi = inner.second_derivatives(x);
    const auto Ho = outer.second_derivatives(mid);
    std::vector<Mat> H(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
      Mat hk = Ji.transpose() * Ho[static_cast<std::size_t>(k)] * Ji;
      for (int m = 0; m < n; ++m) hk += Jo(k, m) * Hi[static_cast<std::size_t>(m)];
      H[static_cast<std::size_t>(k)] = hk;
    }
    return H;
  };
  Diffeomorphism d(n, fwd, jac, second);
  if (outer.has_analytic_inverse() && inner.has_analytic_inverse()) {
    const Diffeomorphism o = outer;
    const Diffeomorphism i = inner;
    const Vec zero = Vec::Zero(n);
    d.set_analytic_inverse([o, i, zero](const Vec& y) -> Vec {
      return i.inverse(o.inverse(y, zero), zero);
    });
  }
  d.regularity = std::min(outer.regularity, inner.regularity);
  return d;
}

Vec invert_at(const Diffeomorphism& F, const Vec& y, const Vec& x_guess,
              double tol, int max_iter) {
  Vec x = x_guess;
  double resid = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iter; ++it) {
    const Vec r = F(x) - y;
    resid = r.lpNorm<Eigen::Infinity>();
    if (resid <= tol) return x;
    const Mat J = F.jacobian(x);
    Eigen::PartialPivLU<Mat> lu(J);
    if (std::abs(lu.determinant()) < 1e-8) {
      throw Error("invert_at: singular Jacobian (|det| = " +
                  std::to_string(std::abs(lu.determinant())) + ")");
    }
    x -= lu.solve(r);
  }
  // final residual check after the last update
  const double final_resid = (F(x) - y).lpNorm<Eigen::Infinity>();
  if (final_resid <= tol) return x;
  throw Error("invert_at: no convergence after " + std::to_string(max_iter) +
              " iterations, residual " + std::to_string(final_resid));
}

namespace {

std::vector<Vec> ball_lattice(int n, double radius, int per_axis) {
  std::vector<Vec> pts;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Vec p(n);
    for (int i = 0; i < n; ++i) {
      p[i] = -radius + 2.0 * radius * idx[static_cast<std::size_t>(i)] / (per_axis - 1);
    }
    if (p.norm() <= radius + 1e-15) pts.push_back(p);
    int axis = n - 1;
    while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
      idx[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return pts;
}

bool radius_ok(const Diffeomorphism& F, double r, double det_floor, int per_axis) {
  const auto pts = ball_lattice(F.dim(), r, per_axis);
  std::vector<Vec> images;
  images.reserve(pts.size());
  for (const Vec& p : pts) {
    const Mat J = F.jacobian(p);
    if (std::abs(J.determinant()) < det_floor) return false;
    images.push_back(F(p));
  }
  for (std::size_t i = 0; i < images.size(); ++i) {
    for (std::size_t j = i + 1; j < images.size(); ++j) {
      if ((images[i] - images[j]).norm() < 1e-12 && (pts[i] - pts[j]).norm() > 1e-12) {
        return false;
      }
    }
  }
  return true;
}

}  // namespace

double jacobian_radius(const Diffeomorphism& F, double R, double det_floor,
                       int samples_per_axis) {
  if (R <= 0.0) throw Error("jacobian_radius: R must be positive");
  const Vec zero = Vec::Zero(F.dim());
  if (std::abs(F.jacobian(zero).determinant()) < det_floor) {
    throw Error("jacobian_radius: Jacobian determinant at 0 below floor");
  }
  if (radius_ok(F, R, det_floor, samples_per_axis)) return R;
  double lo = 0.0, hi = R;
  for (int it = 0; it < 40 && (hi - lo) > 1e-3 * R; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (radius_ok(F, mid, det_floor, samples_per_axis)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  if (lo == 0.0) throw Error("jacobian_radius: no admissible radius found");
  return lo;
}

}  // namespace ellx
