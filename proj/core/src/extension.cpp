#include "ellx/extension.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "ellx/error.hpp"

namespace ellx {

namespace {

double one_sided_d1(const std::function<double(double)>& f, double x, double h) {
  return (-3.0 * f(x) + 4.0 * f(x + h) - f(x + 2.0 * h)) / (2.0 * h);
}

double one_sided_d2(const std::function<double(double)>& f, double x, double h) {
  return (2.0 * f(x) - 5.0 * f(x + h) + 4.0 * f(x + 2.0 * h) - f(x + 3.0 * h)) / (h * h);
}

}  // namespace

Extension1D extend_1d(const Profile1D& u, double a, double b, double R,
                      double admissibility_tol) {
  if (!(a > 0.0)) throw Error("extend_1d: a must be positive");
  if (!u.f) throw Error("extend_1d: missing profile");
  const double u0 = u.f(0.0);
  if (std::abs(u0) > admissibility_tol) {
    throw Error("extend_1d: u(0) = " + std::to_string(u0) + " violates u(0) = 0 (tol " +
                std::to_string(admissibility_tol) + ")");
  }
  const double fd_h = 1e-5;
  const double d1 = u.df ? u.df(0.0) : one_sided_d1(u.f, 0.0, fd_h);
  const double d2 = u.d2f ? u.d2f(0.0) : one_sided_d2(u.f, 0.0, fd_h);
  const double residual = a * d2 + b * d1;
  if (std::abs(residual) > admissibility_tol) {
    throw Error("extend_1d: boundary condition a u'' + b u' = " +
                std::to_string(residual) + " at 0 exceeds tol " +
                std::to_string(admissibility_tol));
  }

  Extension1D out;
  out.a = a;
  out.b = b;
  out.R = R;
  out.delta = reflection_delta(a, b, R);
  out.boundary_residual = std::abs(residual);
  out.support_lo = -0.75 * out.delta;

  const auto f = u.f;
  const double delta = out.delta;
  out.raw = ScalarField(1, [f, a, b, delta](const Vec& x) {
    const double s = x[0];
    if (s >= 0.0) return f(s);
    if (s <= -delta) throw Error("extend_1d: evaluation below -delta");
    return -f(reflection_function(a, b, s));
  });
  out.eta = cutoff_1d(-0.75 * delta, -0.5 * delta, u.support_end + 1.0,
                      u.support_end + 2.0);
  const ScalarField raw = out.raw;
  const ScalarField eta = out.eta;
  out.extended = ScalarField(1, [raw, eta, delta](const Vec& x) {
    const double s = x[0];
    if (s <= -0.75 * delta) return 0.0;
    const double e = eta(x);
    return e == 0.0 ? 0.0 : e * raw(x);
  });
  return out;
}

HalfspaceExtension extend_halfspace(const ScalarField& u,
                                    const EllipticOperator& L, double R,
                                    double admissibility_tol, double fd_h) {
  const int n = L.dim();
  if (n < 2) throw Error("extend_halfspace: needs dimension >= 2 (use extend_1d)");
  if (u.dimension() != n) throw Error("extend_halfspace: dimension mismatch");
  if (!(R > 0.0)) throw Error("extend_halfspace: R must be positive");

  // seam sample lattice {(x', 0)}, kept clear of the tangential edges so
  // the finite-difference stencils stay inside Q^{0,+}
  std::vector<Vec> seam;
  {
    const int per = 9;
    std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
    for (;;) {
      Vec p = Vec::Zero(n);
      for (int i = 0; i < n - 1; ++i) {
        p[i] = (-R + 2.0 * R * idx[static_cast<std::size_t>(i)] / (per - 1)) * 0.9;
      }
      seam.push_back(p);
      int axis = n - 2;
      while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per) {
        idx[static_cast<std::size_t>(axis)] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }

  HalfspaceExtension out;
  out.R = R;
  StencilSides sides = StencilSides::one_sided(n - 1, +1, n);
  for (const Vec& p : seam) {
    out.max_u_on_seam = std::max(out.max_u_on_seam, std::abs(u(p)));
    out.max_Lu_on_seam = std::max(out.max_Lu_on_seam, std::abs(apply(L, u, p, fd_h, sides)));
    for (int i = 0; i < n - 1; ++i) {
      out.max_cross_term = std::max(out.max_cross_term, std::abs(L.a(i, n - 1)(p)));
      out.max_cross_term = std::max(out.max_cross_term, std::abs(L.a(n - 1, i)(p)));
    }
  }
  if (out.max_cross_term > admissibility_tol) {
    throw Error("extend_halfspace: cross terms a_in reach " +
                std::to_string(out.max_cross_term) +
                " on the seam; eliminate them first (build_flattening_map)");
  }
  if (out.max_u_on_seam > admissibility_tol) {
    throw Error("extend_halfspace: u on the seam reaches " +
                std::to_string(out.max_u_on_seam) + " (tol " +
                std::to_string(admissibility_tol) + ")");
  }
  if (out.max_Lu_on_seam > admissibility_tol) {
    throw Error("extend_halfspace: Lu on the seam reaches " +
                std::to_string(out.max_Lu_on_seam) + " (tol " +
                std::to_string(admissibility_tol) + ")");
  }

  out.delta = common_delta(L.lambda, L.Lambda, R);
  const double delta = out.delta;
  const ScalarField uc = u;
  const Coefficient ann = L.a(n - 1, n - 1);
  const Coefficient bn = L.b(n - 1);
  out.raw = ScalarField(n, [uc, ann, bn, delta, n](const Vec& x) {
    const double xn = x[n - 1];
    if (xn >= 0.0) return uc(x);
    if (xn <= -delta) throw Error("extend_halfspace: evaluation below -delta");
    Vec base = x;
    base[n - 1] = 0.0;
    const double a = ann(base);
    const double b = bn(base);
    Vec y = x;
    y[n - 1] = reflection_function(a, b, xn);
    return -uc(y);
  });
  const ScalarField eta = cutoff_1d(-0.75 * delta, -0.5 * delta, R + 1.0, R + 2.0);
  const ScalarField raw = out.raw;
  out.extended = ScalarField(n, [raw, eta, delta, n](const Vec& x) {
    const double xn = x[n - 1];
    if (xn <= -0.75 * delta) return 0.0;
    const double e = eta(vec1(xn));
    return e == 0.0 ? 0.0 : e * raw(x);
  });
  return out;
}

namespace {

// quadratic extrapolation of the one-sided limit at 0 from three nodes
double extrapolate(const std::function<double(double)>& f, double h, int side) {
  const double s = side;
  return 3.0 * f(s * h) - 3.0 * f(2.0 * s * h) + f(3.0 * s * h);
}

SeamReport seam_along_axis(const RealFn& f, const Vec& base, int axis, int n,
                           double alpha, double h, double window) {
  auto line = [&](double t) {
    Vec p = base;
    p[axis] += t;
    return f(p);
  };
  SeamReport rep;
  rep.h = h;
  rep.alpha = alpha;
  rep.value_mismatch = std::abs(extrapolate(line, h, +1) - extrapolate(line, h, -1));
  const double d1p = one_sided_d1(line, 0.0, h);
  const double d1m = -one_sided_d1([&](double t) { return line(-t); }, 0.0, h);
  rep.first_mismatch = std::abs(d1p - d1m);
  const double d2p = one_sided_d2(line, 0.0, h);
  const double d2m = one_sided_d2([&](double t) { return line(-t); }, 0.0, h);
  rep.second_mismatch = std::abs(d2p - d2m);

  // mixed one-sided d_i d_n derivatives for n >= 2
  for (int i = 0; i < n; ++i) {
    if (i == axis) continue;
    auto di = [&](double t) {
      Vec p = base;
      p[axis] += t;
      RealFn fc = f;
      return fd_d1(fc, p, i, h, 0);
    };
    const double mp = one_sided_d1(di, 0.0, h);
    const double mm = -one_sided_d1([&](double t) { return di(-t); }, 0.0, h);
    rep.second_mismatch = std::max(rep.second_mismatch, std::abs(mp - mm));
  }

  // sampled Hoelder quotient of the second derivative near the seam
  std::vector<double> ts, d2s;
  const int m = 8;
  for (int k = 1; k <= m; ++k) {
    const double t = window * k / m;
    for (double sgn : {-1.0, 1.0}) {
      const double tt = sgn * t;
      // keep the 4-point one-sided stencil away from the seam crossing
      const int side = tt >= 0.0 ? +1 : -1;
      auto shifted = [&](double s) { return line(tt + side * s); };
      ts.push_back(tt);
      d2s.push_back(one_sided_d2(shifted, 0.0, h));
    }
  }
  ts.push_back(0.0);
  d2s.push_back(d2p);
  for (std::size_t i = 0; i < ts.size(); ++i) {
    for (std::size_t j = i + 1; j < ts.size(); ++j) {
      const double dist = std::abs(ts[i] - ts[j]);
      if (dist <= 0.0) continue;
      rep.second_holder = std::max(
          rep.second_holder, std::abs(d2s[i] - d2s[j]) / std::pow(dist, alpha));
    }
  }
  return rep;
}

}  // namespace

SeamReport verify_extension_smoothness(const ScalarField& Eu, double alpha,
                                       double h, double window) {
  RealFn f = [&Eu](const Vec& x) { return Eu(x); };
  return seam_along_axis(f, Vec::Zero(1), 0, 1, alpha, h, window);
}

SeamReport verify_extension_smoothness(const ScalarField& Eu,
                                       const std::vector<Vec>& seam_points,
                                       double alpha, double h, double window) {
  if (seam_points.empty()) throw Error("verify_extension_smoothness: no seam points");
  const int n = Eu.dimension();
  RealFn f = [&Eu](const Vec& x) { return Eu(x); };
  SeamReport worst;
  worst.h = h;
  worst.alpha = alpha;
  for (const Vec& p : seam_points) {
    const SeamReport r = seam_along_axis(f, p, n - 1, n, alpha, h, window);
    worst.value_mismatch = std::max(worst.value_mismatch, r.value_mismatch);
    worst.first_mismatch = std::max(worst.first_mismatch, r.first_mismatch);
    worst.second_mismatch = std::max(worst.second_mismatch, r.second_mismatch);
    worst.second_holder = std::max(worst.second_holder, r.second_holder);
  }
  return worst;
}

}  // namespace ellx
