#include "ellx/transform.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "ellx/error.hpp"

namespace ellx {

ScalarField pullback(const Diffeomorphism& F, const ScalarField& g) {
  if (F.dim() != g.dimension()) throw Error("pullback: dimension mismatch");
  Diffeomorphism Fc = F;
  ScalarField gc = g;
  return ScalarField(F.dim(), [Fc, gc](const Vec& x) { return gc(Fc(x)); });
}

namespace {

struct PushforwardContext {
  EllipticOperator L1;
  Diffeomorphism F;
};

Vec invert_for_coeff(const PushforwardContext& ctx, const Vec& y) {
  return ctx.F.inverse(y, y);
}

}  // namespace

TransformedOperator pushforward_operator(const EllipticOperator& L1,
                                         const Diffeomorphism& F,
                                         double sample_radius,
                                         const Vec& sample_center) {
  const int n = L1.dim();
  if (F.dim() != n) throw Error("pushforward_operator: dimension mismatch");
  const Vec center = sample_center.size() == n ? sample_center : Vec::Zero(n);
  auto ctx = std::make_shared<PushforwardContext>(PushforwardContext{L1, F});

  std::vector<std::vector<Coefficient>> a(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      a[static_cast<std::size_t>(k)].push_back(Coefficient(n, [ctx, k, l](const Vec& y) {
        const Vec x = invert_for_coeff(*ctx, y);
        const Mat J = ctx->F.jacobian(x);
        const Mat ax = ctx->L1.a_at(x);
        return (J * ax * J.transpose())(k, l);
      }));
    }
  }
  std::vector<Coefficient> b;
  for (int k = 0; k < n; ++k) {
    b.push_back(Coefficient(n, [ctx, k](const Vec& y) {
      const Vec x = invert_for_coeff(*ctx, y);
      const Mat J = ctx->F.jacobian(x);
      const Mat ax = ctx->L1.a_at(x);
      const auto H = ctx->F.second_derivatives(x);
      const double drift = (ax.array() * H[static_cast<std::size_t>(k)].array()).sum();
      return drift + (J * ctx->L1.b_at(x))[k];
    }));
  }
  Coefficient c(n, [ctx](const Vec& y) {
    return ctx->L1.c_at(invert_for_coeff(*ctx, y));
  });

  // ellipticity survives congruence with constant lambda * sigma_min(DF)^2
  double sigma_min_sq = std::numeric_limits<double>::infinity();
  double coeff_bound = L1.Lambda;
  const double r = std::isfinite(F.valid_radius)
                       ? std::min(sample_radius, F.valid_radius)
                       : sample_radius;
  std::vector<Vec> samples;
  samples.push_back(center);
  const int per_axis = 5;
  std::vector<int> idx(static_cast<std::size_t>(n), 0);
  for (;;) {
    Vec p = center;
    for (int i = 0; i < n; ++i) p[i] += -r + 2.0 * r * idx[static_cast<std::size_t>(i)] / (per_axis - 1);
    if ((p - center).norm() <= r) samples.push_back(p);
    int axis = n - 1;
    while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per_axis) {
      idx[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  for (const Vec& p : samples) {
    const Mat J = F.jacobian(p);
    Eigen::JacobiSVD<Mat> svd(J);
    const double s = svd.singularValues().minCoeff();
    sigma_min_sq = std::min(sigma_min_sq, s * s);
    const Mat ap = L1.a_at(p);
    const Mat at = J * ap * J.transpose();
    coeff_bound = std::max(coeff_bound, at.cwiseAbs().maxCoeff());
    const auto H = F.second_derivatives(p);
    const Vec bp = L1.b_at(p);
    for (int k = 0; k < n; ++k) {
      const double drift = (ap.array() * H[static_cast<std::size_t>(k)].array()).sum() +
                           (J * bp)[k];
      coeff_bound = std::max(coeff_bound, std::abs(drift));
    }
  }
  const double lambda2 = L1.lambda * sigma_min_sq;
  if (!(lambda2 > 0.0)) throw Error("pushforward_operator: transformed operator degenerates");

  EllipticOperator L2(n, std::move(a), std::move(b), std::move(c), lambda2,
                      coeff_bound, L1.coeff_regularity);
  return TransformedOperator{std::move(L2), F};
}

FlatteningMap build_flattening_map(const EllipticOperator& L1, double R,
                                   double det_floor) {
  if (!(R > 0.0)) throw Error("build_flattening_map: R must be positive");
  const int n = L1.dim();
  if (n < 2) throw Error("build_flattening_map: needs dimension >= 2");

  // a_nn > 0 on the flat face (guaranteed by ellipticity; verified)
  {
    const int per = 9;
    std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
    for (;;) {
      Vec p = Vec::Zero(n);
      for (int i = 0; i < n - 1; ++i) p[i] = -R + 2.0 * R * idx[static_cast<std::size_t>(i)] / (per - 1);
      if (p.norm() <= R) {
        const double ann = L1.a(n - 1, n - 1)(p);
        if (!(ann > 0.0)) {
          throw Error("build_flattening_map: a_nn = " + std::to_string(ann) +
                      " <= 0 on the flat face (ellipticity violation)");
        }
      }
      int axis = n - 2;
      while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per) {
        idx[static_cast<std::size_t>(axis)] = 0;
        --axis;
      }
      if (axis < 0) break;
    }
  }

  bool all_expr = L1.a(n - 1, n - 1).expression_backed();
  for (int i = 0; i < n - 1 && all_expr; ++i) all_expr = L1.a(i, n - 1).expression_backed();

  Diffeomorphism F = Diffeomorphism::identity(n);
  if (all_expr) {
    // symbolic g_i = -a_in(x', 0) / a_nn(x', 0)
    const Expr ann0 = L1.a(n - 1, n - 1).expr()->substituted(n - 1, 0.0);
    std::vector<Expr> comps;
    const Expr xn = Expr::variable(n - 1, n);
    for (int i = 0; i < n - 1; ++i) {
      const Expr ain0 = L1.a(i, n - 1).expr()->substituted(n - 1, 0.0);
      const Expr gi = -ain0 / ann0;
      comps.push_back(Expr::variable(i, n) + gi * xn);
    }
    comps.push_back(xn);
    F = Diffeomorphism::from_exprs(comps);
  } else {
    EllipticOperator L1c = L1;
    auto fwd = [L1c, n](const Vec& x) -> Vec {
      Vec base = x;
      base[n - 1] = 0.0;
      Vec y = x;
      const double ann = L1c.a(n - 1, n - 1)(base);
      for (int i = 0; i < n - 1; ++i) {
        y[i] += -(L1c.a(i, n - 1)(base) / ann) * x[n - 1];
      }
      return y;
    };
    F = Diffeomorphism(n, fwd);  // FD derivatives at fd_h
  }
  F.regularity = Regularity::c2_alpha;

  FlatteningMap out;
  out.R_prime = jacobian_radius(F, R, det_floor);
  F.valid_radius = out.R_prime;
  out.F = std::move(F);
  return out;
}

double verify_no_cross_terms(const TransformedOperator& L2,
                             const std::vector<Vec>& boundary_samples) {
  const int n = L2.op.dim();
  double worst = 0.0;
  for (const Vec& y : boundary_samples) {
    if (std::abs(y[n - 1]) > 1e-12) {
      throw Error("verify_no_cross_terms: sample is not on the flattened boundary");
    }
    for (int i = 0; i < n - 1; ++i) {
      worst = std::max(worst, std::abs(L2.op.a(i, n - 1)(y)));
      worst = std::max(worst, std::abs(L2.op.a(n - 1, i)(y)));
    }
  }
  return worst;
}

}  // namespace ellx
