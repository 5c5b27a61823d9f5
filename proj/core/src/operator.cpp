#include "ellx/operator.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ellx/error.hpp"

namespace ellx {

Coefficient::Coefficient(double constant) {
  f_ = [constant](const Vec&) { return constant; };
  expr_ = Expr::constant(constant);
}

Coefficient::Coefficient(Expr e) {
  expr_ = e;
  f_ = [e](const Vec& x) { return e(x); };
}

Coefficient::Coefficient(int dim, RealFn f) : f_(std::move(f)) {
  if (dim < 1) throw Error("Coefficient: bad dimension");
  if (!f_) throw Error("Coefficient: missing evaluator");
}

double Coefficient::d(int axis, const Vec& x) const {
  if (expr_) return expr_->derivative(axis)(x);
  return fd_d1(f_, x, axis, fd_h);
}

double Coefficient::d2(int i, int j, const Vec& x) const {
  if (expr_) return expr_->derivative(i).derivative(j)(x);
  return fd_cross(f_, x, i, j, fd_h);
}

EllipticOperator::EllipticOperator(int n, std::vector<std::vector<Coefficient>> a,
                                   std::vector<Coefficient> b, Coefficient c,
                                   double lambda_, double Lambda_, Regularity reg)
    : lambda(lambda_), Lambda(Lambda_), coeff_regularity(reg), n_(n),
      a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
  if (n_ < 1) throw Error("EllipticOperator: dimension must be >= 1");
  if (static_cast<int>(a_.size()) != n_) throw Error("EllipticOperator: a must be n x n");
  for (const auto& row : a_) {
    if (static_cast<int>(row.size()) != n_) throw Error("EllipticOperator: a must be n x n");
  }
  if (static_cast<int>(b_.size()) != n_) throw Error("EllipticOperator: b must have n entries");
  if (!(lambda > 0.0)) throw Error("EllipticOperator: ellipticity constant must be positive");
  if (!(Lambda > 0.0) || !std::isfinite(Lambda)) {
    throw Error("EllipticOperator: coefficient bound must be positive and finite");
  }
}

EllipticOperator EllipticOperator::laplacian(int n) {
  std::vector<std::vector<Coefficient>> a(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      a[static_cast<std::size_t>(i)].push_back(Coefficient(i == j ? 1.0 : 0.0));
    }
  }
  std::vector<Coefficient> b(static_cast<std::size_t>(n), Coefficient(0.0));
  return EllipticOperator(n, std::move(a), std::move(b), Coefficient(0.0), 1.0,
                          1.0, Regularity::c2_alpha);
}

EllipticOperator EllipticOperator::from_exprs(
    const std::vector<std::vector<std::string>>& a,
    const std::vector<std::string>& b, const std::string& c, int n,
    double lambda, double Lambda, Regularity reg) {
  std::vector<std::vector<Coefficient>> ca(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      ca[static_cast<std::size_t>(i)].push_back(
          Coefficient(Expr::parse(a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)], n)));
    }
  }
  std::vector<Coefficient> cb;
  for (int i = 0; i < n; ++i) cb.push_back(Coefficient(Expr::parse(b[static_cast<std::size_t>(i)], n)));
  return EllipticOperator(n, std::move(ca), std::move(cb),
                          Coefficient(Expr::parse(c, n)), lambda, Lambda, reg);
}

const Coefficient& EllipticOperator::a(int i, int j) const {
  return a_[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
}

const Coefficient& EllipticOperator::b(int i) const {
  return b_[static_cast<std::size_t>(i)];
}

Mat EllipticOperator::a_at(const Vec& x) const {
  Mat m(n_, n_);
  for (int i = 0; i < n_; ++i) {
    for (int j = 0; j < n_; ++j) m(i, j) = a(i, j)(x);
  }
  return 0.5 * (m + m.transpose());
}

Vec EllipticOperator::b_at(const Vec& x) const {
  Vec v(n_);
  for (int i = 0; i < n_; ++i) v[i] = b(i)(x);
  return v;
}

double EllipticOperator::c_at(const Vec& x) const { return c_(x); }

EllipticOperator EllipticOperator::shifted(double omega) const {
  EllipticOperator out = *this;
  if (c_.expr()) {
    out.c_ = Coefficient(*c_.expr() - Expr::constant(omega));
  } else {
    const Coefficient old = c_;
    out.c_ = Coefficient(n_, [old, omega](const Vec& x) { return old(x) - omega; });
  }
  out.Lambda = Lambda + std::abs(omega);
  return out;
}

double apply(const EllipticOperator& L, const ScalarField& u, const Vec& x,
             double h, const StencilSides& sides,
             const std::optional<FdBounds>& bounds) {
  if (u.dimension() != L.dim()) throw Error("apply: dimension mismatch");
  RealFn eval = [&u](const Vec& p) { return u(p); };
  const Vec grad = fd_gradient(eval, x, h, sides, bounds);
  const Mat hess = fd_hessian(eval, x, h, sides, bounds);
  const Mat a = L.a_at(x);
  const Vec b = L.b_at(x);
  double acc = L.c_at(x) * u(x);
  for (int i = 0; i < L.dim(); ++i) {
    acc += b[i] * grad[i];
    for (int j = 0; j < L.dim(); ++j) acc += a(i, j) * hess(i, j);
  }
  return acc;
}

double apply(const EllipticOperator& L, const GridFunction& u,
             std::span<const int> node) {
  const Mesh& mesh = u.mesh();
  const int n = mesh.dim();
  if (n != L.dim()) throw Error("apply: dimension mismatch");
  StencilSides sides;
  sides.side.assign(static_cast<std::size_t>(n), 0);
  for (int i = 0; i < n; ++i) {
    const int c = mesh.counts[static_cast<std::size_t>(i)];
    const int k = node[static_cast<std::size_t>(i)];
    if (k == 0) {
      sides.side[static_cast<std::size_t>(i)] = +1;
    } else if (k == c - 1) {
      sides.side[static_cast<std::size_t>(i)] = -1;
    }
    const int needed = sides.side[static_cast<std::size_t>(i)] == 0 ? 1 : 3;
    if (k - (sides.side[static_cast<std::size_t>(i)] <= 0 ? needed : 0) < 0 ||
        k + (sides.side[static_cast<std::size_t>(i)] >= 0 ? needed : 0) > c - 1) {
      throw Error("apply: stencil does not fit in grid at axis " + std::to_string(i + 1));
    }
  }
  std::vector<int> base(node.begin(), node.end());
  RealFn eval = [&u, &mesh, &base](const Vec& p) {
    std::vector<int> idx(base.size());
    for (std::size_t i = 0; i < base.size(); ++i) {
      idx[i] = static_cast<int>(std::llround((p[static_cast<long>(i)] - mesh.origin[static_cast<long>(i)]) / mesh.h));
    }
    return u.value(idx);
  };
  return apply(L, ScalarField(n, eval), mesh.point(node), mesh.h, sides);
}

EllipticityReport verify_ellipticity(const EllipticOperator& L,
                                     const DomainSpec& domain, int n_points,
                                     int n_directions) {
  if (n_points < 1 || n_directions < 1) {
    throw Error("verify_ellipticity: need at least one point and direction");
  }
  const int n = L.dim();
  // directions: coordinate axes first, then deterministic random unit vectors
  std::vector<Vec> dirs;
  for (int i = 0; i < n; ++i) {
    Vec e = Vec::Zero(n);
    e[i] = 1.0;
    dirs.push_back(e);
  }
  std::mt19937_64 rng(0xd1ce);
  std::normal_distribution<double> gauss(0.0, 1.0);
  if (n == 2) {
    for (int k = 0; k < n_directions; ++k) {
      const double t = M_PI * k / n_directions;
      dirs.push_back(vec2(std::cos(t), std::sin(t)));
    }
  } else {
    for (int k = 0; k < n_directions; ++k) {
      Vec v(n);
      for (int i = 0; i < n; ++i) v[i] = gauss(rng);
      if (v.norm() > 1e-12) dirs.push_back(v / v.norm());
    }
  }
  // points: deterministic rejection sampling inside the domain
  const auto [lo, hi] = domain.bounding_box();
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  std::vector<Vec> pts;
  for (int tries = 0; tries < 100 * n_points && static_cast<int>(pts.size()) < n_points; ++tries) {
    Vec p(n);
    for (int i = 0; i < n; ++i) p[i] = lo[i] + (hi[i] - lo[i]) * uni(rng);
    if (domain.contains(p)) pts.push_back(p);
  }
  if (pts.empty()) throw Error("verify_ellipticity: could not sample the domain");

  EllipticityReport rep;
  rep.lambda_est = std::numeric_limits<double>::infinity();
  for (const Vec& p : pts) {
    const Mat a = L.a_at(p);
    for (const Vec& xi : dirs) {
      const double q = xi.dot(a * xi) / xi.squaredNorm();
      if (q < rep.lambda_est) {
        rep.lambda_est = q;
        rep.worst_point = p;
        rep.worst_direction = xi;
      }
    }
  }
  rep.ok = rep.lambda_est >= L.lambda - 1e-9;
  return rep;
}

DissipativityReport dissipativity_margin(const EllipticOperator& L,
                                         const GridFunction& u,
                                         const DomainSpec& domain) {
  const Mesh& mesh = u.mesh();
  if (u.max_abs() == 0.0) {
    throw Error("dissipativity_margin: u is identically zero (the inequality is trivial)");
  }
  double best = -1.0;
  std::vector<int> best_idx;
  std::vector<int> idx;
  for (long f = 0; f < mesh.size(); ++f) {
    mesh.unflat(f, idx);
    const Vec p = mesh.point(idx);
    if (!domain.contains(p)) {
      if (std::abs(u.value(f)) > 1e-9) {
        throw Error("dissipativity_margin: u does not vanish on the boundary "
                    "(|u| = " + std::to_string(std::abs(u.value(f))) + ")");
      }
      continue;
    }
    if (std::abs(u.value(f)) > best) {
      best = std::abs(u.value(f));
      best_idx = idx;
    }
  }
  if (best_idx.empty()) throw Error("dissipativity_margin: no interior mesh nodes");
  DissipativityReport rep;
  rep.x_star = mesh.point(best_idx);
  rep.u_at_star = u.value(best_idx);
  const double lu = apply(L, u, best_idx);
  rep.margin = (rep.u_at_star >= 0.0 ? 1.0 : -1.0) * lu;
  return rep;
}

double sup_c_omega(const EllipticOperator& L, const DomainSpec& domain, double h,
                   double alpha, double c_holder_norm) {
  const DomainSampling s = sample_domain(domain, h);
  double m = -std::numeric_limits<double>::infinity();
  for (long f : s.flats) m = std::max(m, L.c_at(s.mesh.point_flat(f)));
  for (const Vec& p : s.boundary) m = std::max(m, L.c_at(p));
  return m + c_holder_norm * std::pow(h, alpha);
}

MaxPrincipleReport max_principle_check(const GridFunction& u,
                                       const EllipticOperator& L,
                                       const ScalarField& f,
                                       const DomainSpec& domain, double fd_tol) {
  const Mesh& mesh = u.mesh();
  MaxPrincipleReport rep;
  rep.tol = fd_tol;
  rep.lu_min = std::numeric_limits<double>::infinity();
  rep.lu_max = -std::numeric_limits<double>::infinity();
  rep.sup_interior = -std::numeric_limits<double>::infinity();
  rep.inf_interior = std::numeric_limits<double>::infinity();
  rep.sup_boundary_plus = 0.0;
  rep.sup_boundary_minus = 0.0;
  rep.sup_abs_boundary = 0.0;

  const bool lattice_boundary = domain.kind() == DomainSpec::Kind::box ||
                                domain.kind() == DomainSpec::Kind::half_cuboid;
  std::vector<int> idx;
  bool have_interior = false;
  for (long fl = 0; fl < mesh.size(); ++fl) {
    mesh.unflat(fl, idx);
    const Vec p = mesh.point(idx);
    const double v = u.value(fl);
    const bool interior = domain.contains(p, mesh.h * 1e-9);
    if (interior) {
      have_interior = true;
      rep.sup_interior = std::max(rep.sup_interior, v);
      rep.inf_interior = std::min(rep.inf_interior, v);
      rep.sup_abs_interior = std::max(rep.sup_abs_interior, std::abs(v));
      // Lu - f away from the edge rows where central stencils fit
      bool stencil_ok = true;
      for (int i = 0; i < mesh.dim(); ++i) {
        const int k = idx[static_cast<std::size_t>(i)];
        stencil_ok = stencil_ok && k >= 1 && k <= mesh.counts[static_cast<std::size_t>(i)] - 2;
      }
      if (stencil_ok) {
        const double lu = apply(L, u, idx) - f(p);
        rep.lu_min = std::min(rep.lu_min, lu);
        rep.lu_max = std::max(rep.lu_max, lu);
      }
    } else if (lattice_boundary) {
      rep.sup_boundary_plus = std::max(rep.sup_boundary_plus, std::max(v, 0.0));
      rep.sup_boundary_minus = std::max(rep.sup_boundary_minus, std::max(-v, 0.0));
      rep.sup_abs_boundary = std::max(rep.sup_abs_boundary, std::abs(v));
    }
  }
  if (!lattice_boundary) {
    for (const Vec& p : domain.boundary_points()) {
      const double v = u.interp(p);
      rep.sup_boundary_plus = std::max(rep.sup_boundary_plus, std::max(v, 0.0));
      rep.sup_boundary_minus = std::max(rep.sup_boundary_minus, std::max(-v, 0.0));
      rep.sup_abs_boundary = std::max(rep.sup_abs_boundary, std::abs(v));
    }
  }
  if (!have_interior) throw Error("max_principle_check: no interior nodes");

  rep.checked_super = rep.lu_min >= -fd_tol;   // Lu >= 0 sampled
  rep.checked_sub = rep.lu_max <= fd_tol;      // Lu <= 0 sampled
  rep.checked_equal = rep.checked_super && rep.checked_sub;
  double worst = 0.0;
  if (rep.checked_super) {
    worst = std::max(worst, rep.sup_interior - rep.sup_boundary_plus);
  }
  if (rep.checked_sub) {
    worst = std::max(worst, -rep.sup_boundary_minus - rep.inf_interior);
  }
  if (rep.checked_equal) {
    // sup over the closure equals the boundary sup iff the interior never exceeds it
    worst = std::max(worst, rep.sup_abs_interior - rep.sup_abs_boundary);
  }
  rep.worst_violation = worst;
  rep.ok = worst <= fd_tol;
  return rep;
}

}  // namespace ellx
