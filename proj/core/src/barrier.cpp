#include "ellx/barrier.hpp"

#include <cmath>
#include <string>

#include "ellx/error.hpp"

namespace ellx {

namespace {

// sigma-dependent radial part of Lw at tau = 1, c excluded:
//   q(x) = sigma [ r^{-sigma-2} (sum a_ii + b . (x-y)) - (sigma+2) r^{-sigma-4} (x-y)^T a (x-y) ]
double radial_part(const EllipticOperator& L, const Vec& x, const Vec& center,
                   double sigma) {
  const Vec rel = x - center;
  const double r = rel.norm();
  const Mat a = L.a_at(x);
  const Vec b = L.b_at(x);
  const double trace_term = a.trace() + b.dot(rel);
  const double quad = rel.dot(a * rel);
  return sigma * (std::pow(r, -sigma - 2.0) * trace_term -
                  (sigma + 2.0) * std::pow(r, -sigma - 4.0) * quad);
}

}  // namespace

double barrier_Lw(const EllipticOperator& L, const Vec& x, const Vec& center,
                  double R, double sigma, double tau) {
  const double r = (x - center).norm();
  const double w = tau * (std::pow(R, -sigma) - std::pow(r, -sigma));
  return tau * radial_part(L, x, center, sigma) + L.c_at(x) * w;
}

BarrierNet build_barrier(const EllipticOperator& L, const ScalarField& f,
                         const ScalarField& g, const Vec& x0,
                         const Vec& sphere_center, double sphere_R,
                         const std::vector<double>& epsilons,
                         const DomainSpec& domain, double h) {
  if (!(sphere_R > 0.0)) throw Error("build_barrier: sphere radius must be positive");
  if (std::abs((x0 - sphere_center).norm() - sphere_R) > 1e-9) {
    throw Error("build_barrier: x0 does not lie on the given sphere");
  }
  // external sphere condition, sampled: every boundary point except x0
  // stays outside the closed ball
  for (const Vec& p : domain.boundary_points()) {
    if ((p - x0).norm() <= 1e-9) continue;
    const double d = (p - sphere_center).norm();
    if (d < sphere_R - 1e-9) {
      throw Error("build_barrier: external sphere condition fails at boundary point (" +
                  std::to_string(p[0]) + (p.size() > 1 ? ", " + std::to_string(p[1]) : "") +
                  "), distance " + std::to_string(d) + " < R = " + std::to_string(sphere_R));
    }
  }

  const DomainSampling samp = sample_domain(domain, h, false);
  std::vector<Vec> mesh_pts;
  for (long fl : samp.flats) {
    const Vec p = samp.mesh.point_flat(fl);
    if (domain.contains(p)) mesh_pts.push_back(p);
  }
  if (mesh_pts.empty()) throw Error("build_barrier: empty interior mesh");

  // C1 = sup (sum a_ii + b . (x - y)) over the interior mesh
  double C1 = 0.0;
  for (const Vec& p : mesh_pts) {
    const Vec rel = p - sphere_center;
    C1 = std::max(C1, L.a_at(p).trace() + L.b_at(p).dot(rel));
  }
  double sigma = std::max(1.0, std::ceil(C1 / L.lambda));
  double worst = 0.0;
  for (int doublings = 0; doublings < 60; ++doublings) {
    worst = -std::numeric_limits<double>::infinity();
    for (const Vec& p : mesh_pts) worst = std::max(worst, radial_part(L, p, sphere_center, sigma));
    if (worst < 0.0) break;
    sigma *= 2.0;
  }
  if (!(worst < 0.0)) throw Error("build_barrier: no sigma made the radial bracket negative");
  const double tau = 1.0 / (-worst);  // tau * radial_part <= -1 on the mesh

  BarrierNet net;
  net.x0 = x0;
  net.sphere_center = sphere_center;
  net.sphere_R = sphere_R;
  net.sigma = sigma;
  net.tau = tau;
  const Vec yc = sphere_center;
  const double R = sphere_R;
  net.w = ScalarField(L.dim(), [yc, R, sigma, tau](const Vec& x) {
    const double r = (x - yc).norm();
    return tau * (std::pow(R, -sigma) - std::pow(r, -sigma));
  });

  net.max_Lw = -std::numeric_limits<double>::infinity();
  for (const Vec& p : mesh_pts) {
    net.max_Lw = std::max(net.max_Lw, barrier_Lw(L, p, yc, R, sigma, tau));
  }
  if (net.max_Lw > -1.0 + 1e-6) {
    throw Error("build_barrier: sampled Lw reaches " + std::to_string(net.max_Lw) +
                " > -1 + 1e-6");
  }

  double sup_f = 0.0;
  for (const Vec& p : mesh_pts) sup_f = std::max(sup_f, std::abs(f(p)));
  const double gx0 = g(x0);

  for (double eps : epsilons) {
    if (!(eps > 0.0)) throw Error("build_barrier: epsilon must be positive");
    double k_eps = 0.0;
    for (const Vec& p : domain.boundary_points()) {
      if ((p - x0).norm() <= 1e-9) continue;
      const double need = g(p) - gx0 - eps;
      if (need <= 0.0) continue;
      const double wp = net.w(p);
      if (wp <= 0.0) {
        throw Error("build_barrier: w vanishes at a boundary point where g exceeds "
                    "g(x0) + eps; refine the sphere or enlarge eps");
      }
      k_eps = std::max(k_eps, need / wp);
    }
    // also bound from below so the barrier dominates the forcing
    const double k_prime = std::max(k_eps, sup_f + L.Lambda * std::abs(gx0));
    ScalarField w_copy = net.w;
    BarrierPair pair{
        eps, k_prime,
        ScalarField(L.dim(), [w_copy, gx0, eps, k_prime](const Vec& x) {
          return gx0 + eps + k_prime * w_copy(x);
        }),
        ScalarField(L.dim(), [w_copy, gx0, eps, k_prime](const Vec& x) {
          return gx0 - eps - k_prime * w_copy(x);
        })};
    net.pairs.push_back(std::move(pair));
  }
  return net;
}

}  // namespace ellx
