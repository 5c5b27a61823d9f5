#include "ellx/comparison.hpp"

#include <cmath>
#include <cstdio>
#include <string>

#include "ellx/error.hpp"

namespace ellx {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// v(x) = sign * (G + (e^{gamma d} - e^{gamma (x1 - lo1)}) F / lambda)
ScalarField slab_profile(int n, double sign, double G, double gamma, double d,
                         double lo1, double F, double lambda) {
  const std::string body = fmt(G) + " + (" + fmt(std::exp(gamma * d)) +
                           " - exp(" + fmt(gamma) + "*(x1 - " + fmt(lo1) +
                           ")))*" + fmt(F / lambda);
  const std::string src = sign > 0 ? body : "-(" + body + ")";
  return ScalarField::from_expr(src, n);
}

}  // namespace

ComparisonPair build_comparison_pair(const EllipticOperator& L,
                                     const ScalarField& f, const ScalarField& g,
                                     const DomainSpec& domain, double h) {
  const int n = L.dim();
  const DomainSampling samp = sample_domain(domain, h);
  // c <= 0 sampled
  for (long fl : samp.flats) {
    const Vec p = samp.mesh.point_flat(fl);
    const double c = L.c_at(p);
    if (c > 1e-12) {
      throw Error("build_comparison_pair: c = " + std::to_string(c) + " > 0 at a sample; "
                  "shift the operator by omega = sup c first (EllipticOperator::shifted)");
    }
  }
  const auto [lo, hi] = domain.bounding_box();
  const double lo1 = lo[0];
  const double d = hi[0] - lo[0];

  double G = 0.0;
  for (const Vec& p : domain.boundary_points()) G = std::max(G, std::abs(g(p)));
  double F = 0.0;
  for (long fl : samp.flats) F = std::max(F, std::abs(f(samp.mesh.point_flat(fl))));
  for (const Vec& p : samp.boundary) F = std::max(F, std::abs(f(p)));

  const double ratio = L.Lambda / L.lambda;
  double gamma = 0.0;
  bool found = false;
  for (int j = 1; j <= 60 && !found; ++j) {
    gamma = ratio + j;
    // analytic Lv+ on the sample mesh
    bool ok = true;
    for (long fl : samp.flats) {
      const Vec p = samp.mesh.point_flat(fl);
      const double eg = std::exp(gamma * (p[0] - lo1));
      const double vplus = G + (std::exp(gamma * d) - eg) * F / L.lambda;
      const Mat a = L.a_at(p);
      const Vec b = L.b_at(p);
      const double lv = -(a(0, 0) * gamma * gamma + b[0] * gamma) * eg * F / L.lambda +
                        L.c_at(p) * vplus;
      if (!(lv <= -F + 1e-6 * std::max(1.0, F))) {
        ok = false;
        break;
      }
    }
    found = ok;
  }
  if (!found) {
    throw Error("build_comparison_pair: no admissible gamma up to Lambda/lambda + 60");
  }

  ComparisonPair pair;
  pair.gamma = gamma;
  pair.slab_width = d;
  pair.slab_offset = lo1;
  pair.sup_g = G;
  pair.f_norm = F;
  pair.v_plus = slab_profile(n, +1.0, G, gamma, d, lo1, F, L.lambda);
  pair.v_minus = slab_profile(n, -1.0, G, gamma, d, lo1, F, L.lambda);
  return pair;
}

SandwichReport check_sandwich(const ComparisonPair& pair, const GridFunction& u,
                              const DomainSpec& domain, double tol) {
  SandwichReport rep;
  const Mesh& mesh = u.mesh();
  std::vector<int> idx;
  for (long fl = 0; fl < mesh.size(); ++fl) {
    mesh.unflat(fl, idx);
    const Vec p = mesh.point(idx);
    if (!domain.contains(p) && domain.boundary_distance(p) > 1e-12) continue;
    const double v = u.value(fl);
    rep.worst_low = std::max(rep.worst_low, pair.v_minus(p) - v);
    rep.worst_high = std::max(rep.worst_high, v - pair.v_plus(p));
  }
  rep.ok = rep.worst_low <= tol && rep.worst_high <= tol;
  return rep;
}

double interior_sup_bound(const EllipticOperator& L, const ScalarField& f,
                          const ScalarField& g, const DomainSpec& domain,
                          double h) {
  const ComparisonPair pair = build_comparison_pair(L, f, g, domain, h);
  // (e^{gamma d} - e^{gamma (x1-lo1)}) is largest at x1 = lo1
  return pair.sup_g +
         (std::exp(pair.gamma * pair.slab_width) - 1.0) * pair.f_norm / L.lambda;
}

}  // namespace ellx
