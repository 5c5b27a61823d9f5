#include "ellx/norms.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "ellx/error.hpp"

namespace ellx {

std::vector<Vec> DomainSampling::points() const {
  std::vector<Vec> pts;
  pts.reserve(flats.size() + boundary.size());
  for (long f : flats) pts.push_back(mesh.point_flat(f));
  for (const Vec& b : boundary) pts.push_back(b);
  return pts;
}

DomainSampling sample_domain(const DomainSpec& dom, double h, bool include_boundary) {
  DomainSampling s;
  const auto [lo, hi] = dom.bounding_box();
  s.mesh = Mesh::over_box(lo, hi, h);
  s.inside.assign(static_cast<std::size_t>(s.mesh.size()), 0);
  std::vector<int> idx;
  for (long f = 0; f < s.mesh.size(); ++f) {
    s.mesh.unflat(f, idx);
    const Vec p = s.mesh.point(idx);
    if (dom.contains(p) || dom.boundary_distance(p) <= 1e-12) {
      s.inside[static_cast<std::size_t>(f)] = 1;
      s.flats.push_back(f);
    }
  }
  if (s.flats.empty()) throw Error("sample_domain: empty mesh over domain");
  if (include_boundary && dom.kind() != DomainSpec::Kind::box &&
      dom.kind() != DomainSpec::Kind::half_cuboid) {
    // box lattices already contain their boundary nodes
    s.boundary = dom.boundary_points();
  }
  return s;
}

double sup_norm(const ScalarField& u, const DomainSpec& dom, double h) {
  const DomainSampling s = sample_domain(dom, h);
  double m = 0.0;
  long count = 0;
  for (long f : s.flats) {
    m = std::max(m, std::abs(u(s.mesh.point_flat(f))));
    ++count;
  }
  for (const Vec& b : s.boundary) {
    m = std::max(m, std::abs(u(b)));
    ++count;
  }
  if (count == 0) throw Error("sup_norm: empty sample mesh");
  return m;
}

double sup_norm(const GridFunction& u) { return u.max_abs(); }

double sup_norm(const GridFunction& u, const DomainSpec& dom) {
  double m = 0.0;
  long count = 0;
  std::vector<int> idx;
  for (long f = 0; f < u.mesh().size(); ++f) {
    u.mesh().unflat(f, idx);
    const Vec p = u.mesh().point(idx);
    if (dom.contains(p) || dom.boundary_distance(p) <= 1e-12) {
      m = std::max(m, std::abs(u.value(f)));
      ++count;
    }
  }
  if (count == 0) throw Error("sup_norm: no mesh nodes inside domain");
  return m;
}

namespace {

struct PairScan {
  const std::vector<Vec>& pts;
  const std::vector<double>& vals;
  double alpha;
  // optional per-point weights, combined as min(w_i, w_j)
  const std::vector<double>* weights = nullptr;

  double quotient(std::size_t i, std::size_t j) const {
    const double dist = (pts[i] - pts[j]).norm();
    if (dist <= 0.0) return 0.0;
    double q = std::abs(vals[i] - vals[j]) / std::pow(dist, alpha);
    if (weights) q *= std::min((*weights)[i], (*weights)[j]);
    return q;
  }
};

double scan_pairs(const PairScan& scan, const SampleStrategy& strategy,
                  const std::vector<std::pair<std::size_t, std::size_t>>& neighbor_pairs) {
  const std::size_t n = scan.pts.size();
  if (n < 2) throw Error("holder_seminorm: need at least 2 sample points");
  double best = 0.0;
  if (n <= strategy.exhaustive_limit) {
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 1; j < n; ++j) best = std::max(best, scan.quotient(i, j));
    }
    return best;
  }
  for (const auto& [i, j] : neighbor_pairs) best = std::max(best, scan.quotient(i, j));
  std::mt19937_64 rng(strategy.seed);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  for (std::size_t k = 0; k < strategy.random_pairs; ++k) {
    const std::size_t i = pick(rng);
    const std::size_t j = pick(rng);
    if (i != j) best = std::max(best, scan.quotient(i, j));
  }
  return best;
}

// lattice-adjacent pairs among the in-domain nodes (plus each boundary
// sample paired with its nearest lattice node)
std::vector<std::pair<std::size_t, std::size_t>> lattice_neighbor_pairs(
    const DomainSampling& s) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  std::vector<long> rank(static_cast<std::size_t>(s.mesh.size()), -1);
  for (std::size_t r = 0; r < s.flats.size(); ++r) {
    rank[static_cast<std::size_t>(s.flats[r])] = static_cast<long>(r);
  }
  const int n = s.mesh.dim();
  std::vector<int> idx;
  for (std::size_t r = 0; r < s.flats.size(); ++r) {
    s.mesh.unflat(s.flats[r], idx);
    for (int axis = 0; axis < n; ++axis) {
      if (idx[static_cast<std::size_t>(axis)] + 1 >= s.mesh.counts[static_cast<std::size_t>(axis)]) continue;
      std::vector<int> nb = idx;
      ++nb[static_cast<std::size_t>(axis)];
      const long nf = s.mesh.flat(nb);
      if (rank[static_cast<std::size_t>(nf)] >= 0) {
        pairs.emplace_back(r, static_cast<std::size_t>(rank[static_cast<std::size_t>(nf)]));
      }
    }
  }
  return pairs;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || alpha > 1.0) {
    throw Error("holder_seminorm: alpha must lie in (0, 1]");
  }
}

}  // namespace

double holder_seminorm(const ScalarField& u, double alpha, const DomainSpec& dom,
                       double h, const SampleStrategy& strategy) {
  check_alpha(alpha);
  const DomainSampling s = sample_domain(dom, h);
  const std::vector<Vec> pts = s.points();
  std::vector<double> vals;
  vals.reserve(pts.size());
  for (const Vec& p : pts) vals.push_back(u(p));
  auto neighbors = lattice_neighbor_pairs(s);
  // pair each boundary sample with the first lattice node as a stub; the
  // random stage covers boundary-interior pairs
  return scan_pairs(PairScan{pts, vals, alpha}, strategy, neighbors);
}

double holder_seminorm(const GridFunction& u, double alpha,
                       const SampleStrategy& strategy) {
  check_alpha(alpha);
  const Mesh& mesh = u.mesh();
  std::vector<Vec> pts;
  pts.reserve(static_cast<std::size_t>(mesh.size()));
  std::vector<int> idx;
  for (long f = 0; f < mesh.size(); ++f) {
    mesh.unflat(f, idx);
    pts.push_back(mesh.point(idx));
  }
  std::vector<std::pair<std::size_t, std::size_t>> neighbors;
  for (long f = 0; f < mesh.size(); ++f) {
    mesh.unflat(f, idx);
    for (int axis = 0; axis < mesh.dim(); ++axis) {
      if (idx[static_cast<std::size_t>(axis)] + 1 >= mesh.counts[static_cast<std::size_t>(axis)]) continue;
      std::vector<int> nb = idx;
      ++nb[static_cast<std::size_t>(axis)];
      neighbors.emplace_back(static_cast<std::size_t>(f),
                             static_cast<std::size_t>(mesh.flat(nb)));
    }
  }
  return scan_pairs(PairScan{pts, u.values(), alpha}, strategy, neighbors);
}

namespace {

double weighted_sup(const std::vector<Vec>& pts, const std::vector<double>& vals,
                    const DomainSpec& omega0, double beta,
                    const BoundaryPortion& portion) {
  if (beta < 0.0) throw Error("weighted_interior_norm: beta must be >= 0");
  double best = 0.0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = portion ? omega0.boundary_distance_excluding(pts[i], portion)
                             : omega0.boundary_distance(pts[i]);
    best = std::max(best, std::pow(d, beta) * std::abs(vals[i]));
  }
  return best;
}

}  // namespace

double weighted_interior_norm(const ScalarField& u, const DomainSpec& omega0,
                              double beta, double h, int order,
                              const BoundaryPortion& portion) {
  if (order != 0) throw Error("weighted_interior_norm: only order 0 is supported");
  const DomainSampling s = sample_domain(omega0, h, false);
  std::vector<Vec> pts;
  std::vector<double> vals;
  for (long f : s.flats) {
    const Vec p = s.mesh.point_flat(f);
    if (!omega0.contains(p)) continue;  // interior weight only
    pts.push_back(p);
    vals.push_back(u(p));
  }
  if (pts.empty()) throw Error("weighted_interior_norm: empty interior mesh");
  return weighted_sup(pts, vals, omega0, beta, portion);
}

double weighted_interior_norm(const GridFunction& u, const DomainSpec& omega0,
                              double beta, const BoundaryPortion& portion) {
  std::vector<Vec> pts;
  std::vector<double> vals;
  std::vector<int> idx;
  for (long f = 0; f < u.mesh().size(); ++f) {
    u.mesh().unflat(f, idx);
    const Vec p = u.mesh().point(idx);
    if (!omega0.contains(p)) continue;
    pts.push_back(p);
    vals.push_back(u.value(f));
  }
  if (pts.empty()) throw Error("weighted_interior_norm: empty interior mesh");
  return weighted_sup(pts, vals, omega0, beta, portion);
}

double weighted_holder_seminorm(const ScalarField& u, double alpha, double beta,
                                const DomainSpec& omega0, double h,
                                const SampleStrategy& strategy) {
  check_alpha(alpha);
  if (beta < 0.0) throw Error("weighted_holder_seminorm: beta must be >= 0");
  const DomainSampling s = sample_domain(omega0, h, false);
  std::vector<Vec> pts;
  std::vector<double> vals;
  std::vector<double> weights;
  for (long f : s.flats) {
    const Vec p = s.mesh.point_flat(f);
    if (!omega0.contains(p)) continue;
    pts.push_back(p);
    vals.push_back(u(p));
    weights.push_back(std::pow(omega0.boundary_distance(p), beta));
  }
  PairScan scan{pts, vals, alpha};
  scan.weights = &weights;
  // neighbor pairs: consecutive points in lattice order approximate
  std::vector<std::pair<std::size_t, std::size_t>> neighbors;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) neighbors.emplace_back(i, i + 1);
  return scan_pairs(scan, strategy, neighbors);
}

double primed_c2alpha_norm(const ScalarField& u, const DomainSpec& omega0,
                           double alpha, double h, double fd_h) {
  // term 1: unweighted sup
  const double t0 = weighted_interior_norm(u, omega0, 0.0, h);
  // gradient and Hessian entry fields via finite differences
  RealFn eval = [&u](const Vec& x) { return u(x); };
  const int n = u.dimension();
  double t1 = 0.0, t2 = 0.0, t3 = 0.0;
  const DomainSampling s = sample_domain(omega0, h, false);
  std::vector<Vec> pts;
  for (long f : s.flats) {
    const Vec p = s.mesh.point_flat(f);
    if (omega0.contains(p) && omega0.boundary_distance(p) > 2.0 * fd_h) pts.push_back(p);
  }
  if (pts.empty()) throw Error("primed_c2alpha_norm: empty interior mesh");
  std::vector<double> dists;
  std::vector<std::vector<double>> hessians(pts.size());
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const double d = omega0.boundary_distance(pts[i]);
    dists.push_back(d);
    const Vec g = fd_gradient(eval, pts[i], fd_h);
    double gmax = 0.0;
    for (int k = 0; k < n; ++k) gmax = std::max(gmax, std::abs(g[k]));
    t1 = std::max(t1, d * gmax);
    const Mat hess = fd_hessian(eval, pts[i], fd_h);
    double hmax = 0.0;
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        hmax = std::max(hmax, std::abs(hess(a, b)));
        hessians[i].push_back(hess(a, b));
      }
    }
    t2 = std::max(t2, d * d * hmax);
  }
  // weighted Hoelder quotient of the Hessian entries, pair weight
  // min(d(x), d(y))^(2+alpha)
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      const double dist = (pts[i] - pts[j]).norm();
      if (dist <= 0.0) continue;
      double dv = 0.0;
      for (std::size_t k = 0; k < hessians[i].size(); ++k) {
        dv = std::max(dv, std::abs(hessians[i][k] - hessians[j][k]));
      }
      const double w = std::pow(std::min(dists[i], dists[j]), 2.0 + alpha);
      t3 = std::max(t3, w * dv / std::pow(dist, alpha));
    }
  }
  return t0 + t1 + t2 + t3;
}

NormReport compute_norm_report(const ScalarField& u, const DomainSpec& dom,
                               double alpha, double h) {
  NormReport r;
  r.holder_alpha = alpha;
  r.sup_norm = sup_norm(u, dom, h);
  r.holder_seminorm = holder_seminorm(u, alpha, dom, h);
  for (double beta : {0.0, 1.0, 2.0}) {
    r.weighted_values[{0, beta}] = weighted_interior_norm(u, dom, beta, h);
  }
  r.sample_count = static_cast<long>(sample_domain(dom, h).flats.size());
  return r;
}

}  // namespace ellx
