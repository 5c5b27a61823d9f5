#include "ellx/discretize.hpp"

#include <cmath>
#include <string>

#include "ellx/error.hpp"

namespace ellx {

namespace {

bool in_closure(const DomainSpec& d, const Vec& p, double tol) {
  return d.contains(p) || d.boundary_distance(p) <= tol;
}

}  // namespace

Discretization::Discretization(const EllipticOperator& L, const DomainSpec& domain,
                               double h)
    : L_(L), domain_(domain) {
  const auto [lo, hi] = domain.bounding_box();
  mesh_ = Mesh::over_box(lo, hi, h);
  const long size = mesh_.size();
  roles_.assign(static_cast<std::size_t>(size), NodeRole::exterior);
  rank_.assign(static_cast<std::size_t>(size), -1);

  const double btol = 1e-9 * h;
  std::vector<int> idx;
  for (long f = 0; f < size; ++f) {
    mesh_.unflat(f, idx);
    const Vec p = mesh_.point(idx);
    if (domain.contains(p, btol)) {
      roles_[static_cast<std::size_t>(f)] = NodeRole::interior;
      rank_[static_cast<std::size_t>(f)] = static_cast<long>(interior_.size());
      interior_.push_back(f);
    } else if (in_closure(domain, p, btol)) {
      roles_[static_cast<std::size_t>(f)] = NodeRole::boundary;
    }
  }
  if (interior_.empty()) throw Error("Discretization: no interior nodes at h = " + std::to_string(h));

  const int n = mesh_.dim();
  rows_.resize(interior_.size());
  for (std::size_t r = 0; r < interior_.size(); ++r) {
    const long f = interior_[r];
    mesh_.unflat(f, idx);
    const Vec p = mesh_.point(idx);
    Row& row = rows_[r];
    const Mat a = L_.a_at(p);
    const Vec b = L_.b_at(p);
    row.diag = L_.c_at(p);

    for (int axis = 0; axis < n; ++axis) {
      // resolve the two legs of the axis stencil
      double hminus = h, hplus = h;
      long fminus = -1, fplus = -1;
      Vec cross_minus, cross_plus;
      for (int dir : {-1, +1}) {
        std::vector<int> nb = idx;
        nb[static_cast<std::size_t>(axis)] += dir;
        bool grid_ok = nb[static_cast<std::size_t>(axis)] >= 0 &&
                       nb[static_cast<std::size_t>(axis)] < mesh_.counts[static_cast<std::size_t>(axis)];
        long nf = -1;
        if (grid_ok) {
          nf = mesh_.flat(nb);
          if (roles_[static_cast<std::size_t>(nf)] == NodeRole::exterior) grid_ok = false;
        }
        if (grid_ok) {
          if (dir < 0) {
            fminus = nf;
          } else {
            fplus = nf;
          }
        } else {
          const double theta = crossing_fraction(p, axis, dir);
          Vec cp = p;
          cp[axis] += dir * theta * h;
          if (dir < 0) {
            hminus = theta * h;
            cross_minus = cp;
          } else {
            hplus = theta * h;
            cross_plus = cp;
          }
        }
      }

      // second-order term at unequal spacings
      const double aii = a(axis, axis);
      const double w_minus = 2.0 / (hminus * (hminus + hplus));
      const double w_plus = 2.0 / (hplus * (hminus + hplus));
      const double w_diag = -2.0 / (hminus * hplus);
      double cm = aii * w_minus, cp2 = aii * w_plus;
      row.diag += aii * w_diag;

      // first-order term: central unless the Peclet number calls for upwind
      const double bi = b[axis];
      if (bi != 0.0) {
        const double peclet = std::abs(bi) * h / (2.0 * std::max(aii, 1e-300));
        if (peclet > 1.0) {
          if (bi > 0.0) {
            cp2 += bi / hplus;
            row.diag -= bi / hplus;
          } else {
            cm += -bi / hminus;
            row.diag -= -bi / hminus;
          }
        } else {
          cm += -bi * hplus / (hminus * (hminus + hplus));
          cp2 += bi * hminus / (hplus * (hminus + hplus));
          row.diag += bi * (hplus - hminus) / (hplus * hminus);
        }
      }

      if (fminus >= 0) {
        row.entries.push_back({fminus, cm});
      } else {
        row.off_grid.push_back({cross_minus, cm});
      }
      if (fplus >= 0) {
        row.entries.push_back({fplus, cp2});
      } else {
        row.off_grid.push_back({cross_plus, cp2});
      }

      // mixed second-order terms: 4-point cross stencil on the regular grid
      for (int axis2 = axis + 1; axis2 < n; ++axis2) {
        const double aij = a(axis, axis2) + a(axis2, axis);
        if (aij == 0.0) continue;
        const double w = aij / (4.0 * h * h);
        for (int d1 : {-1, +1}) {
          for (int d2 : {-1, +1}) {
            std::vector<int> nb = idx;
            nb[static_cast<std::size_t>(axis)] += d1;
            nb[static_cast<std::size_t>(axis2)] += d2;
            bool ok = true;
            for (int i = 0; i < n; ++i) {
              ok = ok && nb[static_cast<std::size_t>(i)] >= 0 &&
                   nb[static_cast<std::size_t>(i)] < mesh_.counts[static_cast<std::size_t>(i)];
            }
            long nf = -1;
            if (ok) {
              nf = mesh_.flat(nb);
              ok = roles_[static_cast<std::size_t>(nf)] != NodeRole::exterior;
            }
            if (!ok) {
              throw Error("Discretization: mixed-derivative stencil leaves the domain; "
                          "cross terms are only supported away from curved boundaries");
            }
            row.entries.push_back({nf, w * d1 * d2});
          }
        }
      }
    }
  }
}

double Discretization::crossing_fraction(const Vec& from, int axis, int dir) const {
  // bisection for the boundary crossing along the stencil leg
  double lo = 0.0, hi = 1.0;
  Vec probe = from;
  probe[axis] = from[axis] + dir * mesh_.h;
  if (domain_.contains(probe)) {
    // neighbor is geometrically inside but classified exterior (outside
    // the mesh); treat the full leg as boundary
    return 1.0;
  }
  for (int it = 0; it < 60; ++it) {
    const double mid = 0.5 * (lo + hi);
    probe[axis] = from[axis] + dir * mid * mesh_.h;
    if (domain_.contains(probe)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return std::max(hi, 1e-6);
}

const Discretization::Row& Discretization::row(long flat) const {
  const long r = rank_[static_cast<std::size_t>(flat)];
  if (r < 0) throw Error("Discretization: row requested for a non-interior node");
  return rows_[static_cast<std::size_t>(r)];
}

double Discretization::apply_row(long flat, const std::vector<double>& values,
                                 const ScalarField& g) const {
  const Row& r = row(flat);
  double acc = r.diag * values[static_cast<std::size_t>(flat)];
  for (const Entry& e : r.entries) acc += e.coeff * values[static_cast<std::size_t>(e.flat)];
  for (const OffGrid& o : r.off_grid) acc += o.coeff * g(o.point);
  return acc;
}

AssembledSystem assemble(const Discretization& dis, const ScalarField& f,
                         const ScalarField& g) {
  const auto& interior = dis.interior();
  const long m = static_cast<long>(interior.size());
  AssembledSystem sys;
  sys.A.resize(m, m);
  sys.rhs.resize(m);
  std::vector<Eigen::Triplet<double>> trip;
  std::vector<int> idx;
  for (long r = 0; r < m; ++r) {
    const long flat = interior[static_cast<std::size_t>(r)];
    dis.mesh().unflat(flat, idx);
    const Vec p = dis.mesh().point(idx);
    const auto& row = dis.row(flat);
    trip.emplace_back(static_cast<int>(r), static_cast<int>(r), row.diag);
    double rhs = f(p);
    for (const auto& e : row.entries) {
      const long rank = dis.rank_of(e.flat);
      if (rank >= 0) {
        trip.emplace_back(static_cast<int>(r), static_cast<int>(rank), e.coeff);
      } else {
        std::vector<int> bidx;
        dis.mesh().unflat(e.flat, bidx);
        rhs -= e.coeff * g(dis.mesh().point(bidx));
      }
    }
    for (const auto& o : row.off_grid) rhs -= o.coeff * g(o.point);
    sys.rhs[r] = rhs;
  }
  sys.A.setFromTriplets(trip.begin(), trip.end());
  return sys;
}

}  // namespace ellx
