#include "ellx/partition.hpp"

#include <cmath>
#include <memory>
#include <string>

#include "ellx/error.hpp"
#include "ellx/norms.hpp"

namespace ellx {

CoverSet CoverSet::ball(const Vec& center, double r, double shrink) {
  if (!(r > 0.0) || !(shrink > 0.0 && shrink < 1.0)) {
    throw Error("CoverSet::ball: bad radius or shrink");
  }
  const DomainSpec inner = DomainSpec::ball(center, r * (1.0 - shrink));
  const DomainSpec outer = DomainSpec::ball(center, r);
  CoverSet s;
  s.member = [center, r](const Vec& x) { return (x - center).norm() < r; };
  s.bump = cutoff(inner, outer);
  return s;
}

CoverSet CoverSet::box(const Vec& lo, const Vec& hi, double shrink) {
  Vec ilo = lo, ihi = hi;
  for (int i = 0; i < lo.size(); ++i) {
    const double m = 0.5 * shrink * (hi[i] - lo[i]);
    ilo[i] += m;
    ihi[i] -= m;
  }
  const DomainSpec inner = DomainSpec::box(ilo, ihi);
  const DomainSpec outer = DomainSpec::box(lo, hi);
  CoverSet s;
  const Vec lo_c = lo, hi_c = hi;
  s.member = [lo_c, hi_c](const Vec& x) {
    for (int i = 0; i < x.size(); ++i) {
      if (x[i] <= lo_c[i] || x[i] >= hi_c[i]) return false;
    }
    return true;
  };
  s.bump = cutoff(inner, outer);
  return s;
}

CoverSet CoverSet::chart_window(const Diffeomorphism& to_chart,
                                const std::vector<std::array<double, 4>>& windows,
                                std::function<bool(const Vec&)> guard) {
  const int n = to_chart.dim();
  if (static_cast<int>(windows.size()) != n) {
    throw Error("CoverSet::chart_window: one window per axis required");
  }
  std::vector<ScalarField> axis_bumps;
  for (const auto& w : windows) {
    axis_bumps.push_back(cutoff_1d(w[0], w[1], w[2], w[3]));
  }
  const Diffeomorphism F = to_chart;
  CoverSet s;
  const auto win = windows;
  s.member = [F, win, guard, n](const Vec& x) {
    if (guard && !guard(x)) return false;
    const Vec z = F(x);
    for (int i = 0; i < n; ++i) {
      if (z[i] <= win[static_cast<std::size_t>(i)][0] ||
          z[i] >= win[static_cast<std::size_t>(i)][3]) {
        return false;
      }
    }
    return true;
  };
  s.bump = ScalarField(n, [F, axis_bumps, win, guard, n](const Vec& x) {
    if (guard && !guard(x)) return 0.0;
    const Vec z = F(x);
    double acc = 1.0;
    for (int i = 0; i < n && acc != 0.0; ++i) {
      if (z[i] <= win[static_cast<std::size_t>(i)][0] ||
          z[i] >= win[static_cast<std::size_t>(i)][3]) {
        return 0.0;
      }
      acc *= axis_bumps[static_cast<std::size_t>(i)](vec1(z[i]));
    }
    return acc;
  });
  return s;
}

double PartitionOfUnity::weight_sum(const Vec& x) const {
  double s = 0.0;
  for (const auto& w : weights) s += w(x);
  return s;
}

PartitionOfUnity build_partition(const std::vector<CoverSet>& cover,
                                 const DomainSpec& omega, double sample_h) {
  if (cover.empty()) throw Error("build_partition: empty cover");

  // plateau cover check over the sampled closure
  const DomainSampling samp = sample_domain(omega, sample_h);
  auto check_point = [&](const Vec& p) {
    for (const auto& s : cover) {
      if (s.bump(p) >= 1.0 - 1e-12) return true;
    }
    return false;
  };
  for (long f : samp.flats) {
    const Vec p = samp.mesh.point_flat(f);
    if (!check_point(p)) {
      std::string coords;
      for (int i = 0; i < p.size(); ++i) coords += (i ? ", " : "") + std::to_string(p[i]);
      throw Error("build_partition: cover leaves (" + coords + ") unreached");
    }
  }
  for (const Vec& p : samp.boundary) {
    if (!check_point(p)) {
      std::string coords;
      for (int i = 0; i < p.size(); ++i) coords += (i ? ", " : "") + std::to_string(p[i]);
      throw Error("build_partition: cover leaves boundary point (" + coords + ") unreached");
    }
  }

  auto bumps = std::make_shared<std::vector<ScalarField>>();
  for (const auto& s : cover) bumps->push_back(s.bump);
  PartitionOfUnity part;
  const int n = omega.dim();
  for (std::size_t i = 0; i < cover.size(); ++i) {
    part.weights.push_back(ScalarField(n, [bumps, i](const Vec& x) {
      double sum = 0.0;
      for (const auto& b : *bumps) sum += b(x);
      const double denom = std::max(sum, 1.0);
      return (*bumps)[i](x) / denom;
    }));
  }
  return part;
}

}  // namespace ellx
