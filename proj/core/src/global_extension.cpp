#include "ellx/global_extension.hpp"

#include <cmath>
#include <cstdio>
#include <memory>
#include <string>

#include "ellx/error.hpp"

namespace ellx {

namespace {

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct ChartPipeline {
  Diffeomorphism chart_map;   // physical -> flattened chart coordinates z
  Diffeomorphism psi;         // physical -> chart ball
  Diffeomorphism flatten;     // chart ball -> z
  EllipticOperator L2;        // operator in z
  double Rq = 0.0;
  HalfspaceExtension ext;
};

}  // namespace

GlobalExtension extend_global(const ScalarField& u, const EllipticOperator& L,
                              const DomainSpec& omega,
                              const GlobalExtensionOptions& opts) {
  if (omega.kind() != DomainSpec::Kind::chart_atlas) {
    throw Error("extend_global: domain must carry a chart atlas");
  }
  const int n = omega.dim();
  if (u.dimension() != n || L.dim() != n) throw Error("extend_global: dimension mismatch");

  const auto [blo, bhi] = omega.bounding_box();
  const Vec centroid = 0.5 * (blo + bhi);

  // u = 0 and Lu = 0 on the boundary of omega (sampled in physical space,
  // interior-sided stencil along the inward normal is implicit in the
  // chart checks below; here only the value is pre-checked)
  std::vector<std::string> failures;
  for (const Vec& p : omega.boundary_points()) {
    if (std::abs(u(p)) > opts.admissibility_tol) {
      failures.push_back("|u| = " + std::to_string(std::abs(u(p))) + " at a boundary point");
      break;
    }
  }

  std::vector<std::shared_ptr<ChartPipeline>> pipelines;
  std::vector<ChartReport> reports;
  std::vector<CoverSet> cover;

  // inner cover ball
  Vec inner_center = centroid;
  double inner_r = 0.0;
  if (opts.inner_ball) {
    inner_center = opts.inner_ball->first;
    inner_r = opts.inner_ball->second;
  } else {
    double dist = std::numeric_limits<double>::infinity();
    for (const Vec& p : omega.boundary_points()) dist = std::min(dist, (p - centroid).norm());
    inner_r = 0.9 * dist;
  }
  cover.push_back(CoverSet::ball(inner_center, inner_r));

  int index = 0;
  for (const BoundaryChart& chart : omega.charts()) {
    auto pipe = std::make_shared<ChartPipeline>();
    pipe->psi = chart.psi;
    const Vec patch_center = chart.psi.inverse(Vec::Zero(n), centroid);

    TransformedOperator L1 = pushforward_operator(L, chart.psi, 0.9 * chart.R, patch_center);
    FlatteningMap flat = build_flattening_map(L1.op, chart.R);
    pipe->flatten = flat.F;
    TransformedOperator L2 = pushforward_operator(L1.op, flat.F, 0.9 * flat.R_prime);
    pipe->L2 = L2.op;
    pipe->chart_map = Diffeomorphism::compose(flat.F, chart.psi);
    pipe->Rq = opts.cuboid_fraction * flat.R_prime / std::sqrt(static_cast<double>(n));

    // u in chart coordinates: z -> u(psi^{-1}(flatten^{-1}(z)))
    const Diffeomorphism psi = chart.psi;
    const Diffeomorphism flatten = flat.F;
    const ScalarField uc = u;
    const Vec guess_phys = centroid;
    ScalarField u_chart(n, [uc, psi, flatten, guess_phys](const Vec& z) {
      const Vec y = flatten.inverse(z, z);
      return uc(psi.inverse(y, guess_phys));
    });

    ChartReport rep;
    rep.chart_index = index;
    rep.R_prime = flat.R_prime;
    rep.Rq = pipe->Rq;
    try {
      pipe->ext = extend_halfspace(u_chart, pipe->L2, pipe->Rq,
                                   opts.admissibility_tol, opts.fd_h);
      rep.delta = pipe->ext.delta;
      rep.cross_term_max = pipe->ext.max_cross_term;
      rep.u_on_seam = pipe->ext.max_u_on_seam;
      rep.Lu_on_seam = pipe->ext.max_Lu_on_seam;
    } catch (const Error& e) {
      failures.push_back("chart " + std::to_string(index) + ": " + e.what());
      ++index;
      continue;
    }

    if (opts.run_seam_checks) {
      std::vector<Vec> seam;
      const int per = 5;
      std::vector<int> idx(static_cast<std::size_t>(n - 1), 0);
      for (;;) {
        Vec p = Vec::Zero(n);
        for (int i = 0; i < n - 1; ++i) {
          p[i] = (-pipe->Rq + 2.0 * pipe->Rq * idx[static_cast<std::size_t>(i)] / (per - 1)) * 0.7;
        }
        seam.push_back(p);
        int axis = n - 2;
        while (axis >= 0 && ++idx[static_cast<std::size_t>(axis)] == per) {
          idx[static_cast<std::size_t>(axis)] = 0;
          --axis;
        }
        if (axis < 0) break;
      }
      const double window = std::min(0.05, 0.2 * pipe->ext.delta);
      rep.seam = verify_extension_smoothness(pipe->ext.extended, seam, opts.alpha,
                                             opts.seam_check_h, window);
    }

    // cover window in chart coordinates: tangential plateau at 75%, depth
    // plateau reaching below the seam down to -delta/2
    std::vector<std::array<double, 4>> windows;
    for (int i = 0; i < n - 1; ++i) {
      windows.push_back({-pipe->Rq, -0.75 * pipe->Rq, 0.75 * pipe->Rq, pipe->Rq});
    }
    const double delta = pipe->ext.delta;
    windows.push_back({-0.75 * delta, -0.5 * delta, 0.75 * pipe->Rq, pipe->Rq});
    cover.push_back(CoverSet::chart_window(pipe->chart_map, windows, chart.guard));

    pipelines.push_back(pipe);
    reports.push_back(rep);
    ++index;
  }

  if (!failures.empty()) {
    std::string msg = "extend_global: chart membership failures:";
    for (const auto& f : failures) msg += "\n  - " + f;
    throw Error(msg);
  }

  GlobalExtension out;
  out.partition = build_partition(cover, omega, opts.partition_sample_h);
  out.charts = std::move(reports);

  const PartitionOfUnity part = out.partition;
  const ScalarField uc = u;
  auto pipes = std::make_shared<std::vector<std::shared_ptr<ChartPipeline>>>(pipelines);
  out.extended = ScalarField(n, [part, uc, pipes](const Vec& x) {
    double acc = 0.0;
    const double w0 = part.weights[0](x);
    if (w0 > 0.0) acc += w0 * uc(x);
    for (std::size_t i = 0; i < pipes->size(); ++i) {
      const double wi = part.weights[i + 1](x);
      if (wi > 0.0) {
        const Vec z = (*pipes)[i]->chart_map(x);
        acc += wi * (*pipes)[i]->ext.extended(z);
      }
    }
    return acc;
  });
  return out;
}

DomainSpec unit_disk_atlas(int n_charts, double chart_R) {
  if (n_charts < 3) throw Error("unit_disk_atlas: need at least 3 charts");
  if (!(chart_R > 0.0 && chart_R < M_PI)) throw Error("unit_disk_atlas: chart_R out of range");
  std::vector<BoundaryChart> charts;
  for (int i = 0; i < n_charts; ++i) {
    const double theta = 2.0 * M_PI * i / n_charts;
    const double c = std::cos(theta), s = std::sin(theta);
    // rotated arc coordinate and inward depth 1 - r
    const std::string y1 = "atan2(" + fmt(c) + "*x2 - " + fmt(s) + "*x1, " +
                           fmt(c) + "*x1 + " + fmt(s) + "*x2)";
    const std::string y2 = "1 - sqrt(x1^2 + x2^2)";
    Diffeomorphism psi = Diffeomorphism::from_exprs(
        {Expr::parse(y1, 2), Expr::parse(y2, 2)});
    psi.set_analytic_inverse([theta](const Vec& y) -> Vec {
      const double r = 1.0 - y[1];
      return vec2(r * std::cos(y[0] + theta), r * std::sin(y[0] + theta));
    });
    psi.regularity = Regularity::c4_alpha;
    psi.valid_radius = chart_R;
    BoundaryChart chart;
    chart.psi = psi;
    chart.R = chart_R;
    chart.guard = [](const Vec& x) { return x.norm() > 0.2; };
    charts.push_back(std::move(chart));
  }
  auto inside = [](const Vec& x) { return x.norm() < 1.0; };
  DomainSpec d = DomainSpec::chart_atlas(inside, vec2(-1.0, -1.0), vec2(1.0, 1.0),
                                         std::move(charts));
  d.boundary_order = BoundaryOrder{4, 1.0};
  return d;
}

}  // namespace ellx
