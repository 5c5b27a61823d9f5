#pragma once

#include <optional>
#include <vector>

#include "ellx/extension.hpp"
#include "ellx/partition.hpp"
#include "ellx/transform.hpp"

namespace ellx {

struct ChartReport {
  int chart_index = 0;
  double R_prime = 0.0;   // flattening validity radius
  double Rq = 0.0;        // half-width of the chart cuboid
  double delta = 0.0;     // reflection depth in chart coordinates
  double cross_term_max = 0.0;
  double u_on_seam = 0.0;
  double Lu_on_seam = 0.0;
  SeamReport seam;
};

struct GlobalExtensionOptions {
  double admissibility_tol = 1e-6;
  double fd_h = 1e-4;
  double cuboid_fraction = 0.95;     // Rq = fraction * R' / sqrt(n)
  double partition_sample_h = 0.05;
  double seam_check_h = 1e-4;
  bool run_seam_checks = true;
  double alpha = 1.0;
  /// Inner cover ball (center, radius); chosen from the domain otherwise.
  std::optional<std::pair<Vec, double>> inner_ball;
};

/// u -> Phi_0 u + sum_i Phi_i (E_i applied in chart coordinates): the
/// compactly supported, sup-norm preserving global extension for u with
/// u = 0 and Lu = 0 on the boundary of a chart-atlas domain.
struct GlobalExtension {
  ScalarField extended;
  PartitionOfUnity partition;
  std::vector<ChartReport> charts;
};

GlobalExtension extend_global(const ScalarField& u, const EllipticOperator& L,
                              const DomainSpec& omega,
                              const GlobalExtensionOptions& opts = {});

/// Unit disk described by rotated boundary-straightening charts
/// (arc-length angle, 1 - radius); analytic inverses included.
DomainSpec unit_disk_atlas(int n_charts = 8, double chart_R = 0.8);

}  // namespace ellx
