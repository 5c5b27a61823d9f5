#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <vector>

#include "ellx/domain.hpp"
#include "ellx/fields.hpp"
#include "ellx/types.hpp"

namespace ellx {

/// Pair sampling policy for Hoelder quotients: exhaustive below the
/// point-count limit, otherwise stratified random pairs plus all
/// nearest-neighbour pairs (near-diagonal pairs dominate the quotient).
struct SampleStrategy {
  std::size_t exhaustive_limit = 20000;
  std::size_t random_pairs = 200000;
  std::uint64_t seed = 0x5eed;
};

/// Lattice sampling of a domain: mesh over the bounding box restricted
/// to the closure, plus the dense boundary sample set.
struct DomainSampling {
  Mesh mesh;
  std::vector<char> inside;       // per mesh node, in closure
  std::vector<long> flats;        // flat indices of nodes in closure
  std::vector<Vec> boundary;      // appended boundary samples

  std::vector<Vec> points() const;  // lattice nodes then boundary samples
};

DomainSampling sample_domain(const DomainSpec& dom, double h,
                             bool include_boundary = true);

double sup_norm(const ScalarField& u, const DomainSpec& dom, double h);
double sup_norm(const GridFunction& u);
double sup_norm(const GridFunction& u, const DomainSpec& dom);

double holder_seminorm(const ScalarField& u, double alpha, const DomainSpec& dom,
                       double h, const SampleStrategy& strategy = {});
double holder_seminorm(const GridFunction& u, double alpha,
                       const SampleStrategy& strategy = {});

using BoundaryPortion = std::function<bool(const Vec&)>;

/// sup over interior samples of d(x, boundary)^beta |u(x)|; with a
/// portion T the distance is taken to the boundary with T removed.
double weighted_interior_norm(const ScalarField& u, const DomainSpec& omega0,
                              double beta, double h, int order = 0,
                              const BoundaryPortion& portion = nullptr);
double weighted_interior_norm(const GridFunction& u, const DomainSpec& omega0,
                              double beta,
                              const BoundaryPortion& portion = nullptr);

/// Distance-weighted Hoelder seminorm of u itself at weight exponent
/// beta; the weight of a pair is min(d(x), d(y))^beta.
double weighted_holder_seminorm(const ScalarField& u, double alpha, double beta,
                                const DomainSpec& omega0, double h,
                                const SampleStrategy& strategy = {});

/// |u|^(0) + |Du|^(1) + |D2u|^(2) + [D2u]^(2+alpha), the interior norm
/// built from the four distance-weighted terms.
double primed_c2alpha_norm(const ScalarField& u, const DomainSpec& omega0,
                           double alpha, double h, double fd_h = 1e-5);

struct NormReport {
  double sup_norm = 0.0;
  double holder_seminorm = 0.0;
  double holder_alpha = 0.0;
  std::map<std::pair<int, double>, double> weighted_values;  // (order, beta)
  long sample_count = 0;
};

NormReport compute_norm_report(const ScalarField& u, const DomainSpec& dom,
                               double alpha, double h);

}  // namespace ellx
