#pragma once

#include <optional>
#include <vector>

#include "ellx/barrier.hpp"
#include "ellx/comparison.hpp"
#include "ellx/discretize.hpp"

namespace ellx {

struct BoundCheck {
  double bound = 0.0;
  double u_norm = 0.0;
  bool ok = false;
};

struct SolveReport {
  double residual_norm = 0.0;
  long iterations = 0;
  bool max_principle_ok = false;
  MaxPrincipleReport max_principle;
  BoundCheck bound_check;
  SandwichReport sandwich;
  long unknowns = 0;
};

struct Solution {
  GridFunction u;
  SolveReport report;
};

/// Sparse Dirichlet solve of Lu = f, u = g on the sampled domain.
/// Direct factorization up to 1e4 unknowns, BiCGSTAB beyond. Requires
/// c <= 0 on the mesh (shift the operator first otherwise).
Solution direct_solve(const EllipticOperator& L, const ScalarField& f,
                      const ScalarField& g, const DomainSpec& domain, double h);

/// Replaces u inside the ball by the solution of Lv = f with boundary
/// data taken from u's own nodes on the ring (exact node values); u is
/// unchanged outside. The closed ball must lie inside the domain.
GridFunction harmonic_lift(const EllipticOperator& L, const ScalarField& f,
                           const GridFunction& u, const Vec& ball_center,
                           double ball_radius, const DomainSpec& domain,
                           const std::optional<ScalarField>& g = std::nullopt);

struct Ball {
  Vec center;
  double radius = 0.0;
};

/// Overlapping balls of radius 4h on a stride-2h lattice, supplemented
/// with boundary-normal balls for interior nodes the lattice cannot
/// reach on curved boundaries. Throws on a cover gap.
std::vector<Ball> build_ball_cover(const DomainSpec& domain, double h);

struct PerronState {
  GridFunction current;
  std::vector<Ball> ball_cover;
  long sweep_count = 0;
  double last_increment = 0.0;
  bool converged = false;
  double boundary_gap = 0.0;  // max |u - g| at boundary-adjacent nodes
};

struct PerronOptions {
  long max_sweeps = 20000;
  double tol = 1e-6;
  std::optional<std::vector<Ball>> cover;
};

struct PerronResult {
  GridFunction u;
  PerronState state;
  double residual_norm = 0.0;
};

/// Monotone harmonic-lifting sweep started from the subsolution v-:
/// current <- max(current, lift) ball by ball until the sweep increment
/// drops below tol. Requires c <= 0.
PerronResult perron_solve(const EllipticOperator& L, const ScalarField& f,
                          const ScalarField& g, const DomainSpec& domain,
                          double h, const PerronOptions& opts = {});

struct AttainmentEntry {
  Vec x0;
  double epsilon = 0.0;
  bool ok = false;
  bool skipped = false;
  std::string skip_reason;
  double worst_violation = 0.0;
  double modulus = 0.0;  // max |u - g(x0)| at nodes within 2h of x0
};

/// Barrier sandwich w- <= u <= w+ for each boundary point and epsilon.
std::vector<AttainmentEntry> boundary_attainment_check(
    const GridFunction& u, const ScalarField& g, const EllipticOperator& L,
    const ScalarField& f, const DomainSpec& domain,
    const std::vector<Vec>& boundary_points, const std::vector<double>& epsilons);

struct ResolventResult {
  GridFunction u;
  SolveReport report;
  double omega = 0.0;
  double mu = 0.0;
  bool contraction_ok = false;
  double f_norm = 0.0;
};

/// Solves (L - mu) u = f with zero Dirichlet data for mu > omega = sup c
/// and asserts the dissipativity bound |u| (mu - omega) <= |f|.
ResolventResult resolvent_solve(const EllipticOperator& L, double mu,
                                const ScalarField& f, const DomainSpec& domain,
                                double h);

struct Trajectory {
  std::vector<double> times;
  std::vector<GridFunction> states;
  double omega = 0.0;
  double dt = 0.0;
};

/// Implicit Euler for u' = Lu with zero Dirichlet data: each step solves
/// (L - 1/dt) u_{k+1} = -u_k / dt with a factorization reused across
/// steps. Requires 1/dt > omega; the trajectory must respect the
/// semigroup growth bound exp(omega t).
Trajectory evolve(const EllipticOperator& L, const GridFunction& u0, double dt,
                  double T, const DomainSpec& domain);

}  // namespace ellx
