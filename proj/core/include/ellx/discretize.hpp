#pragma once

#include <Eigen/Sparse>
#include <vector>

#include "ellx/domain.hpp"
#include "ellx/fields.hpp"
#include "ellx/operator.hpp"

namespace ellx {

enum class NodeRole : char { exterior, boundary, interior };

/// Finite-difference rows of L_h on a regular mesh over the domain's
/// bounding box. Second-order terms use central differences; first-order
/// terms switch to upwinding when the cell Peclet number exceeds 1, which
/// keeps the discrete maximum principle. Stencil legs crossing a curved
/// boundary are shortened to the crossing point (Shortley-Weller).
class Discretization {
 public:
  struct Entry {
    long flat;     // grid node
    double coeff;
  };
  struct OffGrid {
    Vec point;     // boundary crossing carrying Dirichlet data
    double coeff;
  };
  struct Row {
    double diag = 0.0;
    std::vector<Entry> entries;     // grid couplings (interior or boundary nodes)
    std::vector<OffGrid> off_grid;  // curved-boundary couplings
  };

  Discretization(const EllipticOperator& L, const DomainSpec& domain, double h);

  const Mesh& mesh() const { return mesh_; }
  const DomainSpec& domain() const { return domain_; }
  const EllipticOperator& op() const { return L_; }
  NodeRole role(long flat) const { return roles_[static_cast<std::size_t>(flat)]; }
  const std::vector<long>& interior() const { return interior_; }
  long rank_of(long flat) const { return rank_[static_cast<std::size_t>(flat)]; }
  const Row& row(long flat) const;

  /// Applies the discrete operator to given nodal values.
  double apply_row(long flat, const std::vector<double>& values,
                   const ScalarField& g) const;

 private:
  EllipticOperator L_;
  DomainSpec domain_;
  Mesh mesh_;
  std::vector<NodeRole> roles_;
  std::vector<long> interior_;
  std::vector<long> rank_;     // mesh flat -> interior rank, -1 otherwise
  std::vector<Row> rows_;      // indexed by interior rank

  double crossing_fraction(const Vec& from, int axis, int dir) const;
};

/// Sparse system A u = rhs over the interior unknowns with Dirichlet
/// data g on the boundary; rhs already contains f and the moved
/// boundary terms.
struct AssembledSystem {
  Eigen::SparseMatrix<double> A;
  Eigen::VectorXd rhs;
};

AssembledSystem assemble(const Discretization& dis, const ScalarField& f,
                         const ScalarField& g);

}  // namespace ellx
