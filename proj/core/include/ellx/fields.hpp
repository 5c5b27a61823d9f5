#pragma once

#include <filesystem>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ellx/error.hpp"
#include "ellx/expr.hpp"
#include "ellx/fd.hpp"
#include "ellx/types.hpp"

namespace ellx {

/// Evaluable real-valued function on R^n. Expression-backed fields keep
/// their syntax tree so derivatives can be taken exactly.
class ScalarField {
 public:
  ScalarField(int dim, RealFn eval);
  static ScalarField from_expr(const Expr& e);
  static ScalarField from_expr(std::string_view src, int dim);
  static ScalarField zero(int dim);
  static ScalarField constant(int dim, double value);

  double operator()(const Vec& x) const { return eval_(x); }
  double operator()(double x) const;

  int dimension() const { return dim_; }
  const std::optional<Expr>& expr() const { return expr_; }

  /// Partial derivative field: exact if expression-backed, otherwise a
  /// central-difference closure at spacing fd_h.
  ScalarField derivative(int axis, double fd_h = 1e-5) const;

  std::optional<double> holder_alpha;
  std::optional<std::pair<Vec, Vec>> support_hint;

 private:
  int dim_;
  RealFn eval_;
  std::optional<Expr> expr_;
};

/// Regular mesh: shared spacing h, per-axis origin and point count.
/// Flat indexing is row-major with axis 0 slowest.
struct Mesh {
  Vec origin;
  double h = 0.0;
  std::vector<int> counts;

  int dim() const { return static_cast<int>(counts.size()); }
  long size() const;
  Vec upper() const;
  Vec point(std::span<const int> idx) const;
  Vec point_flat(long flat) const;
  long flat(std::span<const int> idx) const;
  void unflat(long flat, std::vector<int>& idx) const;

  static Mesh over_box(const Vec& lo, const Vec& hi, double h);
  static Mesh line(double lo, double hi, double h);
  /// Same box, spacing halved (all original nodes are kept).
  Mesh refined() const;
};

/// Immutable sampled values on a regular mesh.
class GridFunction {
 public:
  GridFunction(Mesh mesh, std::vector<double> values);
  static GridFunction sample(const ScalarField& u, const Mesh& mesh);
  static GridFunction sample(const RealFn& u, const Mesh& mesh);

  const Mesh& mesh() const { return mesh_; }
  const std::vector<double>& values() const { return values_; }
  double value(long flat) const { return values_[static_cast<std::size_t>(flat)]; }
  double value(std::span<const int> idx) const { return value(mesh_.flat(idx)); }

  double max_abs() const;

  double interp(const Vec& x) const;        // multilinear
  double interp_cubic(const Vec& x) const;  // Catmull-Rom tensor product

  /// Field view backed by cubic interpolation.
  ScalarField as_field() const;

  /// CSV with header x1,...,xn,value (row-major) plus a JSON sidecar
  /// `<path>.meta.json` holding h, extents and alpha.
  void write_csv(const std::filesystem::path& csv_path,
                 std::optional<double> alpha = std::nullopt) const;
  static GridFunction read_csv(const std::filesystem::path& csv_path);

 private:
  Mesh mesh_;
  std::vector<double> values_;
};

}  // namespace ellx
