#include "ellx/fields.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace ellx {

ScalarField::ScalarField(int dim, RealFn eval) : dim_(dim), eval_(std::move(eval)) {
  if (dim_ < 1) throw Error("ScalarField: dimension must be >= 1");
  if (!eval_) throw Error("ScalarField: missing evaluator");
}

ScalarField ScalarField::from_expr(const Expr& e) {
  const int dim = std::max(1, e.dimension());
  ScalarField f(dim, [e](const Vec& x) { return e(x); });
  f.expr_ = e;
  return f;
}

ScalarField ScalarField::from_expr(std::string_view src, int dim) {
  Expr e = Expr::parse(src, dim);
  ScalarField f(dim, [e](const Vec& x) { return e(x); });
  f.expr_ = e;
  return f;
}

ScalarField ScalarField::zero(int dim) { return constant(dim, 0.0); }

ScalarField ScalarField::constant(int dim, double value) {
  ScalarField f(dim, [value](const Vec&) { return value; });
  f.expr_ = Expr::constant(value);
  return f;
}

double ScalarField::operator()(double x) const {
  if (dim_ != 1) throw Error("ScalarField: scalar call on field of dimension " + std::to_string(dim_));
  return eval_(vec1(x));
}

ScalarField ScalarField::derivative(int axis, double fd_h) const {
  if (axis < 0 || axis >= dim_) throw Error("ScalarField: derivative axis out of range");
  if (expr_) return from_expr(expr_->derivative(axis));
  RealFn f = eval_;
  return ScalarField(dim_, [f, axis, fd_h](const Vec& x) {
    return fd_d1(f, x, axis, fd_h);
  });
}

// ----------------------------------------------------------------- Mesh

long Mesh::size() const {
  long s = 1;
  for (int c : counts) s *= c;
  return s;
}

Vec Mesh::upper() const {
  Vec u = origin;
  for (int i = 0; i < dim(); ++i) u[i] += h * (counts[static_cast<std::size_t>(i)] - 1);
  return u;
}

Vec Mesh::point(std::span<const int> idx) const {
  Vec p = origin;
  for (int i = 0; i < dim(); ++i) p[i] += h * idx[static_cast<std::size_t>(i)];
  return p;
}

Vec Mesh::point_flat(long f) const {
  std::vector<int> idx;
  unflat(f, idx);
  return point(idx);
}

long Mesh::flat(std::span<const int> idx) const {
  long f = 0;
  for (int i = 0; i < dim(); ++i) f = f * counts[static_cast<std::size_t>(i)] + idx[static_cast<std::size_t>(i)];
  return f;
}

void Mesh::unflat(long f, std::vector<int>& idx) const {
  idx.assign(counts.size(), 0);
  for (int i = dim() - 1; i >= 0; --i) {
    const int c = counts[static_cast<std::size_t>(i)];
    idx[static_cast<std::size_t>(i)] = static_cast<int>(f % c);
    f /= c;
  }
}

Mesh Mesh::over_box(const Vec& lo, const Vec& hi, double h) {
  if (h <= 0.0) throw Error("Mesh: spacing must be positive");
  if (lo.size() != hi.size()) throw Error("Mesh: box corner dimensions differ");
  Mesh m;
  m.origin = lo;
  m.h = h;
  for (int i = 0; i < lo.size(); ++i) {
    if (!(hi[i] > lo[i])) throw Error("Mesh: box has empty extent");
    const int c = static_cast<int>(std::llround((hi[i] - lo[i]) / h)) + 1;
    m.counts.push_back(std::max(3, c));
  }
  return m;
}

Mesh Mesh::line(double lo, double hi, double h) {
  return over_box(vec1(lo), vec1(hi), h);
}

Mesh Mesh::refined() const {
  Mesh m;
  m.origin = origin;
  m.h = h / 2.0;
  for (int c : counts) m.counts.push_back(2 * c - 1);
  return m;
}

// --------------------------------------------------------- GridFunction

GridFunction::GridFunction(Mesh mesh, std::vector<double> values)
    : mesh_(std::move(mesh)), values_(std::move(values)) {
  if (mesh_.dim() < 1) throw Error("GridFunction: empty mesh");
  for (int c : mesh_.counts) {
    if (c < 3) throw Error("GridFunction: mesh needs >= 3 points per axis");
  }
  if (static_cast<long>(values_.size()) != mesh_.size()) {
    throw Error("GridFunction: value count does not match mesh size");
  }
  for (double v : values_) {
    if (!std::isfinite(v)) throw Error("GridFunction: non-finite value");
  }
}

GridFunction GridFunction::sample(const ScalarField& u, const Mesh& mesh) {
  return sample([&u](const Vec& x) { return u(x); }, mesh);
}

GridFunction GridFunction::sample(const RealFn& u, const Mesh& mesh) {
  std::vector<double> vals(static_cast<std::size_t>(mesh.size()));
  std::vector<int> idx;
  for (long f = 0; f < mesh.size(); ++f) {
    mesh.unflat(f, idx);
    vals[static_cast<std::size_t>(f)] = u(mesh.point(idx));
  }
  return GridFunction(mesh, std::move(vals));
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

namespace {

// Catmull-Rom weights at local parameter s measured from node i1.
void catmull_rom(double s, double w[4]) {
  const double s2 = s * s, s3 = s2 * s;
  w[0] = -0.5 * s3 + s2 - 0.5 * s;
  w[1] = 1.5 * s3 - 2.5 * s2 + 1.0;
  w[2] = -1.5 * s3 + 2.0 * s2 + 0.5 * s;
  w[3] = 0.5 * s3 - 0.5 * s2;
}

}  // namespace

double GridFunction::interp(const Vec& x) const {
  const int n = mesh_.dim();
  std::vector<int> base(static_cast<std::size_t>(n));
  std::vector<double> t(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double r = (x[i] - mesh_.origin[i]) / mesh_.h;
    int b = static_cast<int>(std::floor(r));
    b = std::clamp(b, 0, mesh_.counts[static_cast<std::size_t>(i)] - 2);
    base[static_cast<std::size_t>(i)] = b;
    t[static_cast<std::size_t>(i)] = r - b;
  }
  double acc = 0.0;
  const int corners = 1 << n;
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int c = 0; c < corners; ++c) {
    double w = 1.0;
    for (int i = 0; i < n; ++i) {
      const int bit = (c >> i) & 1;
      idx[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + bit;
      w *= bit ? t[static_cast<std::size_t>(i)] : 1.0 - t[static_cast<std::size_t>(i)];
    }
    acc += w * value(idx);
  }
  return acc;
}

double GridFunction::interp_cubic(const Vec& x) const {
  const int n = mesh_.dim();
  std::vector<int> base(static_cast<std::size_t>(n));
  std::vector<std::array<double, 4>> w(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    const double r = (x[i] - mesh_.origin[i]) / mesh_.h;
    int i1 = static_cast<int>(std::floor(r));
    i1 = std::clamp(i1, 1, mesh_.counts[static_cast<std::size_t>(i)] - 3);
    base[static_cast<std::size_t>(i)] = i1 - 1;
    catmull_rom(r - i1, w[static_cast<std::size_t>(i)].data());
  }
  // tensor product over 4^n nodes
  std::vector<int> offs(static_cast<std::size_t>(n), 0);
  std::vector<int> idx(static_cast<std::size_t>(n));
  double acc = 0.0;
  for (;;) {
    double ww = 1.0;
    for (int i = 0; i < n; ++i) {
      idx[static_cast<std::size_t>(i)] = base[static_cast<std::size_t>(i)] + offs[static_cast<std::size_t>(i)];
      ww *= w[static_cast<std::size_t>(i)][static_cast<std::size_t>(offs[static_cast<std::size_t>(i)])];
    }
    acc += ww * value(idx);
    int axis = n - 1;
    while (axis >= 0 && ++offs[static_cast<std::size_t>(axis)] == 4) {
      offs[static_cast<std::size_t>(axis)] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
  return acc;
}

ScalarField GridFunction::as_field() const {
  GridFunction copy = *this;
  return ScalarField(mesh_.dim(), [copy](const Vec& x) { return copy.interp_cubic(x); });
}

void GridFunction::write_csv(const std::filesystem::path& csv_path,
                             std::optional<double> alpha) const {
  std::ofstream out(csv_path);
  if (!out) throw Error("GridFunction: cannot write " + csv_path.string());
  const int n = mesh_.dim();
  for (int i = 0; i < n; ++i) out << 'x' << (i + 1) << ',';
  out << "value\n";
  char buf[64];
  std::vector<int> idx;
  for (long f = 0; f < mesh_.size(); ++f) {
    mesh_.unflat(f, idx);
    const Vec p = mesh_.point(idx);
    for (int i = 0; i < n; ++i) {
      std::snprintf(buf, sizeof(buf), "%.17g", p[i]);
      out << buf << ',';
    }
    std::snprintf(buf, sizeof(buf), "%.17g", value(f));
    out << buf << '\n';
  }
  out.close();

  nlohmann::json meta;
  meta["h"] = mesh_.h;
  meta["counts"] = mesh_.counts;
  std::vector<double> lo(mesh_.origin.data(), mesh_.origin.data() + n);
  const Vec up = mesh_.upper();
  std::vector<double> hi(up.data(), up.data() + n);
  meta["extents"] = {{"lo", lo}, {"hi", hi}};
  if (alpha) meta["alpha"] = *alpha;
  std::ofstream mo(csv_path.string() + ".meta.json");
  if (!mo) throw Error("GridFunction: cannot write sidecar for " + csv_path.string());
  mo << meta.dump(2) << '\n';
}

GridFunction GridFunction::read_csv(const std::filesystem::path& csv_path) {
  std::ifstream meta_in(csv_path.string() + ".meta.json");
  if (!meta_in) throw Error("GridFunction: missing sidecar " + csv_path.string() + ".meta.json");
  nlohmann::json meta = nlohmann::json::parse(meta_in);

  Mesh mesh;
  mesh.h = meta.at("h").get<double>();
  mesh.counts = meta.at("counts").get<std::vector<int>>();
  const auto lo = meta.at("extents").at("lo").get<std::vector<double>>();
  mesh.origin = Vec(static_cast<long>(lo.size()));
  for (std::size_t i = 0; i < lo.size(); ++i) mesh.origin[static_cast<long>(i)] = lo[i];

  std::ifstream in(csv_path);
  if (!in) throw Error("GridFunction: cannot read " + csv_path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("GridFunction: empty CSV " + csv_path.string());
  std::vector<double> vals;
  vals.reserve(static_cast<std::size_t>(mesh.size()));
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto comma = line.find_last_of(',');
    if (comma == std::string::npos) throw Error("GridFunction: malformed CSV row: " + line);
    vals.push_back(std::stod(line.substr(comma + 1)));
  }
  return GridFunction(mesh, std::move(vals));
}

}  // namespace ellx
