#include "latdef/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "latdef/kernels.hpp"

namespace latdef {

namespace {

using Plane = std::vector<double>;

// theta^a_k as one plane per (a, k), zero at invalid nodes.
std::array<std::array<Plane, 2>, 2> component_planes(const CoframeField& field) {
  const std::size_t n = field.grid().size();
  std::array<std::array<Plane, 2>, 2> out;
  for (auto& row : out)
    for (auto& plane : row) plane.assign(n, 0.0);
  for (std::size_t idx = 0; idx < n; ++idx) {
    if (!field.valid(idx)) continue;
    const Mat2& t = field.theta(idx);
    for (int a = 0; a < 2; ++a)
      for (int k = 0; k < 2; ++k) out[a][k][idx] = t(a, k);
  }
  return out;
}

std::vector<std::uint8_t> stencil_mask(const CoframeField& field) {
  const std::size_t n = field.grid().size();
  std::vector<std::uint8_t> mask(n, 0);
  for (std::size_t idx = 0; idx < n; ++idx) mask[idx] = field.stencil_ok(idx) ? 1 : 0;
  return mask;
}

// d[j] = central difference along direction j (0: x, 1: y).
std::array<Plane, 2> gradient(const Plane& f, const GridGeometry& g) {
  std::array<Plane, 2> d{Plane(f.size()), Plane(f.size())};
  kernels::diff_x(f, d[0], g.nx, g.ny, g.h);
  kernels::diff_y(f, d[1], g.nx, g.ny, g.h);
  return d;
}

bool in_window(const Vec2& p, const Rect& w, double slack) {
  return p.x >= w.min.x - slack && p.x <= w.max.x + slack && p.y >= w.min.y - slack &&
         p.y <= w.max.y + slack;
}

void require_evaluable(std::size_t count) {
  if (count == 0) throw NumericalError("no grid node has a full central-difference stencil");
}

}  // namespace

double TorsionField::max_in(const Rect& window) const {
  const double slack = 1e-9 * grid.h;
  double m = 0.0;
  for (std::size_t idx = 0; idx < evaluated.size(); ++idx) {
    if (!evaluated[idx] || !in_window(grid.point(idx), window, slack)) continue;
    m = std::max(m, std::max(std::abs(tau1[idx]), std::abs(tau2[idx])));
  }
  return m;
}

TorsionField torsion(const CoframeField& field) {
  const GridGeometry& g = field.grid();
  TorsionField out;
  out.grid = g;
  out.evaluated = stencil_mask(field);
  out.count = static_cast<std::size_t>(std::count(out.evaluated.begin(), out.evaluated.end(), 1));
  require_evaluable(out.count);

  const auto planes = component_planes(field);
  out.tau1.assign(g.size(), 0.0);
  out.tau2.assign(g.size(), 0.0);
  kernels::curl(planes[0][0], planes[0][1], out.tau1, g.nx, g.ny, g.h);
  kernels::curl(planes[1][0], planes[1][1], out.tau2, g.nx, g.ny, g.h);
  for (std::size_t idx = 0; idx < g.size(); ++idx)
    if (!out.evaluated[idx]) out.tau1[idx] = out.tau2[idx] = 0.0;
  out.max_norm = std::max(kernels::max_abs_masked(out.tau1, out.evaluated),
                          kernels::max_abs_masked(out.tau2, out.evaluated));
  return out;
}

double derivative_scale(const CoframeField& field) {
  const auto mask = stencil_mask(field);
  const auto planes = component_planes(field);
  double scale = 0.0;
  for (const auto& row : planes)
    for (const auto& plane : row)
      for (const auto& d : gradient(plane, field.grid()))
        scale = std::max(scale, kernels::max_abs_masked(d, mask));
  return scale;
}

double default_compatibility_tol(const CoframeField& field) {
  const double h = field.grid().h;
  return 10.0 * h * h;
}

CompatibilityReport is_compatible(const CoframeField& field, std::optional<double> tol) {
  const TorsionField t = torsion(field);
  CompatibilityReport r;
  r.max_torsion = t.max_norm;
  r.derivative_scale = derivative_scale(field);
  r.tol = tol.value_or(default_compatibility_tol(field));
  r.threshold = r.tol * r.derivative_scale;
  r.compatible = r.max_torsion <= r.threshold;
  return r;
}

double Connection::max_abs() const {
  double m = 0.0;
  for (std::size_t idx = 0; idx < coefficients.size(); ++idx)
    if (evaluated[idx])
      for (double v : coefficients[idx]) m = std::max(m, std::abs(v));
  return m;
}

Connection teleparallel_connection(const CoframeField& field) {
  const GridGeometry& g = field.grid();
  Connection c;
  c.grid = g;
  c.evaluated = stencil_mask(field);
  require_evaluable(static_cast<std::size_t>(std::count(c.evaluated.begin(), c.evaluated.end(), 1)));
  c.coefficients.assign(g.size(), {});

  const auto planes = component_planes(field);
  // grad[a][k][j] = d_j theta^a_k
  std::array<std::array<std::array<Plane, 2>, 2>, 2> grad;
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < 2; ++k) grad[a][k] = gradient(planes[a][k], g);

  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!c.evaluated[idx]) continue;
    const Mat2 inv = field.theta(idx).inverse();
    auto& gamma = c.coefficients[idx];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k)
          gamma[Connection::slot(i, j, k)] =
              inv(i, 0) * grad[0][k][j][idx] + inv(i, 1) * grad[1][k][j][idx];
  }
  return c;
}

Connection riemann_cartan_connection(const CoframeField& field) {
  const GridGeometry& g = field.grid();
  Connection c;
  c.grid = g;
  c.evaluated = stencil_mask(field);
  require_evaluable(static_cast<std::size_t>(std::count(c.evaluated.begin(), c.evaluated.end(), 1)));
  c.coefficients.assign(g.size(), {});

  // metric[l][k] planes (symmetric)
  std::array<std::array<Plane, 2>, 2> metric;
  for (auto& row : metric)
    for (auto& plane : row) plane.assign(g.size(), 0.0);
  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!field.valid(idx)) continue;
    const Mat2& t = field.theta(idx);
    const Mat2 m = t.transposed() * t;
    for (int l = 0; l < 2; ++l)
      for (int k = 0; k < 2; ++k) metric[l][k][idx] = m(l, k);
  }
  // dg[l][k][j] = d_j g_lk
  std::array<std::array<std::array<Plane, 2>, 2>, 2> dg;
  for (int l = 0; l < 2; ++l)
    for (int k = 0; k < 2; ++k) dg[l][k] = gradient(metric[l][k], g);

  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!c.evaluated[idx]) continue;
    const Mat2 gm{{{{metric[0][0][idx], metric[0][1][idx]}, {metric[1][0][idx], metric[1][1][idx]}}}};
    if (!(gm(0, 0) > 0.0) || !(gm.det() > 0.0))
      throw NumericalError("induced metric is not positive definite");
    const Mat2 ginv = gm.inverse();
    auto& gamma = c.coefficients[idx];
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
          double s = 0.0;
          for (int l = 0; l < 2; ++l)
            s += ginv(i, l) * (dg[l][k][j][idx] + dg[l][j][k][idx] - dg[j][k][l][idx]);
          gamma[Connection::slot(i, j, k)] = 0.5 * s;
        }
  }
  return c;
}

ConnectionComparison connections_coincide(const Connection& c1, const Connection& c2,
                                          std::optional<double> tol, std::optional<Rect> window) {
  if (!(c1.grid == c2.grid)) throw InputError("connections live on different grids");
  ConnectionComparison r;
  const double h = c1.grid.h;
  const double slack = 1e-9 * h;
  std::size_t common = 0;
  for (std::size_t idx = 0; idx < c1.coefficients.size(); ++idx) {
    if (!c1.evaluated[idx] || !c2.evaluated[idx]) continue;
    if (window && !in_window(c1.grid.point(idx), *window, slack)) continue;
    ++common;
    for (std::size_t s = 0; s < 8; ++s) {
      const double a = c1.coefficients[idx][s];
      const double b = c2.coefficients[idx][s];
      r.max_gap = std::max(r.max_gap, std::abs(a - b));
      r.scale = std::max(r.scale, std::max(std::abs(a), std::abs(b)));
    }
  }
  require_evaluable(common);
  r.tol = tol.value_or(10.0 * h * h);
  r.threshold = r.tol * r.scale;
  r.coincide = r.max_gap <= r.threshold;
  return r;
}

double curvature_residual(const Connection& c) {
  const GridGeometry& g = c.grid;
  const double inv2h = 0.5 / g.h;
  double worst = 0.0;
  std::size_t used = 0;
  for (std::size_t j = 1; j + 1 < g.ny; ++j)
    for (std::size_t i = 1; i + 1 < g.nx; ++i) {
      const std::size_t idx = g.index(i, j);
      if (!c.evaluated[idx] || !c.evaluated[idx - 1] || !c.evaluated[idx + 1] ||
          !c.evaluated[idx - g.nx] || !c.evaluated[idx + g.nx])
        continue;
      ++used;
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) {
          // d_x (A_y)^a_b - d_y (A_x)^a_b
          const double dxAy = (c(idx + 1, a, 1, b) - c(idx - 1, a, 1, b)) * inv2h;
          const double dyAx = (c(idx + g.nx, a, 0, b) - c(idx - g.nx, a, 0, b)) * inv2h;
          double comm = 0.0;
          for (int m = 0; m < 2; ++m)
            comm += c(idx, a, 0, m) * c(idx, m, 1, b) - c(idx, a, 1, m) * c(idx, m, 0, b);
          worst = std::max(worst, std::abs(dxAy - dyAx + comm));
        }
    }
  require_evaluable(used);
  return worst;
}

double metric_deviation(const CoframeField& field) {
  double worst = 0.0;
  for (std::size_t idx = 0; idx < field.grid().size(); ++idx) {
    if (!field.valid(idx)) continue;
    const Mat2& t = field.theta(idx);
    worst = std::max(worst, max_abs(t.transposed() * t - Mat2::identity()));
  }
  return worst;
}

bool is_isometric(const CoframeField& field, double tol) { return metric_deviation(field) <= tol; }

RigidityReport isometric_rigidity_check(const CoframeField& field, double tol) {
  RigidityReport r;
  r.isometric = is_isometric(field, tol);
  const CompatibilityReport compat = is_compatible(field);
  r.compatible = compat.compatible;
  r.max_torsion = compat.max_torsion;
  r.torsion_detected = !compat.compatible;

  Mat2 mean;
  std::size_t n = 0;
  for (std::size_t idx = 0; idx < field.grid().size(); ++idx)
    if (field.valid(idx)) {
      mean += field.theta(idx);
      ++n;
    }
  if (n > 0) mean = (1.0 / static_cast<double>(n)) * mean;
  for (std::size_t idx = 0; idx < field.grid().size(); ++idx)
    if (field.valid(idx))
      r.max_deviation_from_mean = std::max(r.max_deviation_from_mean, max_abs(field.theta(idx) - mean));
  r.constant = r.max_deviation_from_mean <= tol * std::max(1.0, max_abs(mean));
  r.implication_holds = !(r.isometric && r.compatible) || r.constant;
  return r;
}

ConvergenceStudy convergence_study(const std::function<CoframeField(double)>& make_field, double h0,
                                   int levels, std::optional<Rect> window) {
  if (levels < 1 || !(h0 > 0.0)) throw InputError("convergence study needs h0 > 0 and levels >= 1");
  ConvergenceStudy study;
  double h = h0;
  for (int level = 0; level < levels; ++level, h *= 0.5) {
    const CoframeField field = make_field(h);
    const TorsionField t = torsion(field);
    const ConnectionComparison gap =
        connections_coincide(teleparallel_connection(field), riemann_cartan_connection(field),
                             std::nullopt, window);
    ConvergenceLevel row;
    row.h = field.grid().h;
    row.max_torsion = window ? t.max_in(*window) : t.max_norm;
    row.max_gap = gap.max_gap;
    row.evaluated = t.count;
    study.levels.push_back(row);
  }
  for (std::size_t i = 1; i < study.levels.size(); ++i) {
    const auto& prev = study.levels[i - 1];
    const auto& cur = study.levels[i];
    study.torsion_ratios.push_back(cur.max_torsion > 0.0 ? prev.max_torsion / cur.max_torsion
                                                         : std::numeric_limits<double>::infinity());
    study.gap_ratios.push_back(cur.max_gap > 0.0 ? prev.max_gap / cur.max_gap
                                                 : std::numeric_limits<double>::infinity());
  }
  return study;
}

}  // namespace latdef
