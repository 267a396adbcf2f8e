#pragma once

// Reference computations for the tests. None of these call into the code
// under test beyond plain value types.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <random>
#include <vector>

#include "latdef/types.hpp"

namespace oracle {

using latdef::Complex;
using latdef::Mat2;
using latdef::Vec2;

// Shortest non-zero vectors m a1 + n a2 with |m|, |n| <= range.
struct ShortestVectors {
  double length = 0.0;
  std::vector<Vec2> vectors;
};

inline ShortestVectors shortest_vectors(Vec2 a1, Vec2 a2, int range = 40, double rel_tol = 1e-9) {
  ShortestVectors out;
  out.length = INFINITY;
  for (int m = -range; m <= range; ++m)
    for (int n = -range; n <= range; ++n) {
      if (m == 0 && n == 0) continue;
      const Vec2 v{m * a1.x + n * a2.x, m * a1.y + n * a2.y};
      out.length = std::min(out.length, std::hypot(v.x, v.y));
    }
  for (int m = -range; m <= range; ++m)
    for (int n = -range; n <= range; ++n) {
      if (m == 0 && n == 0) continue;
      const Vec2 v{m * a1.x + n * a2.x, m * a1.y + n * a2.y};
      if (std::hypot(v.x, v.y) <= out.length * (1 + rel_tol)) out.vectors.push_back(v);
    }
  return out;
}

// Lattice points origin + m a1 + n a2, |m|,|n| <= r.
inline std::vector<Vec2> lattice_points(Vec2 origin, Vec2 a1, Vec2 a2, int r) {
  std::vector<Vec2> pts;
  for (int m = -r; m <= r; ++m)
    for (int n = -r; n <= r; ++n) pts.push_back({origin.x + m * a1.x + n * a2.x, origin.y + m * a1.y + n * a2.y});
  return pts;
}

// Distance from p to the nearest point of the full lattice (origin, a1, a2).
inline double distance_to_lattice(Vec2 p, Vec2 origin, Vec2 a1, Vec2 a2) {
  const double det = a1.x * a2.y - a1.y * a2.x;
  const double dx = p.x - origin.x, dy = p.y - origin.y;
  const double m = (dx * a2.y - dy * a2.x) / det;
  const double n = (a1.x * dy - a1.y * dx) / det;
  double best = INFINITY;
  for (int dm = -1; dm <= 1; ++dm)
    for (int dn = -1; dn <= 1; ++dn) {
      const double mm = std::round(m) + dm, nn = std::round(n) + dn;
      best = std::min(best, std::hypot(dx - mm * a1.x - nn * a2.x, dy - mm * a1.y - nn * a2.y));
    }
  return best;
}

// Real Jacobian of (Re f, Im f) by central differences.
inline Mat2 fd_jacobian(const std::function<Complex(Vec2)>& f, Vec2 z, double h) {
  const Complex fx = (f({z.x + h, z.y}) - f({z.x - h, z.y})) / (2 * h);
  const Complex fy = (f({z.x, z.y + h}) - f({z.x, z.y - h})) / (2 * h);
  Mat2 j;
  j.m[0][0] = fx.real();
  j.m[0][1] = fy.real();
  j.m[1][0] = fx.imag();
  j.m[1][1] = fy.imag();
  return j;
}

// Real 2x2 matrix of v -> a v + b conj(v) on the complex plane.
inline Mat2 real_linear_map(Complex a, Complex b) {
  const Complex e1 = a + b;                                  // image of 1
  const Complex e2 = a * Complex(0, 1) + b * Complex(0, -1);  // image of i
  Mat2 m;
  m.m[0][0] = e1.real();
  m.m[1][0] = e1.imag();
  m.m[0][1] = e2.real();
  m.m[1][1] = e2.imag();
  return m;
}

// Christoffel symbols G[i][j][k] = Gamma^i_{jk}.
using Christoffel = std::array<std::array<std::array<double, 2>, 2>, 2>;

// Metric diag(1, x^2): only Gamma^x_{yy} = -x and Gamma^y_{xy} = Gamma^y_{yx} = 1/x.
inline Christoffel levi_civita_diag_1_x(double x) {
  Christoffel g{};
  g[0][1][1] = -x;
  g[1][0][1] = 1.0 / x;
  g[1][1][0] = 1.0 / x;
  return g;
}

// theta = diag(1, x): (theta^-1)^i_a d_j theta^a_k, only Gamma^y_{xy} = 1/x.
inline Christoffel teleparallel_diag_1_x(double x) {
  Christoffel g{};
  g[1][0][1] = 1.0 / x;
  return g;
}

// Conformal metric lambda^2 delta, with grad(log lambda) = (gx, gy).
inline Christoffel levi_civita_conformal(double gx, double gy) {
  const double d[2] = {gx, gy};
  Christoffel g{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k)
        g[i][j][k] = (i == j ? d[k] : 0.0) + (i == k ? d[j] : 0.0) - (j == k ? d[i] : 0.0);
  return g;
}

// Coframe lambda I: Gamma^i_{jk} = delta^i_k d_j log lambda.
inline Christoffel teleparallel_conformal(double gx, double gy) {
  const double d[2] = {gx, gy};
  Christoffel g{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) g[i][j][i] = d[j];
  return g;
}

// Holomorphic map with derivative p(z) and second derivative p'(z): the
// coframe is multiplication by p, so Gamma_j is multiplication by d_j p / p.
inline Christoffel teleparallel_holomorphic(Complex p, Complex dp) {
  const Complex c[2] = {dp / p, Complex(0, 1) * dp / p};
  Christoffel g{};
  for (int j = 0; j < 2; ++j) {
    g[0][j][0] = c[j].real();
    g[0][j][1] = -c[j].imag();
    g[1][j][0] = c[j].imag();
    g[1][j][1] = c[j].real();
  }
  return g;
}

// Signed crossings of the ray {center + (t, 0), t > 0} by a closed polygon.
inline int ray_crossings(const std::vector<Vec2>& pts, Vec2 center) {
  int count = 0;
  for (std::size_t k = 0; k < pts.size(); ++k) {
    const Vec2 a{pts[k].x - center.x, pts[k].y - center.y};
    const Vec2 b{pts[(k + 1) % pts.size()].x - center.x, pts[(k + 1) % pts.size()].y - center.y};
    const bool up = a.y < 0 && b.y >= 0;
    const bool down = a.y >= 0 && b.y < 0;
    if (!up && !down) continue;
    const double x = a.x + (0 - a.y) * (b.x - a.x) / (b.y - a.y);
    if (x > 0) count += up ? 1 : -1;
  }
  return count;
}

// Winding of d/dz [coeff (z - z0)^n] around z0 for n != 0.
inline int derivative_winding_of_power(int n) { return n - 1; }

inline std::mt19937_64 rng(std::uint64_t seed) { return std::mt19937_64(seed); }

inline double uniform(std::mt19937_64& g, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(g);
}
inline long long uniform_int(std::mt19937_64& g, long long lo, long long hi) {
  return std::uniform_int_distribution<long long>(lo, hi)(g);
}

}  // namespace oracle
