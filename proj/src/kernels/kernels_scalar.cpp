#include "latdef/kernels.hpp"

#include <cmath>

namespace latdef::kernels::scalar {

void diff_x(const double* f, double* out, std::size_t nx, std::size_t ny, double h) {
  const double inv2h = 0.5 / h;
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t row = j * nx;
    out[row] = 0.0;
    for (std::size_t i = 1; i + 1 < nx; ++i) out[row + i] = (f[row + i + 1] - f[row + i - 1]) * inv2h;
    if (nx > 1) out[row + nx - 1] = 0.0;
  }
}

void diff_y(const double* f, double* out, std::size_t nx, std::size_t ny, double h) {
  const double inv2h = 0.5 / h;
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t row = j * nx;
    if (j == 0 || j + 1 >= ny) {
      for (std::size_t i = 0; i < nx; ++i) out[row + i] = 0.0;
      continue;
    }
    for (std::size_t i = 0; i < nx; ++i) out[row + i] = (f[row + nx + i] - f[row - nx + i]) * inv2h;
  }
}

void curl(const double* fx, const double* fy, double* out, std::size_t nx, std::size_t ny, double h) {
  const double inv2h = 0.5 / h;
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t row = j * nx;
    const bool edge_row = j == 0 || j + 1 >= ny;
    for (std::size_t i = 0; i < nx; ++i) {
      if (edge_row || i == 0 || i + 1 >= nx) {
        out[row + i] = 0.0;
        continue;
      }
      const std::size_t k = row + i;
      out[k] = (fy[k + 1] - fy[k - 1]) * inv2h - (fx[k + nx] - fx[k - nx]) * inv2h;
    }
  }
}

double max_abs_masked(const double* values, const std::uint8_t* mask, std::size_t n) {
  double m = 0.0;
  for (std::size_t k = 0; k < n; ++k)
    if (mask[k]) m = std::max(m, std::abs(values[k]));
  return m;
}

}  // namespace latdef::kernels::scalar
