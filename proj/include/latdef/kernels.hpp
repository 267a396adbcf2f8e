#pragma once

// Data-parallel stencil kernels over row-major nx * ny grids. Each kernel has
// a scalar reference implementation and, where the CPU allows, an AVX2
// variant; the active backend is chosen once at runtime.
//
// Nodes whose stencil leaves the grid are written as 0; callers mask them.

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace latdef::kernels {

enum class Backend { scalar, avx2 };

std::string_view backend_name(Backend b);
bool backend_available(Backend b);
// AVX2 when compiled in and supported by the CPU, unless the environment
// variable LATDEF_SIMD=scalar overrides it.
Backend active_backend();
// Throws std::invalid_argument if the backend is unavailable.
void set_backend(Backend b);

// out = (f[i+1] - f[i-1]) / (2h)
void diff_x(std::span<const double> f, std::span<double> out, std::size_t nx, std::size_t ny, double h);
// out = (f[j+1] - f[j-1]) / (2h)
void diff_y(std::span<const double> f, std::span<double> out, std::size_t nx, std::size_t ny, double h);
// out = d(fy)/dx - d(fx)/dy, the 2D exterior derivative of fx dx + fy dy.
void curl(std::span<const double> fx, std::span<const double> fy, std::span<double> out,
          std::size_t nx, std::size_t ny, double h);
// max |values[k]| over k with mask[k] != 0; 0 if none.
double max_abs_masked(std::span<const double> values, std::span<const std::uint8_t> mask);

namespace scalar {
void diff_x(const double* f, double* out, std::size_t nx, std::size_t ny, double h);
void diff_y(const double* f, double* out, std::size_t nx, std::size_t ny, double h);
void curl(const double* fx, const double* fy, double* out, std::size_t nx, std::size_t ny, double h);
double max_abs_masked(const double* values, const std::uint8_t* mask, std::size_t n);
}  // namespace scalar

namespace avx2 {
void diff_x(const double* f, double* out, std::size_t nx, std::size_t ny, double h);
void diff_y(const double* f, double* out, std::size_t nx, std::size_t ny, double h);
void curl(const double* fx, const double* fy, double* out, std::size_t nx, std::size_t ny, double h);
double max_abs_masked(const double* values, const std::uint8_t* mask, std::size_t n);
}  // namespace avx2

}  // namespace latdef::kernels
