// AVX2 variants of the stencil kernels. Compiled with a function-level target
// attribute so the rest of the build stays baseline x86-64; only called after
// the dispatcher has checked CPU support. Arithmetic mirrors the scalar
// reference operation for operation (no FMA), so results are bit-identical.

#include <immintrin.h>

#include <algorithm>
#include <cmath>

#include "latdef/kernels.hpp"

#define LATDEF_AVX2 __attribute__((target("avx2")))

namespace latdef::kernels::avx2 {

LATDEF_AVX2 void diff_x(const double* f, double* out, std::size_t nx, std::size_t ny, double h) {
  const double inv2h = 0.5 / h;
  const __m256d vinv = _mm256_set1_pd(inv2h);
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t row = j * nx;
    out[row] = 0.0;
    if (nx < 2) continue;
    std::size_t i = 1;
    for (; i + 4 < nx; i += 4) {
      const __m256d right = _mm256_loadu_pd(f + row + i + 1);
      const __m256d left = _mm256_loadu_pd(f + row + i - 1);
      _mm256_storeu_pd(out + row + i, _mm256_mul_pd(_mm256_sub_pd(right, left), vinv));
    }
    for (; i + 1 < nx; ++i) out[row + i] = (f[row + i + 1] - f[row + i - 1]) * inv2h;
    out[row + nx - 1] = 0.0;
  }
}

LATDEF_AVX2 void diff_y(const double* f, double* out, std::size_t nx, std::size_t ny, double h) {
  const double inv2h = 0.5 / h;
  const __m256d vinv = _mm256_set1_pd(inv2h);
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t row = j * nx;
    if (j == 0 || j + 1 >= ny) {
      std::fill(out + row, out + row + nx, 0.0);
      continue;
    }
    std::size_t i = 0;
    for (; i + 4 <= nx; i += 4) {
      const __m256d up = _mm256_loadu_pd(f + row + nx + i);
      const __m256d down = _mm256_loadu_pd(f + row - nx + i);
      _mm256_storeu_pd(out + row + i, _mm256_mul_pd(_mm256_sub_pd(up, down), vinv));
    }
    for (; i < nx; ++i) out[row + i] = (f[row + nx + i] - f[row - nx + i]) * inv2h;
  }
}

LATDEF_AVX2 void curl(const double* fx, const double* fy, double* out, std::size_t nx, std::size_t ny,
                      double h) {
  const double inv2h = 0.5 / h;
  const __m256d vinv = _mm256_set1_pd(inv2h);
  for (std::size_t j = 0; j < ny; ++j) {
    const std::size_t row = j * nx;
    if (j == 0 || j + 1 >= ny || nx < 2) {
      std::fill(out + row, out + row + nx, 0.0);
      continue;
    }
    out[row] = 0.0;
    std::size_t i = 1;
    for (; i + 4 < nx; i += 4) {
      const std::size_t k = row + i;
      const __m256d dyx = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(fy + k + 1), _mm256_loadu_pd(fy + k - 1)), vinv);
      const __m256d dxy = _mm256_mul_pd(
          _mm256_sub_pd(_mm256_loadu_pd(fx + k + nx), _mm256_loadu_pd(fx + k - nx)), vinv);
      _mm256_storeu_pd(out + k, _mm256_sub_pd(dyx, dxy));
    }
    for (; i + 1 < nx; ++i) {
      const std::size_t k = row + i;
      out[k] = (fy[k + 1] - fy[k - 1]) * inv2h - (fx[k + nx] - fx[k - nx]) * inv2h;
    }
    out[row + nx - 1] = 0.0;
  }
}

LATDEF_AVX2 double max_abs_masked(const double* values, const std::uint8_t* mask, std::size_t n) {
  const __m256d sign = _mm256_set1_pd(-0.0);
  const __m256d zero = _mm256_setzero_pd();
  __m256d acc = zero;
  std::size_t k = 0;
  for (; k + 4 <= n; k += 4) {
    std::uint32_t bytes;
    __builtin_memcpy(&bytes, mask + k, 4);
    const __m256d m = _mm256_cvtepi32_pd(_mm_cvtepu8_epi32(_mm_cvtsi32_si128(static_cast<int>(bytes))));
    const __m256d keep = _mm256_cmp_pd(m, zero, _CMP_NEQ_OQ);
    const __m256d a = _mm256_andnot_pd(sign, _mm256_loadu_pd(values + k));
    acc = _mm256_max_pd(acc, _mm256_and_pd(a, keep));
  }
  alignas(32) double lanes[4];
  _mm256_store_pd(lanes, acc);
  double m = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
  for (; k < n; ++k)
    if (mask[k]) m = std::max(m, std::abs(values[k]));
  return m;
}

}  // namespace latdef::kernels::avx2
