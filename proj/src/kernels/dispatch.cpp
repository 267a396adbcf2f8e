#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "latdef/kernels.hpp"

namespace latdef::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(LATDEF_HAVE_AVX2) && (defined(__GNUC__) || defined(__clang__))
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}

Backend detect() {
  if (const char* env = std::getenv("LATDEF_SIMD"); env && std::string(env) == "scalar")
    return Backend::scalar;
  return cpu_has_avx2() ? Backend::avx2 : Backend::scalar;
}

std::atomic<Backend>& current() {
  static std::atomic<Backend> backend{detect()};
  return backend;
}

void check(std::size_t have, std::size_t need) {
  if (have < need) throw std::invalid_argument("kernel buffer smaller than the grid");
}

}  // namespace

std::string_view backend_name(Backend b) { return b == Backend::avx2 ? "avx2" : "scalar"; }

bool backend_available(Backend b) { return b == Backend::scalar || cpu_has_avx2(); }

Backend active_backend() { return current().load(std::memory_order_relaxed); }

void set_backend(Backend b) {
  if (!backend_available(b))
    throw std::invalid_argument("kernel backend " + std::string(backend_name(b)) + " unavailable");
  current().store(b, std::memory_order_relaxed);
}

#if defined(LATDEF_HAVE_AVX2)
#define LATDEF_DISPATCH(fn, ...) \
  (active_backend() == Backend::avx2 ? avx2::fn(__VA_ARGS__) : scalar::fn(__VA_ARGS__))
#else
#define LATDEF_DISPATCH(fn, ...) scalar::fn(__VA_ARGS__)
#endif

void diff_x(std::span<const double> f, std::span<double> out, std::size_t nx, std::size_t ny, double h) {
  check(f.size(), nx * ny);
  check(out.size(), nx * ny);
  LATDEF_DISPATCH(diff_x, f.data(), out.data(), nx, ny, h);
}

void diff_y(std::span<const double> f, std::span<double> out, std::size_t nx, std::size_t ny, double h) {
  check(f.size(), nx * ny);
  check(out.size(), nx * ny);
  LATDEF_DISPATCH(diff_y, f.data(), out.data(), nx, ny, h);
}

void curl(std::span<const double> fx, std::span<const double> fy, std::span<double> out, std::size_t nx,
          std::size_t ny, double h) {
  check(fx.size(), nx * ny);
  check(fy.size(), nx * ny);
  check(out.size(), nx * ny);
  LATDEF_DISPATCH(curl, fx.data(), fy.data(), out.data(), nx, ny, h);
}

double max_abs_masked(std::span<const double> values, std::span<const std::uint8_t> mask) {
  check(mask.size(), values.size());
  return LATDEF_DISPATCH(max_abs_masked, values.data(), mask.data(), values.size());
}

}  // namespace latdef::kernels
