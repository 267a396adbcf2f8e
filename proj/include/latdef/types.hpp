#pragma once

// Small fixed-size value types shared by every module: plane points and
// vectors, 2x2 real and integer matrices, Gaussian integers and the
// exception hierarchy.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace latdef {

using Complex = std::complex<double>;

inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kTwoPi = 2.0 * kPi;

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2& operator+=(const Vec2& o) { x += o.x; y += o.y; return *this; }
  constexpr Vec2& operator-=(const Vec2& o) { x -= o.x; y -= o.y; return *this; }
  friend constexpr Vec2 operator+(Vec2 a, const Vec2& b) { return a += b; }
  friend constexpr Vec2 operator-(Vec2 a, const Vec2& b) { return a -= b; }
  friend constexpr Vec2 operator-(const Vec2& a) { return {-a.x, -a.y}; }
  friend constexpr Vec2 operator*(double s, const Vec2& a) { return {s * a.x, s * a.y}; }
  friend constexpr Vec2 operator*(const Vec2& a, double s) { return {s * a.x, s * a.y}; }
  friend constexpr bool operator==(const Vec2&, const Vec2&) = default;
};

constexpr double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
constexpr double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline Complex to_complex(const Vec2& v) { return {v.x, v.y}; }
inline Vec2 to_vec(const Complex& z) { return {z.real(), z.imag()}; }

// Row-major 2x2 real matrix. m[r][c].
struct Mat2 {
  std::array<std::array<double, 2>, 2> m{{{0.0, 0.0}, {0.0, 0.0}}};

  static constexpr Mat2 identity() { return Mat2{{{{1.0, 0.0}, {0.0, 1.0}}}}; }
  static constexpr Mat2 from_rows(const Vec2& r0, const Vec2& r1) {
    return Mat2{{{{r0.x, r0.y}, {r1.x, r1.y}}}};
  }

  constexpr double operator()(int r, int c) const { return m[r][c]; }
  constexpr double& operator()(int r, int c) { return m[r][c]; }
  constexpr Vec2 row(int r) const { return {m[r][0], m[r][1]}; }

  constexpr double det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  constexpr Mat2 transposed() const { return Mat2{{{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}}; }
  Mat2 inverse() const {
    const double d = det();
    if (d == 0.0) throw std::domain_error("singular 2x2 matrix");
    return Mat2{{{{m[1][1] / d, -m[0][1] / d}, {-m[1][0] / d, m[0][0] / d}}}};
  }

  constexpr Mat2& operator+=(const Mat2& o) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m[r][c] += o.m[r][c];
    return *this;
  }
  constexpr Mat2& operator-=(const Mat2& o) {
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) m[r][c] -= o.m[r][c];
    return *this;
  }
  friend constexpr Mat2 operator+(Mat2 a, const Mat2& b) { return a += b; }
  friend constexpr Mat2 operator-(Mat2 a, const Mat2& b) { return a -= b; }
  friend constexpr Mat2 operator*(double s, Mat2 a) {
    for (auto& row : a.m)
      for (auto& v : row) v *= s;
    return a;
  }
  friend constexpr Mat2 operator*(const Mat2& a, const Mat2& b) {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out.m[r][c] = a.m[r][0] * b.m[0][c] + a.m[r][1] * b.m[1][c];
    return out;
  }
  friend constexpr Vec2 operator*(const Mat2& a, const Vec2& v) {
    return {a.m[0][0] * v.x + a.m[0][1] * v.y, a.m[1][0] * v.x + a.m[1][1] * v.y};
  }
  friend constexpr bool operator==(const Mat2&, const Mat2&) = default;
};

// Largest absolute entry.
inline double max_abs(const Mat2& a) {
  return std::max(std::max(std::abs(a.m[0][0]), std::abs(a.m[0][1])),
                  std::max(std::abs(a.m[1][0]), std::abs(a.m[1][1])));
}
inline double frobenius(const Mat2& a) {
  return std::sqrt(a.m[0][0] * a.m[0][0] + a.m[0][1] * a.m[0][1] + a.m[1][0] * a.m[1][0] +
                   a.m[1][1] * a.m[1][1]);
}

struct IVec2 {
  std::int64_t x = 0;
  std::int64_t y = 0;
  friend constexpr bool operator==(const IVec2&, const IVec2&) = default;
  constexpr Vec2 to_real() const { return {static_cast<double>(x), static_cast<double>(y)}; }
};

// Row-major 2x2 integer matrix, exact arithmetic.
struct IMat2 {
  std::array<std::array<std::int64_t, 2>, 2> m{{{0, 0}, {0, 0}}};

  static constexpr IMat2 identity() { return IMat2{{{{1, 0}, {0, 1}}}}; }
  constexpr std::int64_t operator()(int r, int c) const { return m[r][c]; }
  constexpr std::int64_t det() const { return m[0][0] * m[1][1] - m[0][1] * m[1][0]; }
  constexpr IMat2 transposed() const { return IMat2{{{{m[0][0], m[1][0]}, {m[0][1], m[1][1]}}}}; }
  // Adjugate; equals the inverse when det == 1.
  constexpr IMat2 adjugate() const { return IMat2{{{{m[1][1], -m[0][1]}, {-m[1][0], m[0][0]}}}}; }
  Mat2 to_real() const {
    Mat2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out.m[r][c] = static_cast<double>(m[r][c]);
    return out;
  }
  friend constexpr IMat2 operator*(const IMat2& a, const IMat2& b) {
    IMat2 out;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) out.m[r][c] = a.m[r][0] * b.m[0][c] + a.m[r][1] * b.m[1][c];
    return out;
  }
  friend constexpr IVec2 operator*(const IMat2& a, const IVec2& v) {
    return {a.m[0][0] * v.x + a.m[0][1] * v.y, a.m[1][0] * v.x + a.m[1][1] * v.y};
  }
  friend constexpr bool operator==(const IMat2&, const IMat2&) = default;
};

struct GaussianInt {
  std::int64_t re = 0;
  std::int64_t im = 0;

  constexpr std::int64_t norm2() const { return re * re + im * im; }
  Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }
  friend constexpr GaussianInt operator+(const GaussianInt& a, const GaussianInt& b) {
    return {a.re + b.re, a.im + b.im};
  }
  friend constexpr GaussianInt operator-(const GaussianInt& a, const GaussianInt& b) {
    return {a.re - b.re, a.im - b.im};
  }
  friend constexpr bool operator==(const GaussianInt&, const GaussianInt&) = default;
};

// Integer recognition: x counts as integral iff |x - round(x)| <= tol * (1 + |x|).
inline bool is_near_integer(double x, double tol) {
  return std::isfinite(x) && std::abs(x - std::round(x)) <= tol * (1.0 + std::abs(x));
}

// ---- errors -------------------------------------------------------------

// Malformed or inconsistent input (bad files, invalid charges, bad regions).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Point or path outside the admissible domain (inside a puncture, at a pole).
class DomainError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Loop segments crossing holes and similar geometric violations.
class GeometryError : public InputError {
 public:
  using InputError::InputError;
};

// Results that cannot be determined numerically: ill conditioning, empty
// stencil sets, vanishing fields along a winding loop.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace latdef
