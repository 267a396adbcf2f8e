#include "latdef/lattice_space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace latdef {

namespace {

bool finite(const Mat2& m) {
  for (const auto& row : m.m)
    for (double v : row)
      if (!std::isfinite(v)) return false;
  return true;
}

Mat2 apply_integer(const IMat2& t, const Mat2& basis) { return t.to_real() * basis; }

// Polar angle folded into [0, 2pi); values within `snap` below 2pi fold to 0.
double polar_angle(const Vec2& v, double snap) {
  double a = std::atan2(v.y, v.x);
  if (a < 0.0) a += kTwoPi;
  if (a >= kTwoPi - snap) a = 0.0;
  return a;
}

}  // namespace

AffineFrame::AffineFrame(Vec2 origin, Mat2 basis) : origin_(origin), basis_(basis) {
  if (!std::isfinite(origin.x) || !std::isfinite(origin.y) || !finite(basis))
    throw InputError("affine frame has non-finite entries");
  if (!(basis.det() > 0.0))
    throw InputError("affine frame basis must have positive determinant");
}

double AffineFrame::condition_number() const {
  const double s = frobenius(basis_) * frobenius(basis_);
  const double d = std::abs(basis_.det());
  const double disc = std::sqrt(std::max(0.0, s * s - 4.0 * d * d));
  const double smax2 = 0.5 * (s + disc);
  return smax2 / d;
}

Vec2 AffineFrame::coordinates(const Vec2& p) const {
  // p - origin = m a1 + n a2  <=>  (m, n) = (p - origin)^T basis^{-1}
  const Vec2 d = p - origin_;
  const Mat2 inv = basis_.inverse();
  return {d.x * inv(0, 0) + d.y * inv(1, 0), d.x * inv(0, 1) + d.y * inv(1, 1)};
}

GammaElement::GammaElement(IMat2 A, IVec2 b) : A_(A), b_(b) {
  if (A_.det() != 1) throw InputError("SA(2,Z) element requires det(A) = 1");
}

GammaElement gamma_compose(const GammaElement& g1, const GammaElement& g2) {
  const IMat2 A = g2.A() * g1.A();
  const IVec2 shift = g1.A().transposed() * g2.b();
  return {A, IVec2{g1.b().x + shift.x, g1.b().y + shift.y}};
}

GammaElement gamma_invert(const GammaElement& g) {
  const IMat2 inv = g.A().adjugate();
  const IVec2 b = inv.transposed() * g.b();
  return {inv, IVec2{-b.x, -b.y}};
}

AffineFrame gamma_apply(const GammaElement& g, const AffineFrame& r) {
  const Mat2 basis = apply_integer(g.A(), r.basis());
  const Vec2 origin = r.point(static_cast<double>(g.b().x), static_cast<double>(g.b().y));
  return {origin, basis};
}

std::optional<GammaElement> frames_equivalent(const AffineFrame& r1, const AffineFrame& r2,
                                              double tol) {
  if (r1.condition_number() > kMaxConditionNumber)
    throw NumericalError("reference frame basis is ill-conditioned");

  const Mat2 A_real = r2.basis() * r1.basis().inverse();
  IMat2 A;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) {
      if (!is_near_integer(A_real(i, j), tol)) return std::nullopt;
      A.m[i][j] = std::llround(A_real(i, j));
    }
  if (A.det() != 1) return std::nullopt;

  const Vec2 shift = r1.coordinates(r2.origin());
  if (!is_near_integer(shift.x, tol) || !is_near_integer(shift.y, tol)) return std::nullopt;
  const GammaElement g(A, IVec2{std::llround(shift.x), std::llround(shift.y)});

  // The rounded witness must reproduce r2.
  const AffineFrame image = gamma_apply(g, r1);
  const double scale = 1.0 + std::max(max_abs(r2.basis()), norm(r2.origin()));
  const double err = std::max(max_abs(image.basis() - r2.basis()), norm(image.origin() - r2.origin()));
  if (err > tol * scale) return std::nullopt;
  return g;
}

ReducedBasis reduce_basis(const AffineFrame& r, double tol) {
  const Mat2& input = r.basis();
  IMat2 t = IMat2::identity();
  Mat2 b = input;

  // Orientation-preserving Lagrange-Gauss: swaps are (b1, b2) -> (b2, -b1).
  // The slack keeps equal-norm and half-projection ties from cycling.
  constexpr double kSlack = 1e-12;
  for (int iter = 0;; ++iter) {
    if (iter > 10000) throw NumericalError("basis reduction did not terminate");
    const Vec2 b1 = b.row(0);
    const Vec2 b2 = b.row(1);
    if (dot(b2, b2) < dot(b1, b1) * (1.0 - kSlack)) {
      t = IMat2{{{{t.m[1][0], t.m[1][1]}, {-t.m[0][0], -t.m[0][1]}}}};
      b = apply_integer(t, input);
      continue;
    }
    const double mu_real = dot(b1, b2) / dot(b1, b1);
    if (!std::isfinite(mu_real)) throw InputError("degenerate basis");
    if (std::abs(mu_real) <= 0.5 + kSlack) break;
    const auto mu = static_cast<std::int64_t>(std::llround(mu_real));
    t.m[1][0] -= mu * t.m[0][0];
    t.m[1][1] -= mu * t.m[0][1];
    b = apply_integer(t, input);
  }

  // Deterministic representative among the small combinations of the
  // Gauss-reduced pair.
  const Vec2 g1 = b.row(0);
  const Vec2 g2 = b.row(1);
  const double shortest = norm(g1);
  const double angle_snap = 1e-12 + tol;
  const double near = std::sqrt(tol);

  struct Candidate {
    std::int64_t m, n;
    Vec2 v;
    double length;
  };
  std::vector<Candidate> candidates;
  constexpr int kRange = 3;
  for (int m = -kRange; m <= kRange; ++m)
    for (int n = -kRange; n <= kRange; ++n) {
      if (m == 0 && n == 0) continue;
      const Vec2 v = static_cast<double>(m) * g1 + static_cast<double>(n) * g2;
      candidates.push_back({m, n, v, norm(v)});
    }

  bool ambiguous = false;
  const Candidate* first = nullptr;
  double first_angle = 0.0;
  for (const auto& c : candidates) {
    const double rel = (c.length - shortest) / shortest;
    if (rel > tol) {
      if (rel <= near) ambiguous = true;
      continue;
    }
    const double raw = std::atan2(c.v.y, c.v.x) + (c.v.y < 0.0 ? kTwoPi : 0.0);
    if (raw < kTwoPi - angle_snap && raw >= kTwoPi - near) ambiguous = true;
    const double a = polar_angle(c.v, angle_snap);
    if (first == nullptr || a < first_angle) {
      if (first != nullptr && first_angle - a <= near) ambiguous = true;
      first = &c;
      first_angle = a;
    } else if (a - first_angle <= near) {
      ambiguous = true;
    }
  }

  // Completions (b1, v) with coefficient determinant +1.
  double completion_length = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates)
    if (first->m * c.n - first->n * c.m == 1) completion_length = std::min(completion_length, c.length);

  const Candidate* second = nullptr;
  double second_angle = 0.0;
  for (const auto& c : candidates) {
    if (first->m * c.n - first->n * c.m != 1) continue;
    const double rel = (c.length - completion_length) / completion_length;
    if (rel > tol) {
      if (rel <= near) ambiguous = true;
      continue;
    }
    const double a = std::atan2(cross(first->v, c.v), dot(first->v, c.v));
    if (second == nullptr || a < second_angle) {
      second = &c;
      second_angle = a;
    }
  }

  const IMat2 choice{{{{first->m, first->n}, {second->m, second->n}}}};
  t = choice * t;
  b = apply_integer(t, input);

  ReducedBasis out;
  out.b1 = b.row(0);
  out.b2 = b.row(1);
  out.norm1 = norm(out.b1);
  out.norm2 = norm(out.b2);
  out.inner = dot(out.b1, out.b2);
  out.transform = t;
  out.ambiguous = ambiguous;
  return out;
}

std::string_view to_string(LatticeClass c) {
  switch (c) {
    case LatticeClass::oblique: return "oblique";
    case LatticeClass::rectangular: return "rectangular";
    case LatticeClass::square: return "square";
    case LatticeClass::hexagonal: return "hexagonal";
  }
  return "oblique";
}

std::optional<LatticeClass> lattice_class_from_string(std::string_view s) {
  for (auto c : {LatticeClass::oblique, LatticeClass::rectangular, LatticeClass::square,
                 LatticeClass::hexagonal})
    if (to_string(c) == s) return c;
  return std::nullopt;
}

Classification classify(const AffineFrame& r, double tol) {
  const ReducedBasis rb = reduce_basis(r, tol);
  const double cosine = rb.inner / (rb.norm1 * rb.norm2);
  const bool equal = std::abs(rb.norm1 - rb.norm2) <= tol * rb.norm2;
  const bool orthogonal = std::abs(cosine) <= tol;
  const bool sixty = std::abs(std::abs(cosine) - 0.5) <= tol;
  const bool half_projection =
      std::abs(2.0 * std::abs(rb.inner) - rb.norm1 * rb.norm1) <= tol * rb.norm1 * rb.norm1;

  Classification out;
  if (equal && orthogonal) {
    out.lattice_class = LatticeClass::square;
  } else if (equal && sixty) {
    out.lattice_class = LatticeClass::hexagonal;
  } else if (orthogonal) {
    out.lattice_class = LatticeClass::rectangular;
  } else {
    out.lattice_class = LatticeClass::oblique;
    out.centered_rectangular = equal || half_projection;
  }
  return out;
}

AreaSplit area_split(const AffineFrame& r) {
  const double area = r.area();
  const double s = 1.0 / std::sqrt(area);
  return {area, AffineFrame(r.origin(), s * r.basis())};
}

CanonicalForm canonical_form(const AffineFrame& r, double tol) {
  const ReducedBasis rb = reduce_basis(r, tol);
  const AffineFrame reduced(r.origin(), Mat2::from_rows(rb.b1, rb.b2));

  // Lattice coordinates of the origin w.r.t. (0, b1, b2); the representative
  // lattice point has coordinates folded into [0,1)^2.
  const Vec2 c = -reduced.coordinates(Vec2{0.0, 0.0});
  auto fold = [tol](double v) {
    double f = v - std::floor(v);
    const double eps = tol * (1.0 + std::abs(v));
    if (f <= eps || f >= 1.0 - eps) f = 0.0;
    return f;
  };
  const Vec2 origin = fold(c.x) * rb.b1 + fold(c.y) * rb.b2;
  return {AffineFrame(origin, reduced.basis()), rb.ambiguous};
}

AffineFrame rotate(const AffineFrame& r, double angle) {
  const double c = std::cos(angle);
  const double s = std::sin(angle);
  auto rot = [c, s](const Vec2& v) { return Vec2{c * v.x - s * v.y, s * v.x + c * v.y}; };
  return {rot(r.origin()), Mat2::from_rows(rot(r.a1()), rot(r.a2()))};
}

}  // namespace latdef
