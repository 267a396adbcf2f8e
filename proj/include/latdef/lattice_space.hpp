#pragma once

// Affine frames of planar Bravais lattices and the action of SA(2,Z) on
// them. Basis vectors are stored as matrix rows; integer frame changes act
// from the left.

#include <optional>
#include <string>
#include <string_view>

#include "latdef/types.hpp"

namespace latdef {

inline constexpr double kDefaultIntegerTol = 1e-9;

// Oriented affine frame: an origin and two basis vectors (rows of `basis`).
class AffineFrame {
 public:
  AffineFrame() : AffineFrame(Vec2{0.0, 0.0}, Mat2::identity()) {}
  // Throws InputError unless the basis is finite with det > 0.
  AffineFrame(Vec2 origin, Mat2 basis);

  static AffineFrame unit() { return {}; }

  const Vec2& origin() const { return origin_; }
  const Mat2& basis() const { return basis_; }
  Vec2 a1() const { return basis_.row(0); }
  Vec2 a2() const { return basis_.row(1); }
  double area() const { return basis_.det(); }
  // 2-norm condition number of the basis matrix.
  double condition_number() const;

  // origin + m a1 + n a2
  Vec2 point(double m, double n) const { return origin_ + m * a1() + n * a2(); }
  // Lattice coordinates (m, n) of a plane point.
  Vec2 coordinates(const Vec2& p) const;

 private:
  Vec2 origin_;
  Mat2 basis_;
};

// Element of SA(2,Z): unimodular integer matrix A and integer translation b.
class GammaElement {
 public:
  GammaElement() : A_(IMat2::identity()) {}
  // Throws InputError unless det(A) == 1.
  GammaElement(IMat2 A, IVec2 b);

  static GammaElement identity() { return {}; }

  const IMat2& A() const { return A_; }
  const IVec2& b() const { return b_; }

  friend bool operator==(const GammaElement&, const GammaElement&) = default;

 private:
  IMat2 A_;
  IVec2 b_{};
};

// Element acting as g1 first, then g2.
GammaElement gamma_compose(const GammaElement& g1, const GammaElement& g2);
GammaElement gamma_invert(const GammaElement& g);
// New basis rows A * basis; new origin = origin + b^T basis.
AffineFrame gamma_apply(const GammaElement& g, const AffineFrame& r);

// Frames whose basis condition number exceeds this are refused.
inline constexpr double kMaxConditionNumber = 1e10;

// Witness g with gamma_apply(g, r1) == r2 within tol, if one exists.
// Throws NumericalError if r1 is ill-conditioned.
std::optional<GammaElement> frames_equivalent(const AffineFrame& r1, const AffineFrame& r2,
                                              double tol = kDefaultIntegerTol);

struct ReducedBasis {
  Vec2 b1;
  Vec2 b2;
  double norm1 = 0.0;
  double norm2 = 0.0;
  double inner = 0.0;  // b1 . b2
  // Unimodular change of basis: rows of (b1, b2) = transform * input basis.
  IMat2 transform = IMat2::identity();
  // Set when two candidate representatives tie within tolerance; the
  // returned choice is still deterministic.
  bool ambiguous = false;
};

// Lagrange-Gauss reduction with orientation kept positive. Among shortest
// candidates b1 has the smallest polar angle in [0, 2pi); b2 is the shortest
// positively oriented completion, ties broken by the smallest angle from b1.
ReducedBasis reduce_basis(const AffineFrame& r, double tol = kDefaultIntegerTol);

enum class LatticeClass { oblique, rectangular, square, hexagonal };

std::string_view to_string(LatticeClass c);
std::optional<LatticeClass> lattice_class_from_string(std::string_view s);

struct Classification {
  LatticeClass lattice_class = LatticeClass::oblique;
  // Advisory: rhombic (centered-rectangular) metric, i.e. |b1| = |b2| or
  // 2|b1.b2| = |b1|^2 without being square or hexagonal.
  bool centered_rectangular = false;
};

Classification classify(const AffineFrame& r, double tol = kDefaultIntegerTol);

struct AreaSplit {
  double area = 0.0;
  AffineFrame unimodular;  // basis / sqrt(area), same origin
};

AreaSplit area_split(const AffineFrame& r);

struct CanonicalForm {
  AffineFrame frame;
  bool ambiguous = false;
};

// Representative of the Gamma-orbit of r: reduced basis with deterministic
// tie-breaking and origin folded into [0,1)^2 lattice coordinates.
CanonicalForm canonical_form(const AffineFrame& r, double tol = kDefaultIntegerTol);

// Rigid rotation of the whole frame about the plane origin.
AffineFrame rotate(const AffineFrame& r, double angle);

}  // namespace latdef
