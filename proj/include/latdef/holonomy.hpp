#pragma once

// Analytic continuation of the defect configuration along loops, the
// closed-form holonomy element of each charge, and their cross-check.

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "latdef/defect_field.hpp"
#include "latdef/lattice_space.hpp"
#include "latdef/region.hpp"

namespace latdef {

// x -> M (x - center) + t with M integer, det M = 1, t integer.
struct CenteredAffine {
  IMat2 M = IMat2::identity();
  IVec2 t{};
  Vec2 center{};

  Vec2 apply(const Vec2& x) const { return M.to_real() * (x - center) + t.to_real(); }
  bool is_identity() const { return M == IMat2::identity() && t == IVec2{}; }
};

struct GammaConversion {
  std::optional<GammaElement> element;
  std::string status;
};

// Standard SA(2,Z) element (A, b) = (M, (I - M) center + t), available only
// when that translation is integral within tol.
GammaConversion to_gamma_element(const CenteredAffine& h, double tol = kDefaultIntegerTol);

// M = [[Re(a+b), -Im(a-b)], [Im(a+b), Re(a-b)]], t = (Re(c+d), Im(c+d)).
// Throws InputError for an invalid charge.
CenteredAffine closed_form_holonomy(const DefectCharge& charge);

struct ContinuationResult {
  Complex jump_w{};                  // w(end sheet) - w(start sheet) at the base point
  Mat2 jump_J{};                     // J(end sheet) - J(start sheet)
  std::vector<std::int64_t> k;       // net sheet increments per charge
  std::vector<Complex> jump_per_charge;
  std::size_t samples = 0;           // loop vertices after refinement
};

struct ContinuationOptions {
  int max_refinement = 24;     // bisection depth per segment
  int quadrature_nodes = 8;    // Gauss-Legendre nodes per refined segment
};

// Tracks the continuous argument of every z - z_i along the loop and
// integrates dw = p dz + q dz* on the lifted sheets. Throws GeometryError for
// loops meeting a hole and NumericalError when the argument-step bound cannot
// be met.
ContinuationResult continue_along_loop(const FieldSpec& spec, const Loop& loop,
                                       const BranchState& base_branch = {},
                                       const ContinuationOptions& options = {});

struct BurgersTerm {
  std::size_t charge = 0;
  std::size_t puncture = 0;
  int winding = 0;
  CenteredAffine element;
};

struct BurgersResult {
  std::vector<int> windings;  // per puncture
  std::vector<BurgersTerm> terms;  // charges with non-zero winding
  Complex predicted_jump_w{};
  Mat2 predicted_jump_J{};
};

using ClosedForm = std::function<CenteredAffine(const DefectCharge&)>;

BurgersResult burgers_element(const FieldSpec& spec, const Loop& loop,
                              const ClosedForm& closed_form = closed_form_holonomy);

struct HolonomyVerification {
  bool verified = false;
  double residual = 0.0;
  ContinuationResult numeric;
  BurgersResult predicted;
};

// residual = |jump_w - predicted| + ||jump_J - sum winding M||_F
HolonomyVerification verify_g_equals_h(const FieldSpec& spec, const Loop& loop, double tol = 1e-8,
                                       const ClosedForm& closed_form = closed_form_holonomy);

// Argument-principle winding of p = dw/dz along the loop, continued from the
// principal sheet at the base point. Throws NumericalError if |p| falls below
// `min_modulus` on the loop or the count is not an integer.
int winding_number_field(const FieldSpec& spec, const Loop& loop, double min_modulus = 1e-12);

}  // namespace latdef
