#pragma once

// The multivalued defect configuration
//
//   w(z) = (1/2 pi i) sum_i [ (a_i zeta_i + c_i) log zeta_i - (b_i zeta_i* + d_i) log zeta_i* ]
//          + w2(z, z*),       zeta_i = z - z_i,
//
// evaluated on explicit logarithm sheets, together with its Wirtinger
// derivatives p = dw/dz, q = dw/dz* and the real Jacobian of (Re w, Im w).

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "latdef/coframe.hpp"
#include "latdef/region.hpp"
#include "latdef/types.hpp"

namespace latdef {

struct DefectCharge {
  Vec2 center;
  GaussianInt a{1, 0};
  GaussianInt b{0, 0};
  Complex c{0.0, 0.0};
  Complex d{0.0, 0.0};

  // c + d rounded to the nearest Gaussian integer.
  GaussianInt translation() const;
};

// coeff * (z - center)^order, or coeff * (z* - center*)^order when conjugated.
struct MeromorphicTerm {
  Vec2 center;
  Complex coeff{1.0, 0.0};
  int order = 1;
  bool conjugated = false;

  static MeromorphicTerm identity() { return {}; }
};

struct FieldSpec {
  Region region;
  std::vector<DefectCharge> charges;
  std::vector<MeromorphicTerm> w2;
};

// Logarithm sheet offsets, one integer per charge; empty means principal.
struct BranchState {
  std::vector<std::int64_t> k;

  static BranchState principal(std::size_t n) { return {std::vector<std::int64_t>(n, 0)}; }
  std::int64_t at(std::size_t i) const { return i < k.size() ? k[i] : 0; }
};

// |a|^2 - |b|^2 = 1 and c + d a Gaussian integer within tol.
std::vector<Issue> validate_charge(const DefectCharge& charge, double tol = 1e-9);
// Region, every charge, charge placement (each center in its own hole) and
// pole placement (w2 poles inside holes).
std::vector<Issue> validate_spec(const FieldSpec& spec, double tol = 1e-9);

struct Derivatives {
  Complex p;  // dw/dz
  Complex q;  // dw/dz*
  Mat2 J;     // d(Re w, Im w)/d(x, y)

  double det() const { return J.det(); }
};

// Real Jacobian of a map with Wirtinger derivatives p, q.
Mat2 jacobian_from_wirtinger(Complex p, Complex q);

// Throws DomainError when z lies in a hole, outside the box or on a pole.
Complex eval_w(const FieldSpec& spec, Vec2 z, const BranchState& branch = {});
Derivatives eval_jacobian(const FieldSpec& spec, Vec2 z, const BranchState& branch = {});

// Sheet-free evaluation: `args[i]` is the continuous argument assigned to
// z - z_i, so log zeta_i = ln|zeta_i| + i args[i]. Used by continuation.
Complex eval_w_lifted(const FieldSpec& spec, Vec2 z, std::span<const double> args);
Derivatives eval_jacobian_lifted(const FieldSpec& spec, Vec2 z, std::span<const double> args);
// Contribution of one charge alone (no w2), on a lifted sheet.
Complex charge_term_w(const DefectCharge& q, Vec2 z, double arg);
void charge_term_wirtinger(const DefectCharge& q, Vec2 z, double arg, Complex& p, Complex& dq);

// Single-valued part w2 and its derivatives.
Complex eval_w2(const FieldSpec& spec, Vec2 z);
void eval_w2_wirtinger(const FieldSpec& spec, Vec2 z, Complex& p, Complex& q);

// Displacement u(x) = w(x) - x.
Vec2 eval_displacement(const FieldSpec& spec, Vec2 z, const BranchState& branch = {});

struct ImmersionReport {
  bool ok = true;
  double threshold = 0.0;
  double min_det = 0.0;
  std::vector<Vec2> degenerate;
};

// det J > delta at every point; delta defaults to 1e-10 * scale^2.
ImmersionReport immersion_check(const FieldSpec& spec, std::span<const Vec2> points,
                                const BranchState& branch = {},
                                std::optional<double> delta = std::nullopt);

// Principal sheet with cut rays pointing in -x from every charge center.
struct CutRule {
  BranchState branch;
  double on_cut_tol = 1e-9;  // relative to the grid spacing
};

// Coframe theta = J sampled on the grid nodes kept by `grid`. Nodes on a cut
// are invalid; nodes whose stencil crosses a cut carry CutFlag bits.
CoframeField coframe_from_spec(const FieldSpec& spec, const SampledGrid& grid,
                               const CutRule& rule = {});

}  // namespace latdef
