#include "latdef/defect_field.hpp"

#include <algorithm>
#include <limits>
#include <cmath>
#include <string>

namespace latdef {

namespace {

const Complex kTwoPiI{0.0, kTwoPi};

Complex ipow(Complex s, int n) {
  if (n < 0) return 1.0 / ipow(s, -n);
  Complex out{1.0, 0.0};
  Complex base = s;
  for (int e = n; e > 0; e >>= 1) {
    if (e & 1) out *= base;
    base *= base;
  }
  return out;
}

void check_domain(const FieldSpec& spec, Vec2 z) {
  if (!std::isfinite(z.x) || !std::isfinite(z.y)) throw DomainError("evaluation point is not finite");
  if (!spec.region.contains(z)) throw DomainError("evaluation point lies outside the body");
  for (const auto& q : spec.charges)
    if (z == q.center) throw DomainError("evaluation point coincides with a defect center");
  for (const auto& t : spec.w2)
    if (t.order < 0 && z == t.center) throw DomainError("evaluation point is a pole of w2");
}

std::vector<double> principal_args(const FieldSpec& spec, Vec2 z, const BranchState& branch) {
  std::vector<double> args(spec.charges.size());
  for (std::size_t i = 0; i < spec.charges.size(); ++i) {
    const Complex zeta = to_complex(z - spec.charges[i].center);
    args[i] = std::arg(zeta) + kTwoPi * static_cast<double>(branch.at(i));
  }
  return args;
}

void check_args(const FieldSpec& spec, std::span<const double> args) {
  if (args.size() != spec.charges.size())
    throw InputError("one lifted argument per charge is required");
}

}  // namespace

GaussianInt DefectCharge::translation() const {
  const Complex s = c + d;
  return {std::llround(s.real()), std::llround(s.imag())};
}

std::vector<Issue> validate_charge(const DefectCharge& charge, double tol) {
  std::vector<Issue> issues;
  const std::int64_t det = charge.a.norm2() - charge.b.norm2();
  if (det != 1)
    issues.push_back({IssueKind::norm_condition,
                      "|a|^2 - |b|^2 = " + std::to_string(det) + ", must equal 1"});
  const Complex s = charge.c + charge.d;
  if (!is_near_integer(s.real(), tol) || !is_near_integer(s.imag(), tol))
    issues.push_back({IssueKind::non_integer, "c + d is not a Gaussian integer"});
  if (!std::isfinite(charge.center.x) || !std::isfinite(charge.center.y))
    issues.push_back({IssueKind::invalid_value, "charge center is not finite"});
  return issues;
}

std::vector<Issue> validate_spec(const FieldSpec& spec, double tol) {
  std::vector<Issue> issues = validate_region(spec.region);
  std::vector<int> occupied(spec.region.punctures.size(), -1);
  for (std::size_t i = 0; i < spec.charges.size(); ++i) {
    for (Issue& issue : validate_charge(spec.charges[i], tol)) {
      issue.message = "charge " + std::to_string(i) + ": " + issue.message;
      issues.push_back(std::move(issue));
    }
    const int hole = spec.region.puncture_at(spec.charges[i].center);
    if (hole < 0) {
      issues.push_back({IssueKind::charge_placement,
                        "charge " + std::to_string(i) + " center is not inside a puncture"});
    } else if (occupied[static_cast<std::size_t>(hole)] >= 0) {
      issues.push_back({IssueKind::charge_placement,
                        "charges " + std::to_string(occupied[static_cast<std::size_t>(hole)]) +
                            " and " + std::to_string(i) + " share puncture " + std::to_string(hole)});
    } else {
      occupied[static_cast<std::size_t>(hole)] = static_cast<int>(i);
    }
  }
  for (std::size_t i = 0; i < spec.w2.size(); ++i) {
    const auto& t = spec.w2[i];
    if (!std::isfinite(t.coeff.real()) || !std::isfinite(t.coeff.imag()))
      issues.push_back({IssueKind::invalid_value, "w2 term " + std::to_string(i) + " coefficient is not finite"});
    if (t.order < 0 && spec.region.puncture_at(t.center) < 0)
      issues.push_back({IssueKind::pole_placement,
                        "w2 term " + std::to_string(i) + " has a pole outside every puncture"});
  }
  return issues;
}

Mat2 jacobian_from_wirtinger(Complex p, Complex q) {
  const Complex s = p + q;
  const Complex t = p - q;
  Mat2 J;
  J(0, 0) = s.real();
  J(0, 1) = -t.imag();
  J(1, 0) = s.imag();
  J(1, 1) = t.real();
  return J;
}

Complex charge_term_w(const DefectCharge& q, Vec2 z, double arg) {
  const Complex zeta = to_complex(z - q.center);
  const double log_r = std::log(std::abs(zeta));
  const Complex log_zeta{log_r, arg};
  const Complex log_conj{log_r, -arg};
  const Complex holo = (q.a.to_complex() * zeta + q.c) * log_zeta;
  const Complex anti = (q.b.to_complex() * std::conj(zeta) + q.d) * log_conj;
  return (holo - anti) / kTwoPiI;
}

void charge_term_wirtinger(const DefectCharge& q, Vec2 z, double arg, Complex& p, Complex& dq) {
  const Complex zeta = to_complex(z - q.center);
  const double log_r = std::log(std::abs(zeta));
  const Complex log_zeta{log_r, arg};
  const Complex log_conj{log_r, -arg};
  const Complex a = q.a.to_complex();
  const Complex b = q.b.to_complex();
  p = (a * log_zeta + a + q.c / zeta) / kTwoPiI;
  dq = -(b * log_conj + b + q.d / std::conj(zeta)) / kTwoPiI;
}

Complex eval_w2(const FieldSpec& spec, Vec2 z) {
  Complex w{0.0, 0.0};
  for (const auto& t : spec.w2) {
    Complex s = to_complex(z - t.center);
    if (t.conjugated) s = std::conj(s);
    w += t.coeff * ipow(s, t.order);
  }
  return w;
}

void eval_w2_wirtinger(const FieldSpec& spec, Vec2 z, Complex& p, Complex& q) {
  p = q = Complex{0.0, 0.0};
  for (const auto& t : spec.w2) {
    if (t.order == 0) continue;
    Complex s = to_complex(z - t.center);
    if (t.conjugated) s = std::conj(s);
    const Complex term = static_cast<double>(t.order) * t.coeff * ipow(s, t.order - 1);
    (t.conjugated ? q : p) += term;
  }
}

Complex eval_w_lifted(const FieldSpec& spec, Vec2 z, std::span<const double> args) {
  check_args(spec, args);
  check_domain(spec, z);
  Complex w = eval_w2(spec, z);
  for (std::size_t i = 0; i < spec.charges.size(); ++i) w += charge_term_w(spec.charges[i], z, args[i]);
  return w;
}

Derivatives eval_jacobian_lifted(const FieldSpec& spec, Vec2 z, std::span<const double> args) {
  check_args(spec, args);
  check_domain(spec, z);
  Derivatives out;
  eval_w2_wirtinger(spec, z, out.p, out.q);
  for (std::size_t i = 0; i < spec.charges.size(); ++i) {
    Complex p, q;
    charge_term_wirtinger(spec.charges[i], z, args[i], p, q);
    out.p += p;
    out.q += q;
  }
  out.J = jacobian_from_wirtinger(out.p, out.q);
  return out;
}

Complex eval_w(const FieldSpec& spec, Vec2 z, const BranchState& branch) {
  check_domain(spec, z);
  const auto args = principal_args(spec, z, branch);
  return eval_w_lifted(spec, z, args);
}

Derivatives eval_jacobian(const FieldSpec& spec, Vec2 z, const BranchState& branch) {
  check_domain(spec, z);
  const auto args = principal_args(spec, z, branch);
  return eval_jacobian_lifted(spec, z, args);
}

Vec2 eval_displacement(const FieldSpec& spec, Vec2 z, const BranchState& branch) {
  return to_vec(eval_w(spec, z, branch)) - z;
}

ImmersionReport immersion_check(const FieldSpec& spec, std::span<const Vec2> points,
                                const BranchState& branch, std::optional<double> delta) {
  ImmersionReport report;
  const double scale = spec.region.scale();
  report.threshold = delta.value_or(1e-10 * scale * scale);
  report.min_det = std::numeric_limits<double>::infinity();
  for (const Vec2& z : points) {
    const double det = eval_jacobian(spec, z, branch).det();
    report.min_det = std::min(report.min_det, det);
    if (!(det > report.threshold)) report.degenerate.push_back(z);
  }
  report.ok = report.degenerate.empty();
  return report;
}

CoframeField coframe_from_spec(const FieldSpec& spec, const SampledGrid& grid, const CutRule& rule) {
  const GridGeometry& g = grid.geometry;
  std::vector<Mat2> theta(g.size());
  std::vector<std::uint8_t> valid(g.size(), 0);
  std::vector<std::uint8_t> flags(g.size(), 0);
  const double on_cut = rule.on_cut_tol * g.h;

  for (std::size_t idx = 0; idx < g.size(); ++idx) {
    if (!grid.inside[idx]) continue;
    const Vec2 z = g.point(idx);
    bool on_ray = false;
    std::uint8_t f = 0;
    for (const auto& q : spec.charges) {
      if (!(z.x < q.center.x)) continue;
      const double dy = q.center.y - z.y;
      if (std::abs(dy) <= on_cut) {
        on_ray = true;
        break;
      }
      if (dy > 0.0 && dy <= g.h + on_cut) f |= kCutYPlus;
      if (dy < 0.0 && -dy <= g.h + on_cut) f |= kCutYMinus;
    }
    if (on_ray) continue;
    const Derivatives d = eval_jacobian(spec, z, rule.branch);
    const double det = d.det();
    if (!std::isfinite(det) || det == 0.0) continue;
    theta[idx] = d.J;
    valid[idx] = 1;
    flags[idx] = f;
  }
  return CoframeField(g, std::move(theta), std::move(valid), std::move(flags));
}

}  // namespace latdef
