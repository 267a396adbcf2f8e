#include "latdef/holonomy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace latdef {

namespace {

struct QuadratureRule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

// Gauss-Legendre nodes on [-1, 1] by Newton iteration on P_n.
QuadratureRule gauss_legendre(int n) {
  QuadratureRule rule;
  rule.nodes.resize(static_cast<std::size_t>(n));
  rule.weights.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int iter = 0; iter < 100; ++iter) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-16) break;
    }
    rule.nodes[static_cast<std::size_t>(i)] = x;
    rule.weights[static_cast<std::size_t>(i)] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

double angle_between(const Vec2& u, const Vec2& v) { return std::atan2(cross(u, v), dot(u, v)); }

// Distance from a segment to the nearest point where the integrand is singular.
double singular_distance(const FieldSpec& spec, const Vec2& a, const Vec2& b) {
  auto seg = [&](const Vec2& p) {
    const Vec2 ab = b - a;
    const double len2 = dot(ab, ab);
    const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
    return norm(a + t * ab - p);
  };
  double d = std::numeric_limits<double>::infinity();
  for (const auto& q : spec.charges) d = std::min(d, seg(q.center));
  for (const auto& t : spec.w2)
    if (t.order < 1) d = std::min(d, seg(t.center));
  return d;
}

class Continuation {
 public:
  Continuation(const FieldSpec& spec, const ContinuationOptions& options)
      : spec_(spec), options_(options), rule_(gauss_legendre(options.quadrature_nodes)),
        per_charge_(spec.charges.size()) {}

  // Integrates along a -> b starting from lifted arguments `args` (updated).
  void segment(const Vec2& a, const Vec2& b, std::vector<double>& args, int depth) {
    const std::size_t n = spec_.charges.size();
    std::vector<double> step(n);
    bool split = false;
    for (std::size_t i = 0; i < n; ++i) {
      step[i] = angle_between(a - spec_.charges[i].center, b - spec_.charges[i].center);
      if (std::abs(step[i]) >= 0.5 * kPi) split = true;
    }
    if (norm(b - a) > 0.5 * singular_distance(spec_, a, b)) split = true;
    if (split) {
      if (depth >= options_.max_refinement)
        throw NumericalError("argument increment bound not met after maximum loop refinement");
      const Vec2 mid = 0.5 * (a + b);
      segment(a, mid, args, depth + 1);
      segment(mid, b, args, depth + 1);
      return;
    }

    const Vec2 half = 0.5 * (b - a);
    const Vec2 mid = 0.5 * (a + b);
    const Complex dz = to_complex(half);
    for (std::size_t m = 0; m < rule_.nodes.size(); ++m) {
      const Vec2 z = mid + rule_.nodes[m] * half;
      const double w = rule_.weights[m];
      for (std::size_t i = 0; i < n; ++i) {
        const auto& q = spec_.charges[i];
        const double arg = args[i] + angle_between(a - q.center, z - q.center);
        Complex p, dq;
        charge_term_wirtinger(q, z, arg, p, dq);
        per_charge_[i] += w * (p * dz + dq * std::conj(dz));
      }
      Complex p2, q2;
      eval_w2_wirtinger(spec_, z, p2, q2);
      w2_ += w * (p2 * dz + q2 * std::conj(dz));
    }
    for (std::size_t i = 0; i < n; ++i) args[i] += step[i];
    ++samples_;
  }

  const std::vector<Complex>& per_charge() const { return per_charge_; }
  Complex w2() const { return w2_; }
  std::size_t samples() const { return samples_; }

 private:
  const FieldSpec& spec_;
  ContinuationOptions options_;
  QuadratureRule rule_;
  std::vector<Complex> per_charge_;
  Complex w2_{};
  std::size_t samples_ = 0;
};

std::size_t puncture_of(const FieldSpec& spec, std::size_t charge) {
  const int hole = spec.region.puncture_at(spec.charges[charge].center);
  if (hole < 0) throw InputError("charge " + std::to_string(charge) + " is not inside a puncture");
  return static_cast<std::size_t>(hole);
}

}  // namespace

GammaConversion to_gamma_element(const CenteredAffine& h, double tol) {
  const Vec2 shift = h.center - h.M.to_real() * h.center + h.t.to_real();
  if (!is_near_integer(shift.x, tol) || !is_near_integer(shift.y, tol))
    return {std::nullopt,
            "translation (I - M) center + t is not integral; no standard SA(2,Z) form for this center"};
  return {GammaElement(h.M, IVec2{std::llround(shift.x), std::llround(shift.y)}), "ok"};
}

CenteredAffine closed_form_holonomy(const DefectCharge& charge) {
  const auto issues = validate_charge(charge);
  if (!issues.empty()) throw InputError("invalid charge: " + issues.front().message);
  const GaussianInt s = charge.a + charge.b;
  const GaussianInt d = charge.a - charge.b;
  CenteredAffine h;
  h.M = IMat2{{{{s.re, -d.im}, {s.im, d.re}}}};
  const GaussianInt t = charge.translation();
  h.t = IVec2{t.re, t.im};
  h.center = charge.center;
  return h;
}

ContinuationResult continue_along_loop(const FieldSpec& spec, const Loop& loop,
                                       const BranchState& base_branch,
                                       const ContinuationOptions& options) {
  validate_loop(loop, spec.region);
  const std::size_t n = spec.charges.size();
  const Vec2 base = loop.points.front();

  std::vector<double> start(n);
  for (std::size_t i = 0; i < n; ++i)
    start[i] = std::arg(to_complex(base - spec.charges[i].center)) +
               kTwoPi * static_cast<double>(base_branch.at(i));

  Continuation walk(spec, options);
  std::vector<double> args = start;
  const std::size_t m = loop.points.size();
  for (std::size_t s = 0; s < m; ++s) walk.segment(loop.points[s], loop.points[(s + 1) % m], args, 0);

  ContinuationResult out;
  out.samples = walk.samples();
  out.k.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double turns = (args[i] - start[i]) / kTwoPi;
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) >= 1e-6)
      throw NumericalError("continued argument is not a whole number of turns");
    out.k[i] = static_cast<std::int64_t>(rounded);
  }
  out.jump_per_charge = walk.per_charge();
  out.jump_w = walk.w2();
  for (const Complex& c : out.jump_per_charge) out.jump_w += c;
  out.jump_J = eval_jacobian_lifted(spec, base, args).J - eval_jacobian_lifted(spec, base, start).J;
  return out;
}

BurgersResult burgers_element(const FieldSpec& spec, const Loop& loop, const ClosedForm& closed_form) {
  BurgersResult out;
  out.windings = winding_numbers(loop, spec.region);
  const Vec2 base = loop.points.front();
  for (std::size_t i = 0; i < spec.charges.size(); ++i) {
    const std::size_t hole = puncture_of(spec, i);
    const int w = out.windings[hole];
    if (w == 0) continue;
    BurgersTerm term{i, hole, w, closed_form(spec.charges[i])};
    out.predicted_jump_w += static_cast<double>(w) * to_complex(term.element.apply(base));
    out.predicted_jump_J += static_cast<double>(w) * term.element.M.to_real();
    out.terms.push_back(term);
  }
  return out;
}

HolonomyVerification verify_g_equals_h(const FieldSpec& spec, const Loop& loop, double tol,
                                       const ClosedForm& closed_form) {
  HolonomyVerification v;
  v.predicted = burgers_element(spec, loop, closed_form);
  v.numeric = continue_along_loop(spec, loop);
  v.residual = std::abs(v.numeric.jump_w - v.predicted.predicted_jump_w) +
               frobenius(v.numeric.jump_J - v.predicted.predicted_jump_J);
  bool windings_agree = true;
  for (std::size_t i = 0; i < spec.charges.size(); ++i)
    if (v.numeric.k[i] != v.predicted.windings[puncture_of(spec, i)]) windings_agree = false;
  v.verified = windings_agree && v.residual <= tol;
  return v;
}

int winding_number_field(const FieldSpec& spec, const Loop& loop, double min_modulus) {
  validate_loop(loop, spec.region);
  const std::size_t n = spec.charges.size();

  struct State {
    Vec2 z;
    std::vector<double> args;
    Complex p;
  };
  auto evaluate = [&](State& s) {
    s.p = eval_jacobian_lifted(spec, s.z, s.args).p;
    if (!(std::abs(s.p) >= min_modulus))
      throw NumericalError("dw/dz nearly vanishes on the loop; winding is indeterminate");
  };
  // Moves along the straight segment s.z -> b; `wide` reports an argument
  // step too large to trust.
  auto advance = [&](const State& s, const Vec2& b, bool& wide) {
    State e{b, s.args, {}};
    for (std::size_t i = 0; i < n; ++i) {
      const double step = angle_between(s.z - spec.charges[i].center, b - spec.charges[i].center);
      if (std::abs(step) >= 0.5 * kPi) wide = true;
      e.args[i] += step;
    }
    evaluate(e);
    return e;
  };

  double total = 0.0;
  constexpr int kMaxDepth = 30;
  // Accumulates arg p along s.z -> b, bisecting until each half turns p by
  // less than pi/4.
  std::function<State(const State&, const Vec2&, int)> walk = [&](const State& s, const Vec2& b,
                                                                   int depth) {
    bool wide = false;
    const State m = advance(s, 0.5 * (s.z + b), wide);
    const State e = advance(m, b, wide);
    const double d1 = std::arg(m.p / s.p);
    const double d2 = std::arg(e.p / m.p);
    if (wide || std::abs(d1) > 0.25 * kPi || std::abs(d2) > 0.25 * kPi) {
      if (depth >= kMaxDepth) throw NumericalError("winding of dw/dz could not be resolved");
      return walk(walk(s, m.z, depth + 1), b, depth + 1);
    }
    total += d1 + d2;
    return e;
  };

  State s{loop.points.front(), std::vector<double>(n), {}};
  for (std::size_t i = 0; i < n; ++i) s.args[i] = std::arg(to_complex(s.z - spec.charges[i].center));
  evaluate(s);
  const std::size_t m = loop.points.size();
  for (std::size_t k = 1; k <= m; ++k) s = walk(s, loop.points[k % m], 0);

  const double turns = total / kTwoPi;
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 1e-6)
    throw NumericalError("dw/dz does not return to itself along the loop; winding is indeterminate");
  return static_cast<int>(rounded);
}

}  // namespace latdef
