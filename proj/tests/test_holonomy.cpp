#include <doctest.h>

#include <cmath>

#include "latdef/holonomy.hpp"
#include "latdef/presets.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace latdef;

namespace {

DefectCharge charge(GaussianInt a, GaussianInt b, Complex c = {}, Complex d = {}, Vec2 center = {0, 0}) {
  DefectCharge q;
  q.a = a;
  q.b = b;
  q.c = c;
  q.d = d;
  q.center = center;
  return q;
}

FieldSpec spec_with(std::vector<DefectCharge> charges, double hole = 0.5, Rect box = {{-4, -4}, {4, 4}}) {
  FieldSpec spec;
  spec.region.outer = box;
  for (const auto& q : charges) spec.region.punctures.push_back({q.center, hole});
  spec.charges = std::move(charges);
  spec.w2.push_back(MeromorphicTerm::identity());
  return spec;
}

bool same(const Mat2& a, const Mat2& b, double tol) { return max_abs(a - b) <= tol; }

}  // namespace

TEST_CASE("closed-form holonomy examples") {
  const CenteredAffine id = closed_form_holonomy(charge({1, 0}, {0, 0}));
  CHECK(id.is_identity());
  const CenteredAffine quarter = closed_form_holonomy(charge({0, 1}, {0, 0}));
  CHECK(quarter.M == IMat2{{{{0, -1}, {1, 0}}}});
  CHECK(quarter.M.det() == 1);
  const CenteredAffine hyp = closed_form_holonomy(charge({1, 1}, {1, 0}, {2, 3}));
  CHECK(hyp.M == IMat2{{{{2, -1}, {1, 0}}}});
  CHECK(hyp.t == IVec2{2, 3});
  CHECK(hyp.M.det() == 1);
  CHECK_THROWS_AS(closed_form_holonomy(charge({1, 0}, {1, 0})), InputError);
}

TEST_CASE("closed form agrees with the complex-linear oracle") {
  for (const auto& [a, b] : support::admissible_ab()) {
    const CenteredAffine h = closed_form_holonomy(charge(a, b));
    CHECK(same(h.M.to_real(), oracle::real_linear_map(a.to_complex(), b.to_complex()), 0.0));
    CHECK(h.M.det() == 1);
  }
}

TEST_CASE("identity element is unique among small charges") {
  int identities = 0;
  for (const auto& [a, b] : support::admissible_ab())
    for (int sr = -5; sr <= 5; ++sr)
      for (int si = -5; si <= 5; ++si) {
        if (sr * sr + si * si > 25) continue;
        const CenteredAffine h = closed_form_holonomy(charge(a, b, Complex(sr, si)));
        if (h.is_identity()) {
          ++identities;
          CHECK(a == GaussianInt{1, 0});
          CHECK(b == GaussianInt{0, 0});
          CHECK(sr == 0);
          CHECK(si == 0);
        }
      }
  CHECK(identities == 1);
}

TEST_CASE("closure under products and sums") {
  auto g = oracle::rng(41);
  const auto ab = support::admissible_ab();
  for (int trial = 0; trial < 200; ++trial) {
    IMat2 product = IMat2::identity();
    for (int k = 0; k < 4; ++k) {
      const auto& pick = ab[static_cast<std::size_t>(oracle::uniform_int(g, 0, static_cast<long long>(ab.size()) - 1))];
      const CenteredAffine h = closed_form_holonomy(charge(pick.first, pick.second));
      const int w = static_cast<int>(oracle::uniform_int(g, -2, 2));
      IMat2 power = IMat2::identity();
      for (int s = 0; s < std::abs(w); ++s) power = power * (w > 0 ? h.M : h.M.adjugate());
      product = product * power;
      CHECK(power.det() == 1);
    }
    CHECK(product.det() == 1);
  }
}

TEST_CASE("standard form conversion") {
  const CenteredAffine at_origin = closed_form_holonomy(charge({0, 1}, {0, 0}, {1, 0}));
  const GammaConversion ok = to_gamma_element(at_origin);
  REQUIRE(ok.element.has_value());
  CHECK(ok.element->A() == at_origin.M);
  CHECK(ok.element->b() == IVec2{1, 0});
  const CenteredAffine off = closed_form_holonomy(charge({0, 1}, {0, 0}, {}, {}, {0.5, 0.25}));
  const GammaConversion refused = to_gamma_element(off);
  CHECK_FALSE(refused.element.has_value());
  CHECK_FALSE(refused.status.empty());
  // A pure translation converts from any center.
  CHECK(to_gamma_element(closed_form_holonomy(charge({1, 0}, {0, 0}, {2, 0}, {}, {0.3, 0.7}))).element.has_value());
}

TEST_CASE("continuation examples") {
  FieldSpec spec = spec_with({charge({1, 0}, {0, 0}, {1, 0})});
  const Loop circle = make_circle_loop({0, 0}, 2, 1, 128);
  const ContinuationResult r = continue_along_loop(spec, circle);
  CHECK(std::abs(r.jump_w - Complex(3, 0)) < 1e-10);
  CHECK(same(r.jump_J, Mat2::identity(), 1e-10));
  CHECK(r.k == std::vector<std::int64_t>{1});

  const ContinuationResult twice = continue_along_loop(spec, make_circle_loop({0, 0}, 2, 2, 128));
  CHECK(std::abs(twice.jump_w - Complex(6, 0)) < 1e-10);
  CHECK(same(twice.jump_J, 2.0 * Mat2::identity(), 1e-10));
  CHECK(twice.k == std::vector<std::int64_t>{2});

  const ContinuationResult none = continue_along_loop(spec, make_circle_loop({2, 2}, 1, 1, 64));
  CHECK(std::abs(none.jump_w) < 1e-10);
  CHECK(max_abs(none.jump_J) < 1e-10);
  CHECK(none.k == std::vector<std::int64_t>{0});

  CHECK_THROWS_AS(continue_along_loop(spec, make_circle_loop({0, 0}, 0.4, 1, 64)), GeometryError);
}

TEST_CASE("coarse loops are refined until the argument steps are small") {
  FieldSpec spec = spec_with({charge({0, 1}, {0, 0}, {0, 1})});
  const Loop triangle{{{2, 0}, {-1, 1.9}, {-1, -1.9}}};
  const HolonomyVerification v = verify_g_equals_h(spec, triangle);
  CHECK(v.verified);
  CHECK(v.residual < 1e-8);
  CHECK(v.numeric.samples > 3);
}

TEST_CASE("burgers element examples") {
  FieldSpec spec = spec_with({charge({1, 0}, {0, 0}, {1, 0})});
  const BurgersResult one = burgers_element(spec, make_circle_loop({0, 0}, 1, 1, 64));
  REQUIRE(one.terms.size() == 1);
  CHECK(one.terms[0].winding == 1);
  CHECK(one.terms[0].element.M == IMat2::identity());
  CHECK(one.terms[0].element.t == IVec2{1, 0});
  CHECK(burgers_element(spec, make_circle_loop({2, 2}, 1, 1, 64)).terms.empty());

  FieldSpec two = spec_with({charge({0, 1}, {0, 0}, {}, {}, {-1.5, 0}), charge({1, 1}, {1, 0}, {2, 3}, {}, {1.5, 0})});
  const Loop both = make_circle_loop({0, 0}, 3, 1, 256);
  const BurgersResult sum = burgers_element(two, both);
  const BurgersResult left = burgers_element(two, make_circle_loop({-1.5, 0}, 1, 1, 64));
  const BurgersResult right = burgers_element(two, make_circle_loop({1.5, 0}, 1, 1, 64));
  CHECK(sum.terms.size() == 2);
  // Predicted jumps are affine in the base point; compare the linear parts.
  CHECK(same(sum.predicted_jump_J, left.predicted_jump_J + right.predicted_jump_J, 0.0));
  CHECK(verify_g_equals_h(two, both).verified);
}

TEST_CASE("identity charge holonomy is trivial") {
  FieldSpec spec = spec_with({charge({1, 0}, {0, 0})});
  const Loop loop = make_circle_loop({0, 0}, 1.5, 1, 64);
  const HolonomyVerification v = verify_g_equals_h(spec, loop);
  CHECK(v.verified);
  REQUIRE(v.predicted.terms.size() == 1);
  CHECK(v.predicted.terms[0].element.is_identity());
  // With the centered reading the jump of w is a zeta(base), and J jumps by I.
  CHECK(std::abs(v.numeric.jump_w - Complex(1.5, 0)) < 1e-10);
}

TEST_CASE("verification on random charges, loops and windings") {
  auto g = oracle::rng(42);
  for (int trial = 0; trial < 30; ++trial) {
    const Vec2 c{oracle::uniform(g, -1, 1), oracle::uniform(g, -1, 1)};
    FieldSpec spec = spec_with({support::random_charge(g, c)}, 0.3);
    const int turns = static_cast<int>(oracle::uniform_int(g, -2, 2));
    const double r = oracle::uniform(g, 0.7, 2.5);
    const Vec2 o = c + Vec2{oracle::uniform(g, -0.15, 0.15), oracle::uniform(g, -0.15, 0.15)};
    const Loop loop = turns == 0 ? make_circle_loop(c + Vec2{0, 1.2}, 0.3, 1, 32)
                                 : make_circle_loop(o, r, turns, 96);
    const HolonomyVerification v = verify_g_equals_h(spec, loop);
    CHECK(v.verified);
    CHECK(v.residual < 1e-8);
    CHECK(v.numeric.k[0] == turns);

    // Corrupted closed form: transposed M, which differs from M when Im a != 0.
    const ClosedForm transposed = [](const DefectCharge& q) {
      CenteredAffine h = closed_form_holonomy(q);
      h.M = h.M.transposed();
      return h;
    };
    if (turns != 0 && spec.charges[0].a.im != 0)
      CHECK_FALSE(verify_g_equals_h(spec, loop, 1e-8, transposed).verified);
  }
}

TEST_CASE("refinement invariance and additivity of jumps") {
  auto g = oracle::rng(43);
  for (int trial = 0; trial < 10; ++trial) {
    FieldSpec spec = spec_with({support::random_charge(g, {-1.5, 0}), support::random_charge(g, {1.5, 0})});
    const Loop a = make_circle_loop({-1.5, 0}, 1, 1, 64);  // base (-0.5, 0)
    const Loop b{{{-0.5, 0}, {-0.5, -2}, {3, -2}, {3, 2}, {-0.5, 2}}};
    const ContinuationResult ra = continue_along_loop(spec, a);
    const ContinuationResult rr = continue_along_loop(spec, refined(a));
    CHECK(std::abs(ra.jump_w - rr.jump_w) < 1e-10 * std::max(1.0, std::abs(ra.jump_w)));
    CHECK(same(ra.jump_J, rr.jump_J, 1e-10));
    CHECK(ra.k == rr.k);

    const ContinuationResult rb = continue_along_loop(spec, b);
    const ContinuationResult rab = continue_along_loop(spec, concatenate(a, b));
    CHECK(std::abs(rab.jump_w - (ra.jump_w + rb.jump_w)) < 1e-9 * std::max(1.0, std::abs(rab.jump_w)));
    CHECK(same(rab.jump_J, ra.jump_J + rb.jump_J, 1e-9));
    CHECK(rab.k == std::vector<std::int64_t>{1, 1});
  }
}

TEST_CASE("sheet change of the base point") {
  FieldSpec spec = spec_with({charge({1, 1}, {1, 0}, {0.5, 0}, {0.5, 2})});
  const Loop loop = make_circle_loop({0, 0}, 1.2, 1, 64);
  const ContinuationResult r0 = continue_along_loop(spec, loop);
  const ContinuationResult r1 = continue_along_loop(spec, loop, BranchState{{3}});
  CHECK(std::abs(r0.jump_w - r1.jump_w) < 1e-10);
  CHECK(same(r0.jump_J, r1.jump_J, 1e-10));
}

TEST_CASE("winding number of dw/dz") {
  FieldSpec id;
  id.region.outer = {{-2, -2}, {2, 2}};
  id.region.punctures.push_back({{0, 0}, 0.5});
  id.w2.push_back(MeromorphicTerm::identity());
  CHECK(winding_number_field(id, make_circle_loop({0, 0}, 1, 1, 64)) == 0);

  FieldSpec zero = id;
  zero.w2 = {{{0, 0}, {1, 0}, 2, false}};  // dw/dz = 2z, simple zero
  CHECK(winding_number_field(zero, make_circle_loop({0, 0}, 1, 1, 64)) == 1);
  CHECK(winding_number_field(zero, make_circle_loop({0, 0}, 1, -2, 64)) == -2);

  FieldSpec pole = id;
  pole.w2 = {{{0, 0}, {1, 0}, -1, false}};  // dw/dz = -1/z^2
  CHECK(winding_number_field(pole, make_circle_loop({0, 0}, 1, 1, 64)) == -2);

  for (int n : {-3, -2, 3, 4})
    for (Complex coeff : {Complex(1, 0), Complex(-0.5, 2)}) {
      FieldSpec s = id;
      s.w2 = {{{0.1, -0.1}, coeff, n, false}};
      CHECK(winding_number_field(s, make_circle_loop({0, 0}, 1.2, 1, 64)) ==
            oracle::derivative_winding_of_power(n));
    }
}
