#include <doctest.h>

#include <cmath>

#include "latdef/lattice_space.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace latdef;

namespace {

AffineFrame frame_rows(Vec2 a1, Vec2 a2, Vec2 origin = {0, 0}) { return AffineFrame(origin, Mat2::from_rows(a1, a2)); }

bool close(const Vec2& a, const Vec2& b, double tol = 1e-9) { return norm(a - b) <= tol; }

bool frames_close(const AffineFrame& r1, const AffineFrame& r2, double tol = 1e-9) {
  return close(r1.origin(), r2.origin(), tol) && close(r1.a1(), r2.a1(), tol) && close(r1.a2(), r2.a2(), tol);
}

}  // namespace

TEST_CASE("frames must be finite and positively oriented") {
  CHECK_THROWS_AS(frame_rows({0, 1}, {1, 0}), InputError);
  CHECK_THROWS_AS(frame_rows({1, 2}, {2, 4}), InputError);
  CHECK_THROWS_AS(frame_rows({NAN, 0}, {0, 1}), InputError);
  CHECK(frame_rows({1, 0}, {0, 1}).condition_number() == doctest::Approx(1.0));
  CHECK(frame_rows({4, 0}, {0, 1}).condition_number() == doctest::Approx(4.0));
}

TEST_CASE("gamma elements need det 1") {
  CHECK_THROWS_AS(GammaElement(IMat2{{{{2, 0}, {0, 1}}}}, {}), InputError);
  CHECK_THROWS_AS(GammaElement(IMat2{{{{0, 1}, {1, 0}}}}, {}), InputError);
  CHECK_NOTHROW(GammaElement(IMat2{{{{2, 1}, {1, 1}}}}, {3, 4}));
}

TEST_CASE("gamma group laws") {
  auto g = oracle::rng(11);
  const GammaElement e = GammaElement::identity();
  for (int trial = 0; trial < 200; ++trial) {
    const GammaElement a = support::random_gamma(g), b = support::random_gamma(g), c = support::random_gamma(g);
    CHECK(gamma_compose(e, a) == a);
    CHECK(gamma_compose(a, e) == a);
    CHECK(gamma_compose(a, gamma_invert(a)) == e);
    CHECK(gamma_compose(gamma_invert(a), a) == e);
    CHECK(gamma_compose(gamma_compose(a, b), c) == gamma_compose(a, gamma_compose(b, c)));
    CHECK(gamma_compose(a, b).A().det() == 1);
  }
}

TEST_CASE("composition matches successive actions") {
  auto g = oracle::rng(12);
  const GammaElement g1(IMat2{{{{1, 1}, {0, 1}}}}, {});
  const GammaElement g2(IMat2{{{{1, 0}, {1, 1}}}}, {});
  for (int trial = 0; trial < 50; ++trial) {
    const AffineFrame r = support::random_frame(g);
    CHECK(frames_close(gamma_apply(gamma_compose(g1, g2), r), gamma_apply(g2, gamma_apply(g1, r))));
    const GammaElement a = support::random_gamma(g), b = support::random_gamma(g);
    CHECK(frames_close(gamma_apply(gamma_compose(a, b), r), gamma_apply(b, gamma_apply(a, r)), 1e-8));
  }
}

TEST_CASE("gamma_apply examples") {
  const AffineFrame unit;
  CHECK(frames_close(gamma_apply(GammaElement::identity(), unit), unit));
  const AffineFrame sheared = gamma_apply(GammaElement(IMat2{{{{1, 1}, {0, 1}}}}, {}), unit);
  CHECK(close(sheared.a1(), {1, 1}));
  CHECK(close(sheared.a2(), {0, 1}));
  const AffineFrame moved = gamma_apply(GammaElement(IMat2::identity(), {2, 3}), unit);
  CHECK(close(moved.origin(), {2, 3}));
  CHECK(close(moved.a1(), {1, 0}));
}

TEST_CASE("gamma_apply preserves the lattice point set") {
  auto g = oracle::rng(13);
  for (int trial = 0; trial < 50; ++trial) {
    const AffineFrame r = support::random_frame(g);
    const AffineFrame s = gamma_apply(support::random_gamma(g), r);
    for (const Vec2& p : oracle::lattice_points(s.origin(), s.a1(), s.a2(), 3))
      CHECK(oracle::distance_to_lattice(p, r.origin(), r.a1(), r.a2()) < 1e-8);
    for (const Vec2& p : oracle::lattice_points(r.origin(), r.a1(), r.a2(), 3))
      CHECK(oracle::distance_to_lattice(p, s.origin(), s.a1(), s.a2()) < 1e-8);
  }
}

TEST_CASE("frames_equivalent examples") {
  const AffineFrame unit;
  CHECK_FALSE(frames_equivalent(unit, frame_rows({2, 0}, {0, 2})).has_value());
  const auto w = frames_equivalent(frame_rows({1, 0}, {0, 1}), frame_rows({0, 1}, {-1, 0}));
  REQUIRE(w.has_value());
  CHECK(w->A() == IMat2{{{{0, 1}, {-1, 0}}}});
  CHECK(w->b() == IVec2{});
  // Same basis, origin off the lattice.
  CHECK_FALSE(frames_equivalent(unit, AffineFrame({0.5, 0}, Mat2::identity())).has_value());
  CHECK_THROWS_AS(frames_equivalent(frame_rows({1, 0}, {1, 1e-12}), unit), NumericalError);
}

TEST_CASE("frames_equivalent recovers constructed witnesses and obeys the relation laws") {
  auto g = oracle::rng(14);
  for (int trial = 0; trial < 100; ++trial) {
    const AffineFrame r1 = support::random_frame(g);
    const GammaElement a = support::random_gamma(g), b = support::random_gamma(g);
    const AffineFrame r2 = gamma_apply(a, r1), r3 = gamma_apply(b, r2);
    const auto w12 = frames_equivalent(r1, r2);
    REQUIRE(w12.has_value());
    CHECK(*w12 == a);
    const auto w11 = frames_equivalent(r1, r1);
    REQUIRE(w11.has_value());
    CHECK(*w11 == GammaElement::identity());
    const auto w21 = frames_equivalent(r2, r1);
    REQUIRE(w21.has_value());
    CHECK(*w21 == gamma_invert(*w12));
    const auto w23 = frames_equivalent(r2, r3);
    const auto w13 = frames_equivalent(r1, r3);
    REQUIRE(w23.has_value());
    REQUIRE(w13.has_value());
    CHECK(*w13 == gamma_compose(*w12, *w23));
  }
}

TEST_CASE("reduce_basis examples") {
  const ReducedBasis unit = reduce_basis(AffineFrame{});
  CHECK(close(unit.b1, {1, 0}));
  CHECK(close(unit.b2, {0, 1}));

  const ReducedBasis r = reduce_basis(frame_rows({5, 0}, {13, 1}));
  CHECK(close(r.b1, {1, 2}));
  CHECK(close(r.b2, {-2, 1}));
  CHECK(r.norm1 == doctest::Approx(std::sqrt(5.0)));
  CHECK(r.inner == doctest::Approx(0.0));
  CHECK(r.transform.det() == 1);

  const ReducedBasis s = reduce_basis(frame_rows({1, 0}, {10, 1}));
  CHECK(close(s.b1, {1, 0}));
  CHECK(close(s.b2, {0, 1}));
}

TEST_CASE("reduce_basis against brute-force enumeration") {
  auto g = oracle::rng(15);
  for (int trial = 0; trial < 200; ++trial) {
    AffineFrame r = support::random_frame(g);
    r = gamma_apply(support::random_gamma(g, 6, 0), r);
    const ReducedBasis rb = reduce_basis(r);
    const auto best = oracle::shortest_vectors(r.a1(), r.a2(), 60);
    CHECK(rb.norm1 == doctest::Approx(best.length).epsilon(1e-9));
    CHECK(rb.norm1 <= rb.norm2 * (1 + 1e-12));
    CHECK(2 * std::abs(rb.inner) <= rb.norm1 * rb.norm1 * (1 + 1e-9));
    CHECK(cross(rb.b1, rb.b2) > 0);
    CHECK(rb.transform.det() == 1);
    const Mat2 rebuilt = rb.transform.to_real() * r.basis();
    CHECK(close(rebuilt.row(0), rb.b1, 1e-8));
    CHECK(close(rebuilt.row(1), rb.b2, 1e-8));
  }
}

TEST_CASE("classify examples") {
  CHECK(classify(AffineFrame{}).lattice_class == LatticeClass::square);
  CHECK(classify(frame_rows({1, 0}, {0.5, std::sqrt(3.0) / 2})).lattice_class == LatticeClass::hexagonal);
  CHECK(classify(frame_rows({1, 0}, {0.2, 1.3})).lattice_class == LatticeClass::oblique);
  CHECK(classify(frame_rows({2, 0}, {0, 1})).lattice_class == LatticeClass::rectangular);
  CHECK(classify(frame_rows({5, 0}, {13, 1})).lattice_class == LatticeClass::square);
  const Classification rhombic = classify(frame_rows({1, 0}, {0.3, 0.9539392014169456}));
  CHECK(rhombic.lattice_class == LatticeClass::oblique);
  CHECK(rhombic.centered_rectangular);
  CHECK_FALSE(classify(frame_rows({1, 0}, {0.2, 1.3})).centered_rectangular);
}

TEST_CASE("class names round trip") {
  for (auto c : {LatticeClass::oblique, LatticeClass::rectangular, LatticeClass::square, LatticeClass::hexagonal})
    CHECK(lattice_class_from_string(to_string(c)) == c);
  CHECK_FALSE(lattice_class_from_string("cubic").has_value());
}

TEST_CASE("classify is invariant under gamma and rotations") {
  auto g = oracle::rng(16);
  const double hex = std::sqrt(3.0) / 2;
  const AffineFrame bases[] = {AffineFrame{}, frame_rows({1, 0}, {0.5, hex}), frame_rows({2, 0}, {0, 1}),
                               frame_rows({1, 0}, {0.2, 1.3}), frame_rows({1.5, 0}, {0.75, 2.0})};
  for (const auto& base : bases) {
    const LatticeClass expected = classify(base).lattice_class;
    for (int trial = 0; trial < 40; ++trial) {
      const AffineFrame moved = rotate(gamma_apply(support::random_gamma(g), base), oracle::uniform(g, -4, 4));
      CHECK(classify(moved).lattice_class == expected);
    }
  }
}

TEST_CASE("area_split") {
  const AreaSplit unit = area_split(AffineFrame{});
  CHECK(unit.area == doctest::Approx(1.0));
  CHECK(frames_close(unit.unimodular, AffineFrame{}));
  const AreaSplit two = area_split(frame_rows({2, 0}, {0, 2}));
  CHECK(two.area == doctest::Approx(4.0));
  CHECK(close(two.unimodular.a1(), {1, 0}));
  const AreaSplit six = area_split(frame_rows({3, 0}, {1, 2}));
  CHECK(six.area == doctest::Approx(6.0));
  CHECK(close(six.unimodular.a1(), Vec2{3, 0} * (1 / std::sqrt(6.0))));
  auto g = oracle::rng(17);
  for (int trial = 0; trial < 100; ++trial)
    CHECK(std::abs(area_split(support::random_frame(g)).unimodular.area() - 1.0) <= 1e-12);
}

TEST_CASE("canonical_form") {
  const CanonicalForm unit = canonical_form(AffineFrame{});
  CHECK(frames_close(unit.frame, AffineFrame{}));
  CHECK(frames_close(canonical_form(AffineFrame({5, 7}, Mat2::identity())).frame, AffineFrame{}));
  auto g = oracle::rng(18);
  for (int trial = 0; trial < 30; ++trial) {
    const AffineFrame r = support::random_frame(g);
    const AffineFrame c = canonical_form(r).frame;
    CHECK(frames_equivalent(r, c).has_value());
    for (int k = 0; k < 20; ++k)
      CHECK(frames_close(canonical_form(gamma_apply(support::random_gamma(g), r)).frame, c, 1e-9));
  }
}
