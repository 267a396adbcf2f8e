#pragma once

// Random generators shared by the unit and acceptance tests.

#include <cmath>
#include <random>
#include <vector>

#include "latdef/defect_field.hpp"
#include "latdef/lattice_space.hpp"
#include "oracles.hpp"

namespace support {

using namespace latdef;

// Product of a few elementary shears and quarter turns, plus a translation.
inline GammaElement random_gamma(std::mt19937_64& g, int steps = 4, int shift = 5) {
  IMat2 a = IMat2::identity();
  const IMat2 gens[] = {IMat2{{{{1, 1}, {0, 1}}}}, IMat2{{{{1, 0}, {1, 1}}}}, IMat2{{{{1, -1}, {0, 1}}}},
                        IMat2{{{{1, 0}, {-1, 1}}}}, IMat2{{{{0, -1}, {1, 0}}}}};
  for (int s = 0; s < steps; ++s) a = gens[oracle::uniform_int(g, 0, 4)] * a;
  return GammaElement(a, IVec2{oracle::uniform_int(g, -shift, shift), oracle::uniform_int(g, -shift, shift)});
}

inline AffineFrame random_frame(std::mt19937_64& g) {
  while (true) {
    const Vec2 a1{oracle::uniform(g, -2, 2), oracle::uniform(g, -2, 2)};
    const Vec2 a2{oracle::uniform(g, -2, 2), oracle::uniform(g, -2, 2)};
    const Mat2 b = Mat2::from_rows(a1, a2);
    if (b.det() < 0.3) continue;
    return AffineFrame({oracle::uniform(g, -3, 3), oracle::uniform(g, -3, 3)}, b);
  }
}

// All (a, b) with |a|^2 - |b|^2 = 1 and |a|^2, |b|^2 <= 25.
inline std::vector<std::pair<GaussianInt, GaussianInt>> admissible_ab() {
  std::vector<std::pair<GaussianInt, GaussianInt>> out;
  for (int ar = -5; ar <= 5; ++ar)
    for (int ai = -5; ai <= 5; ++ai)
      for (int br = -5; br <= 5; ++br)
        for (int bi = -5; bi <= 5; ++bi) {
          const GaussianInt a{ar, ai}, b{br, bi};
          if (a.norm2() <= 25 && b.norm2() <= 25 && a.norm2() - b.norm2() == 1) out.push_back({a, b});
        }
  return out;
}

// Random valid charge at `center`: |c + d| <= 5 with c itself non-integral.
inline DefectCharge random_charge(std::mt19937_64& g, Vec2 center) {
  static const auto ab = admissible_ab();
  const auto& pick = ab[static_cast<std::size_t>(oracle::uniform_int(g, 0, static_cast<long long>(ab.size()) - 1))];
  GaussianInt s;
  do {
    s = {oracle::uniform_int(g, -5, 5), oracle::uniform_int(g, -5, 5)};
  } while (s.norm2() > 25);
  DefectCharge q;
  q.center = center;
  q.a = pick.first;
  q.b = pick.second;
  q.c = {oracle::uniform(g, -2, 2), oracle::uniform(g, -2, 2)};
  q.d = s.to_complex() - q.c;
  return q;
}

}  // namespace support
