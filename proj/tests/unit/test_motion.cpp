#include <cmath>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wiggle/motion.hpp"
#include "wiggle/squiggle.hpp"

using namespace wiggle;
using testing_support::random_parameter;

namespace {

Word random_word(std::mt19937_64& rng, int length) {
  std::string s;
  for (int i = 0; i < length; ++i) s += (rng() & 1) ? 'g' : 'f';
  return Word(s);
}

}  // namespace

TEST_CASE("word jets match the word map and central differences") {
  std::mt19937_64 rng(20);
  const double h = 1e-6;
  for (int trial = 0; trial < 50; ++trial) {
    const Parameter z(random_parameter(rng, 0.4));
    const Word w = random_word(rng, 1 + static_cast<int>(rng() % 12));
    const MapJet j = word_jet(w, z);
    const AffineMap m = word_map(w, z);
    CHECK(std::abs(j.a - m.a) <= 1e-13);
    CHECK(std::abs(j.b - m.b) <= 1e-13);
    for (Complex dir : {Complex{1.0, 0.0}, Complex{0.0, 1.0}}) {
      const AffineMap p = word_map(w, Parameter(z.value() + h * dir));
      const AffineMap q = word_map(w, Parameter(z.value() - h * dir));
      // Holomorphic: the directional derivative is f'(z) * dir.
      CHECK(std::abs((p.a - q.a) / (2.0 * h) - j.da * dir) <= 1e-6);
      CHECK(std::abs((p.b - q.b) / (2.0 * h) - j.db * dir) <= 1e-6);
    }
  }
}

TEST_CASE("region bounds hold on sampled parameters") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    const Complex c = random_parameter(rng, 0.3);
    const Disk region{c, 0.01};
    const RegionBounds rb = RegionBounds::over(region);
    const Word w = random_word(rng, 1 + static_cast<int>(rng() % 10));
    const PointBounds pb = point_bounds(w, 0.5, rb);
    const CoefficientBounds cb = coefficient_bounds(w, rb);
    const double rate = radius_rate_bound(w, rb);
    for (int i = 0; i < 100; ++i) {
      const Complex zp = c + std::polar(region.radius * std::sqrt(unit(rng)), 6.283185 * unit(rng));
      const Parameter z(zp);
      const MapJet j = word_jet(w, z);
      CHECK(std::abs(j.at(0.5)) <= pb.value + 1e-12);
      CHECK(std::abs(j.derivative_at(0.5)) <= pb.first + 1e-12);
      CHECK(std::abs(j.a) <= cb.value + 1e-12);
      CHECK(std::abs(j.a) >= cb.lower - 1e-12);
      CHECK(std::abs(j.da) <= cb.first + 1e-12);
      CHECK(bounding_radius(z) <= rb.radius_max + 1e-12);
      // Difference quotient of |a_w| R along a short chord.
      const Complex step = std::polar(1e-7, 6.283185 * unit(rng));
      if (std::abs(zp + step - c) < region.radius) {
        const Parameter z2(zp + step);
        const double s1 = std::abs(word_map(w, z).a) * bounding_radius(z);
        const double s2 = std::abs(word_map(w, z2).a) * bounding_radius(z2);
        CHECK(std::abs(s2 - s1) / 1e-7 <= rate * (1.0 + 1e-6) + 1e-9);
      }
    }
  }
}

TEST_CASE("region bounds reject regions leaving the contraction region") {
  CHECK_THROWS_AS(RegionBounds::over(Disk{{0.5, 0.0}, 0.6}), InvalidParameter);
  CHECK_NOTHROW(RegionBounds::over(Disk{{0.5, 0.0}, 0.4}));
}
