#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "support.hpp"
#include "wiggle/geometry.hpp"

using namespace wiggle;
using testing_support::random_parameter;

namespace {

constexpr double kPi = std::numbers::pi;

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

Complex unit(double angle) { return std::polar(1.0, angle); }

// Minimum of |x - c| - r over dense samples of the ray polyline, out to a
// far cutoff along the escape direction.
// Distance to a fixed point is convex along each segment, so a ternary
// search per segment finds the minimum without projecting.
double searched_clearance(const Ray& r, const Disk& d) {
  std::vector<Complex> pts{r.anchor};
  for (Complex b : r.bends) pts.push_back(b);
  pts.push_back(r.last_point() + 100.0 * r.direction);
  double best = std::abs(pts.front() - d.center) - d.radius;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    auto dist = [&](double t) { return std::abs(pts[i] + (pts[i + 1] - pts[i]) * t - d.center); };
    double lo = 0.0, hi = 1.0;
    for (int k = 0; k < 200; ++k) {
      const double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (dist(m1) < dist(m2)) {
        hi = m2;
      } else {
        lo = m1;
      }
    }
    best = std::min({best, dist(0.5 * (lo + hi)) - d.radius, dist(1.0) - d.radius});
  }
  return best;
}

}  // namespace

TEST_CASE("letter maps at z = 1/2") {
  const Parameter half(Complex{0.5, 0.0});
  const AffineMap f = letter_map(Letter::F, half);
  CHECK(close(f.a, -0.5));
  CHECK(close(f.b, 0.5));
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Parameter z(random_parameter(rng, 0.49));
    CHECK(close(letter_map(Letter::F, z)(1.0), 0.0));
    CHECK(close(letter_map(Letter::G, z)(0.0), 1.0));
  }
}

TEST_CASE("parameters outside the contraction region are rejected") {
  CHECK_THROWS_AS(Parameter(Complex{1.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(Parameter(Complex{0.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(Parameter(Complex{0.5, 0.9}), InvalidParameter);
  CHECK_THROWS_AS(Parameter(Complex{std::nan(""), 0.0}), InvalidParameter);
  CHECK_NOTHROW(Parameter(Complex{0.5, 0.49}));
}

TEST_CASE("compose and invert") {
  const Parameter z(Complex{0.3, 0.2});
  const Complex zv = z.value();
  const AffineMap f = letter_map(Letter::F, z);
  const AffineMap g = letter_map(Letter::G, z);
  const AffineMap fg = compose(f, g);
  CHECK(close(fg.a, -zv * (zv - 1.0)));
  CHECK(close(fg.b, 0.0));
  const AffineMap id = compose(AffineMap::identity(), f);
  CHECK(close(id.a, f.a));
  CHECK(close(id.b, f.b));

  const AffineMap fi = invert(f);
  CHECK(close(fi.a, -1.0 / zv));
  CHECK(close(fi.b, 1.0));
  const AffineMap gi = invert(g);
  CHECK(close(gi.a, 1.0 / (zv - 1.0)));
  CHECK(close(gi.b, -1.0 / (zv - 1.0)));
  const AffineMap back = compose(f, fi);
  CHECK(close(back.a, 1.0));
  CHECK(close(back.b, 0.0));
  const AffineMap ii = invert(AffineMap::identity());
  CHECK(close(ii.a, 1.0));
  CHECK(close(ii.b, 0.0));
  CHECK_THROWS_AS(invert(AffineMap{0.0, 1.0}), SingularMap);
  CHECK_THROWS_AS(invert(AffineMap{1e-200, 1.0}, 1e-100), SingularMap);
}

TEST_CASE("composition law on random maps and points") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  auto rc = [&] { return Complex{u(rng), u(rng)}; };
  for (int i = 0; i < 1000; ++i) {
    const AffineMap m1{rc(), rc()};
    const AffineMap m2{rc(), rc()};
    const Complex x = rc();
    CHECK(close(compose(m1, m2)(x), m1(m2(x)), 1e-12 * (1.0 + std::abs(m1(m2(x))))));
  }
}

TEST_CASE("word maps, leftmost letter outermost") {
  const Parameter z(Complex{0.35, 0.25});
  const Complex zv = z.value();
  const AffineMap e = word_map(Word(""), z);
  CHECK(close(e.a, 1.0));
  CHECK(close(e.b, 0.0));
  const AffineMap ffg = word_map(Word("ffg"), z);
  CHECK(close(ffg.a, zv * zv * (zv - 1.0)));
  CHECK(close(ffg.b, zv));
  const AffineMap ggf = word_map(Word("ggf"), z);
  CHECK(close(ggf.a, -zv * (zv - 1.0) * (zv - 1.0)));
  CHECK(close(ggf.b, zv * (zv - 1.0) * (zv - 1.0) + zv));
}

TEST_CASE("generator identity ffg f^-1 = ggf g^-1") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 100; ++i) {
    const Parameter z(random_parameter(rng, 0.49));
    const Complex zv = z.value();
    const AffineMap lhs = compose(word_map(Word("ffg"), z), invert(letter_map(Letter::F, z)));
    const AffineMap rhs = compose(word_map(Word("ggf"), z), invert(letter_map(Letter::G, z)));
    const Complex a = -zv * (zv - 1.0);
    const Complex b = zv * zv * zv - zv * zv + zv;
    CHECK(close(lhs.a, rhs.a));
    CHECK(close(lhs.b, rhs.b));
    CHECK(close(lhs.a, a));
    CHECK(close(lhs.b, b));
  }
}

TEST_CASE("words") {
  const Word w("fgg");
  CHECK(w.size() == 3);
  CHECK(w.to_string() == "fgg");
  CHECK(w[0] == Letter::F);
  CHECK(w[2] == Letter::G);
  CHECK(w.count_f() == 1);
  CHECK(w.appended(Letter::F).to_string() == "fggf");
  CHECK(w.concat(Word("gf")).to_string() == "fgggf");
  CHECK(w.prefix(2).to_string() == "fg");
  CHECK(w.starts_with(Word("fg")));
  CHECK_FALSE(w.starts_with(Word("g")));
  CHECK(Word("FG") == Word("fg"));
  CHECK(Word("gg") < Word("fff"));
  CHECK_THROWS_AS(Word("fxg"), InvalidParameter);
  CHECK_THROWS_AS(Word(std::string(65, 'f')), InvalidParameter);
  CHECK_NOTHROW(Word(std::string(64, 'g')));
}

TEST_CASE("image disks") {
  const Parameter half(Complex{0.5, 0.0});
  const Disk b{0.5, 0.5};
  const Disk same = image_disk(AffineMap::identity(), b);
  CHECK(close(same.center, b.center));
  CHECK(same.radius == b.radius);
  const Disk fb = image_disk(letter_map(Letter::F, half), b);
  CHECK(close(fb.center, 0.25));
  CHECK(fb.radius == doctest::Approx(0.25));
  const Disk gb = image_disk(letter_map(Letter::G, half), b);
  CHECK(close(gb.center, 0.75));
  CHECK(gb.radius == doctest::Approx(0.25));
}

TEST_CASE("image disks are exact on boundary points") {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int trial = 0; trial < 10; ++trial) {
    const AffineMap m{{u(rng), u(rng)}, {u(rng), u(rng)}};
    const Disk d{{u(rng), u(rng)}, std::abs(u(rng))};
    const Disk img = image_disk(m, d);
    for (int i = 0; i < 1000; ++i) {
      const Complex p = d.center + std::polar(d.radius, angle(rng));
      CHECK(std::abs(std::abs(m(p) - img.center) - img.radius) <= 1e-12);
    }
  }
}

TEST_CASE("disk disjointness is strict") {
  CHECK(disks_disjoint({0.0, 1.0}, {3.0, 1.0}, 0.5));
  CHECK_FALSE(disks_disjoint({0.0, 1.0}, {1.5, 1.0}, 0.0));
  CHECK_FALSE(disks_disjoint({0.0, 1.0}, {2.0, 1.0}, 0.0));
  CHECK_FALSE(disks_disjoint({0.0, 1.0}, {3.0, 1.0}, 1.0));
  CHECK_THROWS_AS(disks_disjoint({0.0, 1.0}, {3.0, 1.0}, -1.0), InvalidParameter);
}

TEST_CASE("ray to disk clearance") {
  const Ray horizontal = Ray::straight(0.0, 1.0);
  CHECK(ray_disk_clearance(horizontal, {{0.0, 2.0}, 1.0}) == doctest::Approx(1.0));
  CHECK(ray_disk_clearance(horizontal, {{5.0, 0.0}, 0.75}) == doctest::Approx(-0.75));
  // Behind the anchor only the anchor distance counts.
  CHECK(ray_disk_clearance(horizontal, {{-3.0, 0.0}, 1.0}) == doctest::Approx(2.0));

  const Ray bent = Ray::make(0.0, {{1.0, 1.0}}, unit(-kPi / 3));
  const Disk d{{1.6, 0.2}, 0.3};
  CHECK(ray_disk_clearance(bent, d) == doctest::Approx(searched_clearance(bent, d)).epsilon(1e-9));

  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  for (int i = 0; i < 20; ++i) {
    const Ray r = Ray::make({u(rng), u(rng)}, {{u(rng), u(rng)}}, unit(angle(rng)));
    const Disk disk{{u(rng), u(rng)}, 0.2};
    CHECK(std::abs(ray_disk_clearance(r, disk) - searched_clearance(r, disk)) < 1e-9);
  }
}

TEST_CASE("ray validation and simplicity") {
  CHECK_THROWS_AS(Ray::make(0.0, {}, {2.0, 0.0}), InvalidParameter);
  CHECK_THROWS_AS(Ray::make(0.0, {1.0, 2.0, 3.0}, 1.0), InvalidParameter);
  CHECK(Ray::make(0.0, {{1.0, 1.0}}, 1.0).is_simple());
  // Doubles back across its own first segment.
  CHECK_FALSE(Ray::make(0.0, {{2.0, 0.0}, {1.0, 1.0}}, unit(-kPi / 2)).is_simple());
  const Ray moved = Ray::make(0.0, {{1.0, 1.0}}, 1.0).translated({0.5, -0.5});
  CHECK(close(moved.anchor, {0.5, -0.5}));
  CHECK(close(moved.bends[0], {1.5, 0.5}));
}

TEST_CASE("ray to ray distance") {
  const Ray a = Ray::straight(0.0, 1.0);
  const Ray b = Ray::straight({0.0, 1.0}, 1.0);
  CHECK(ray_ray_distance(a, b) == doctest::Approx(1.0));
  const Ray c = Ray::straight({2.0, -1.0}, {0.0, 1.0});
  CHECK(ray_ray_distance(a, c) == 0.0);
  const Ray d = Ray::straight({-1.0, 3.0}, {-1.0, 0.0});
  CHECK(ray_ray_distance(a, d) == doctest::Approx(std::hypot(1.0, 3.0)));
}

TEST_CASE("direction linking") {
  CHECK(directions_linked(unit(0), unit(kPi), unit(kPi / 2), unit(3 * kPi / 2)));
  CHECK_FALSE(directions_linked(unit(0), unit(kPi / 4), unit(kPi), unit(5 * kPi / 4)));
  CHECK_THROWS_AS(directions_linked(unit(0), unit(1e-8), unit(1), unit(2)), DegenerateDirections);
}

TEST_CASE("linking is invariant under rotation and swapping") {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * kPi);
  int linked = 0;
  for (int i = 0; i < 1000; ++i) {
    Complex d[4];
    for (Complex& x : d) x = unit(angle(rng));
    bool base;
    try {
      base = directions_linked(d[0], d[1], d[2], d[3]);
    } catch (const DegenerateDirections&) {
      continue;
    }
    linked += base ? 1 : 0;
    const Complex rot = unit(angle(rng));
    CHECK(directions_linked(d[0] * rot, d[1] * rot, d[2] * rot, d[3] * rot) == base);
    CHECK(directions_linked(d[1], d[0], d[2], d[3]) == base);
    CHECK(directions_linked(d[0], d[1], d[3], d[2]) == base);
    CHECK(directions_linked(d[2], d[3], d[0], d[1]) == base);
  }
  // One third of random configurations alternate.
  CHECK(linked > 250);
  CHECK(linked < 420);
}

TEST_CASE("planar primitives") {
  CHECK(cross({1.0, 0.0}, {0.0, 1.0}) == 1.0);
  CHECK(point_segment_distance({0.5, 1.0}, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(point_segment_distance({2.0, 0.0}, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(point_halfline_distance({-1.0, 1.0}, 0.0, 1.0) == doctest::Approx(std::sqrt(2.0)));
  CHECK(point_halfline_distance({5.0, 1.0}, 0.0, 1.0) == doctest::Approx(1.0));
  CHECK(segment_segment_distance(0.0, 1.0, {0.0, 1.0}, {1.0, 1.0}) == doctest::Approx(1.0));
  CHECK(segments_properly_cross({0.0, -1.0}, {0.0, 1.0}, {-1.0, 0.0}, {1.0, 0.0}));
  // Touching at an endpoint is not a proper crossing.
  CHECK_FALSE(segments_properly_cross(0.0, 1.0, 1.0, {2.0, 1.0}));
  CHECK(segments_touch(0.0, 1.0, 1.0, {2.0, 1.0}));
  CHECK_FALSE(segments_properly_cross(0.0, 2.0, 1.0, 3.0));
  CHECK_FALSE(segments_touch(0.0, 1.0, {0.0, 1.0}, {1.0, 1.0}));
}
