#include <cmath>
#include <numbers>

#include "doctest.h"
#include "wiggle/crossing.hpp"
#include "wiggle/embed.hpp"
#include "wiggle/island.hpp"
#include "wiggle/json_io.hpp"
#include "wiggle/squiggle.hpp"

using namespace wiggle;

namespace {

bool close(Complex a, Complex b, double tol = 1e-12) { return std::abs(a - b) <= tol; }

const Parameter& intersecting() {
  static const Parameter z(Complex{0.34, 0.47});
  return z;
}

// Best certificate at the intersecting parameter, computed once.
const CrossingCertificate& sample_certificate() {
  static const CrossingCertificate cert = [] {
    const auto certs = harvest_crossings(intersecting());
    REQUIRE_FALSE(certs.empty());
    return certs.front();
  }();
  return cert;
}

std::vector<Complex> mapped_curve(const Word& w, const Parameter& z, int depth) {
  const AffineMap m = word_map(w, z);
  std::vector<Complex> out;
  for (Complex p : iterate(z, depth).vertices) out.push_back(m(p));
  return out;
}

}  // namespace

TEST_CASE("ball unions") {
  const Parameter half(Complex{0.5, 0.0});
  const BallUnion b0 = ball_union(Word(""), 0, half);
  REQUIRE(b0.disks.size() == 1);
  CHECK(close(b0.disks[0].center, 0.5));
  CHECK(b0.disks[0].radius == doctest::Approx(0.5));
  const BallUnion b1 = ball_union(Word(""), 1, half);
  REQUIRE(b1.disks.size() == 2);
  CHECK(close(b1.disks[0].center, 0.25));
  CHECK(close(b1.disks[1].center, 0.75));
  CHECK(b1.disks[0].radius == doctest::Approx(0.25));
  CHECK_THROWS_AS(ball_union(Word("f"), 13, half), InvalidParameter);
  CHECK_THROWS_AS(ball_union(Word(std::string(60, 'f')), 5, half), InvalidParameter);
}

TEST_CASE("ball unions nest") {
  const Parameter z(Complex{0.4, 0.3});
  for (int n = 0; n < 6; ++n) {
    const BallUnion coarse = ball_union(Word("fg"), n, z);
    const BallUnion fine = ball_union(Word("fg"), n + 1, z);
    REQUIRE(fine.disks.size() == 2 * coarse.disks.size());
    for (std::size_t k = 0; k < fine.disks.size(); ++k) {
      const Disk& child = fine.disks[k];
      const Disk& parent = coarse.disks[k / 2];
      CHECK(std::abs(child.center - parent.center) + child.radius <= parent.radius + 1e-12);
    }
  }
}

TEST_CASE("affine ratios") {
  const Parameter z(Complex{0.3, 0.35});
  const Complex zv = z.value();
  const AffinePair same = affine_ratio(Word("fgf"), Word("fgf"), z);
  CHECK(close(same.alpha, 1.0));
  CHECK(close(same.beta, 0.0));
  const AffinePair e = affine_ratio(Word("ffg"), Word("ggf"), z);
  CHECK(close(e.alpha, -zv / (zv - 1.0)));
  CHECK(close(e.beta, 1.0));
  const AffinePair s = affine_ratio(Word("ff"), Word("gg"), z);
  const Complex q = zv * zv / ((zv - 1.0) * (zv - 1.0));
  CHECK(close(s.alpha, q));
  CHECK(close(s.beta, -q));
}

TEST_CASE("admissible word pairs") {
  CHECK(crossing_words_admissible(Word("fgf"), Word("ggf")));
  CHECK_FALSE(crossing_words_admissible(Word("gf"), Word("ff")));
  CHECK_FALSE(crossing_words_admissible(Word("ffgf"), Word("ggff")));
  CHECK_FALSE(find_crossing(Word("ffgg"), Word("ggfg"), 4, intersecting()).has_value());
}

TEST_CASE("far-apart pieces have no crossing") {
  // At z = 1/2 the pieces are disjoint intervals of the real line.
  const Parameter half(Complex{0.5, 0.0});
  CHECK_FALSE(find_crossing(Word("fff"), Word("ggg"), 4, half).has_value());
  // Synthetic: two clusters separated by far more than their size.
  const std::vector<Disk> left{{{-10.0, 0.0}, 0.1}, {{-10.2, 0.1}, 0.1}};
  const std::vector<Disk> right{{{10.0, 0.0}, 0.1}, {{10.2, 0.1}, 0.1}};
  CHECK_FALSE(
      search_linked_rays({9.9, 0.0}, {10.3, 0.1}, left, {-10.1, 0.0}, {-9.9, 0.1}, right)
          .has_value());
}

TEST_CASE("linked rays around a genuine crossing of two segments") {
  // Segment A from -1 to 1 and segment B from -i to i; thin disk chains.
  std::vector<Disk> a, b;
  for (int k = 0; k <= 20; ++k) {
    const double t = -1.0 + 0.1 * k;
    a.push_back({{t, 0.0}, 0.03});
    b.push_back({{0.0, t}, 0.03});
  }
  const auto rays = search_linked_rays(-1.0, 1.0, b, {0.0, -1.0}, {0.0, 1.0}, a);
  REQUIRE(rays.has_value());
  CHECK(rays->clearance > 0.0);
  const auto c = linked_rays_clearance(*rays, b, a);
  REQUIRE(c.has_value());
  CHECK(*c == doctest::Approx(rays->clearance));
}

TEST_CASE("certificate at an intersecting parameter") {
  const CrossingCertificate& cert = sample_certificate();
  CHECK(cert.clearance > 0.0);
  CHECK(cert.epsilon > 0.0);
  CHECK(crossing_words_admissible(cert.u, cert.v));
  CHECK(verify_crossing(cert, cert.z));
  CHECK(close(cert.r_minus.anchor, word_map(cert.u, cert.z)(0.0)));
  CHECK(close(cert.r_plus.anchor, word_map(cert.u, cert.z)(1.0)));
  CHECK(close(cert.s_minus.anchor, word_map(cert.v, cert.z)(0.0)));
  CHECK(close(cert.s_plus.anchor, word_map(cert.v, cert.z)(1.0)));
  CHECK(directions_linked(cert.r_plus, cert.r_minus, cert.s_plus, cert.s_minus));
  // Independent oracle: dense approximations of the two pieces meet.
  CHECK(polylines_intersect(mapped_curve(cert.u, cert.z, 12), mapped_curve(cert.v, cert.z, 12)));
  EmbedBudgets budgets;
  budgets.max_pairs = 200000;
  CHECK_FALSE(certify_in(cert.z, budgets).certified);
}

TEST_CASE("unlinking the escape directions breaks the certificate") {
  CrossingCertificate cert = sample_certificate();
  // Turn r+ to just past r-, counterclockwise, before either s direction:
  // the arc between them then holds neither s ray.
  const Complex base = cert.r_minus.direction;
  auto ccw = [&](Complex d) {
    const double a = std::arg(d / base);
    return a <= 0.0 ? a + 2.0 * std::numbers::pi : a;
  };
  const double gap = std::min({ccw(cert.s_plus.direction), ccw(cert.s_minus.direction),
                               ccw(cert.r_plus.direction)});
  cert.r_plus.direction = base * std::polar(1.0, 0.5 * gap);
  CHECK_FALSE(directions_linked(cert.r_plus, cert.r_minus, cert.s_plus, cert.s_minus));
  CHECK_FALSE(verify_crossing(cert, cert.z));
}

TEST_CASE("certificate holds on the 0.9 epsilon circle") {
  const CrossingCertificate& cert = sample_certificate();
  for (int k = 0; k < 16; ++k) {
    const Complex dz = std::polar(0.9 * cert.epsilon, 2.0 * std::numbers::pi * k / 16.0);
    CHECK(verify_crossing(cert, Parameter(cert.z.value() + dz)));
  }
}

TEST_CASE("stability radius edge cases") {
  CrossingCertificate cert = sample_certificate();
  const double eps = stability_radius(cert);
  CHECK(eps == doctest::Approx(cert.epsilon));
  CHECK(stability_radius(cert, cert.z, Disk{cert.z.value(), 1e-4}) <= 1e-4);
  // Region not containing z.
  CHECK(stability_radius(cert, cert.z, Disk{cert.z.value() + 1e-3, 1e-4}) == 0.0);
  cert.clearance = 0.5 * kDefaultTau;
  CHECK(stability_radius(cert) == 0.0);
}

TEST_CASE("clearance at a displaced parameter") {
  const CrossingCertificate& cert = sample_certificate();
  const auto here = crossing_clearance_at(cert, cert.z);
  REQUIRE(here.has_value());
  CHECK(*here == doctest::Approx(cert.clearance).epsilon(1e-9));
  const auto near = crossing_clearance_at(cert, Parameter(cert.z.value() + 0.5 * cert.epsilon));
  REQUIRE(near.has_value());
  CHECK(*near > 0.0);
}

TEST_CASE("certificate JSON round trip") {
  const CrossingCertificate& cert = sample_certificate();
  const Json j = to_json(cert);
  for (const char* key : {"u", "v", "n", "z", "clearance", "epsilon", "raysR", "raysS"}) {
    CHECK(j.contains(key));
  }
  CHECK(j["raysR"][0].contains("anchor"));
  CHECK(j["raysR"][0].contains("bends"));
  CHECK(j["raysR"][0].contains("dir"));
  const CrossingCertificate back = crossing_certificate_from_json(Json::parse(j.dump()));
  CHECK(back.u == cert.u);
  CHECK(back.v == cert.v);
  CHECK(back.n == cert.n);
  CHECK(back.z == cert.z);
  CHECK(back.clearance == cert.clearance);
  CHECK(back.epsilon == cert.epsilon);
  CHECK(back.r_plus.bends == cert.r_plus.bends);
  CHECK(verify_crossing(back, back.z));
  CHECK_THROWS_AS(crossing_certificate_from_json(Json::parse("{\"u\": \"fg\"}")), InvalidParameter);
}
