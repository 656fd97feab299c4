#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>

#include "doctest.h"
#include "wiggle/format.hpp"
#include "wiggle/json_io.hpp"
#include "wiggle/render.hpp"

using namespace wiggle;

namespace {

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), {}};
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("wiggle_test_" + name);
}

}  // namespace

TEST_CASE("number formatting") {
  CHECK(format_number(1.0) == "1.0");
  CHECK(format_number(0.5) == "0.5");
  CHECK(format_number(1e-20) == "9.9999999999999995e-21");
  CHECK(format_number(0.1) == "0.10000000000000001");
  CHECK(std::stod(format_number(1.9435077)) == 1.9435077);
}

TEST_CASE("complex literals") {
  CHECK(parse_complex("0.3409+0.43486i") == Complex{0.3409, 0.43486});
  CHECK(parse_complex("0.5-0.2i") == Complex{0.5, -0.2});
  CHECK(parse_complex("0.3+0i") == Complex{0.3, 0.0});
  CHECK(parse_complex("0.4") == Complex{0.4, 0.0});
  CHECK(parse_complex("0.2i") == Complex{0.0, 0.2});
  CHECK(parse_complex("1e-3+2.5e-2i") == Complex{1e-3, 2.5e-2});
  CHECK(parse_complex("-1e-3-2e+1i") == Complex{-1e-3, -20.0});
  CHECK_THROWS_AS(parse_complex(""), InvalidParameter);
  CHECK_THROWS_AS(parse_complex("abc"), InvalidParameter);
  CHECK_THROWS_AS(parse_complex("0.3+0.4"), InvalidParameter);
  CHECK_THROWS_AS(parse_complex("0.3+0.4j"), InvalidParameter);
}

TEST_CASE("embed certificate JSON") {
  EmbedCertificate c;
  c.z = Parameter(Complex{0.3409, 0.43486});
  c.margin = 1e-9;
  c.max_depth = 36;
  c.pairs_examined = 12345;
  c.terminated = true;
  const Json j = to_json(c);
  CHECK(j["z"][0] == 0.3409);
  CHECK(j["maxDepth"] == 36);
  CHECK(j["pairsExamined"] == 12345);
  CHECK(j["terminated"] == true);
  const EmbedCertificate back = embed_certificate_from_json(Json::parse(j.dump()));
  CHECK(back.z == c.z);
  CHECK(back.margin == c.margin);
  CHECK(back.pairs_examined == c.pairs_examined);
  CHECK_THROWS_AS(embed_certificate_from_json(Json::parse("{\"z\": [0.5]}")), InvalidParameter);
  CHECK_THROWS_AS(complex_from_json(Json::parse("[\"a\", 1]")), InvalidParameter);
}

TEST_CASE("ray JSON") {
  const Ray r = Ray::make({0.1, 0.2}, {{0.3, 0.4}}, {0.0, 1.0});
  const Ray back = ray_from_json(to_json(r));
  CHECK(back.anchor == r.anchor);
  CHECK(back.bends == r.bends);
  CHECK(back.direction == r.direction);
  Json bad = to_json(r);
  bad["dir"] = Json::array({2.0, 0.0});
  CHECK_THROWS_AS(ray_from_json(bad), InvalidParameter);
}

TEST_CASE("proof JSON rejects other formats") {
  CHECK_THROWS_AS(proof_from_json(Json::parse("{\"format\": 2}")), InvalidParameter);
  CHECK_THROWS_AS(proof_from_json(Json::parse("[]")), InvalidParameter);
}

TEST_CASE("curve SVG") {
  const auto path = temp_path("curve.svg");
  RenderSpec spec;
  spec.re_min = -0.5;
  spec.re_max = 1.5;
  spec.im_min = -1.0;
  spec.im_max = 1.0;
  spec.width = spec.height = 200;
  spec.path = path.string();
  render_curve(Parameter(Complex{0.4, 0.4}), 4, spec);
  const std::string svg = slurp(path);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("<path") != std::string::npos);
  // 2^4 + 1 vertices: one M and sixteen L commands.
  std::size_t ls = 0;
  for (std::size_t p = svg.find(" L"); p != std::string::npos; p = svg.find(" L", p + 1)) ++ls;
  CHECK(ls == 16);
  // The vertex 0 maps to pixel (50, 100).
  CHECK(svg.find("M50.000000,100.000000") != std::string::npos);
  std::filesystem::remove(path);
  spec.width = 0;
  CHECK_THROWS_AS(render_curve(Parameter(Complex{0.4, 0.4}), 4, spec), InvalidParameter);
}

TEST_CASE("scan classification") {
  RenderSpec spec;
  spec.width = 16;
  spec.height = 8;
  spec.re_min = 0.0;
  spec.re_max = 1.0;
  spec.im_min = 0.0;
  spec.im_max = 0.5;
  spec.path = temp_path("scan.ppm").string();
  const ScanResult s = render_scan(spec, 8);
  CHECK(s.pixels.size() == 128);
  CHECK(s.at(0, 0) == PixelClass::Outside);
  // Bottom row sits just above the real axis.
  CHECK(s.at(8, 7) == PixelClass::EmbeddedHeuristic);
  const double total = s.fraction(PixelClass::EmbeddedHeuristic) +
                       s.fraction(PixelClass::IntersectingHeuristic) +
                       s.fraction(PixelClass::Unknown);
  CHECK(total == doctest::Approx(1.0));
  const std::string ppm = slurp(spec.path);
  CHECK(ppm.rfind("P6\n# heuristic", 0) == 0);
  CHECK(ppm.size() > 128 * 3);
  std::filesystem::remove(spec.path);
  CHECK(std::string(to_string(PixelClass::CertifiedOut)) == "certified-out");
  const Complex c = pixel_center(spec, 0, 0);
  CHECK(c.real() == doctest::Approx(1.0 / 32));
  CHECK(c.imag() == doctest::Approx(0.5 - 0.5 / 16));
}

TEST_CASE("witness colours are stable and visible") {
  CrossingCertificate a;
  a.u = Word("fgf");
  a.v = Word("ggf");
  a.n = 8;
  CrossingCertificate b = a;
  b.n = 10;
  CHECK(witness_color(a) == witness_color(a));
  CHECK(witness_color(a) != witness_color(b));
  for (int shift : {0, 8, 16}) {
    const unsigned channel = (witness_color(a) >> shift) & 0xffu;
    CHECK(channel >= 48);
    CHECK(channel <= 207);
  }
}
