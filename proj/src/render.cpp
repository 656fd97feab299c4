#include "wiggle/render.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "wiggle/parallel.hpp"

namespace wiggle {

namespace {

std::ofstream open_output(const std::string& path, bool binary = false) {
  std::ofstream out(path, binary ? std::ios::binary : std::ios::out);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

struct Viewport {
  const RenderSpec& spec;
  double x(Complex z) const {
    return (z.real() - spec.re_min) / (spec.re_max - spec.re_min) * spec.width;
  }
  double y(Complex z) const {
    return (spec.im_max - z.imag()) / (spec.im_max - spec.im_min) * spec.height;
  }
  double scale() const { return spec.width / (spec.re_max - spec.re_min); }
};

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6f", v);
  return buf;
}

std::string hex_color(std::uint32_t rgb) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%06x", rgb & 0xffffffu);
  return buf;
}

void svg_header(std::ostream& out, const RenderSpec& spec) {
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
      << spec.height << "\" viewBox=\"0 0 " << spec.width << ' ' << spec.height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
}

}  // namespace

void RenderSpec::validate() const {
  if (width <= 0 || height <= 0) throw InvalidParameter("image size must be positive");
  if (!(re_max > re_min) || !(im_max > im_min)) throw InvalidParameter("empty viewport");
}

void render_curve(const Parameter& z, int depth, const RenderSpec& spec) {
  spec.validate();
  const Polyline curve = iterate(z, depth);
  const Viewport view{spec};
  auto out = open_output(spec.path);
  svg_header(out, spec);
  out << "<path fill=\"none\" stroke=\"black\" stroke-width=\"1\" d=\"";
  for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
    out << (i == 0 ? "M" : " L") << fmt(view.x(curve.vertices[i])) << ','
        << fmt(view.y(curve.vertices[i]));
  }
  out << "\"/>\n</svg>\n";
  if (!out) throw Error("cannot write '" + spec.path + "'");
}

const char* to_string(PixelClass c) noexcept {
  switch (c) {
    case PixelClass::EmbeddedHeuristic:
      return "embedded-heuristic";
    case PixelClass::IntersectingHeuristic:
      return "intersecting-heuristic";
    case PixelClass::Unknown:
      return "unknown";
    case PixelClass::CertifiedIn:
      return "certified-in";
    case PixelClass::CertifiedOut:
      return "certified-out";
    case PixelClass::Outside:
      return "outside";
  }
  return "unknown";
}

double ScanResult::fraction(PixelClass c) const {
  std::size_t inside = 0, hits = 0;
  for (PixelClass p : pixels) {
    if (p == PixelClass::Outside) continue;
    ++inside;
    hits += p == c ? 1 : 0;
  }
  return inside == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(inside);
}

Complex pixel_center(const RenderSpec& spec, int x, int y) {
  return {spec.re_min + (x + 0.5) * (spec.re_max - spec.re_min) / spec.width,
          spec.im_max - (y + 0.5) * (spec.im_max - spec.im_min) / spec.height};
}

ScanResult render_scan(const RenderSpec& spec, int depth) {
  spec.validate();
  ScanResult scan{spec.width, spec.height, depth, {}};
  scan.pixels.assign(static_cast<std::size_t>(spec.width) * spec.height, PixelClass::Outside);
  parallel_for(static_cast<std::size_t>(spec.height), [&](std::size_t row) {
    const int y = static_cast<int>(row);
    for (int x = 0; x < spec.width; ++x) {
      const Complex z = pixel_center(spec, x, y);
      if (!(std::abs(z - 0.5) < 0.5)) continue;
      PixelClass c = PixelClass::Unknown;
      switch (self_intersect_heuristic(Parameter(z), depth)) {
        case HeuristicResult::EmbeddedAtDepth:
          c = PixelClass::EmbeddedHeuristic;
          break;
        case HeuristicResult::Intersecting:
          c = PixelClass::IntersectingHeuristic;
          break;
        case HeuristicResult::Unknown:
          break;
      }
      scan.pixels[row * spec.width + x] = c;
    }
  });
  if (!spec.path.empty()) write_ppm(scan, spec.path);
  return scan;
}

void write_ppm(const ScanResult& scan, const std::string& path) {
  auto out = open_output(path, true);
  out << "P6\n# heuristic classification, not a certificate\n"
      << scan.width << ' ' << scan.height << "\n255\n";
  for (PixelClass p : scan.pixels) {
    unsigned char v = 128;
    if (p == PixelClass::EmbeddedHeuristic || p == PixelClass::CertifiedIn) v = 255;
    if (p == PixelClass::IntersectingHeuristic || p == PixelClass::CertifiedOut) v = 0;
    const unsigned char rgb[3] = {v, v, v};
    out.write(reinterpret_cast<const char*>(rgb), 3);
  }
  if (!out) throw Error("cannot write '" + path + "'");
}

std::uint32_t witness_color(const CrossingCertificate& w) {
  // FNV-1a over the witness key.
  const std::string key = w.u.to_string() + '|' + w.v.to_string() + '|' + std::to_string(w.n);
  std::uint32_t h = 2166136261u;
  for (unsigned char ch : key) {
    h ^= ch;
    h *= 16777619u;
  }
  // Keep every channel in [48, 207] so balls stay visible on white.
  const std::uint32_t r = 48 + (h & 0xff) % 160;
  const std::uint32_t g = 48 + ((h >> 8) & 0xff) % 160;
  const std::uint32_t b = 48 + ((h >> 16) & 0xff) % 160;
  return (r << 16) | (g << 8) | b;
}

void render_island_map(const IslandProof& proof, const RenderSpec& spec, bool verify) {
  spec.validate();
  if (verify) {
    const ReplayReport report = replay_proof(proof);
    if (!report.ok) throw Error("proof does not verify: " + report.failures.front());
  }
  const Viewport view{spec};
  auto out = open_output(spec.path);
  svg_header(out, spec);
  for (const CertifiedBall& b : proof.cover) {
    out << "<circle cx=\"" << fmt(view.x(b.center.value())) << "\" cy=\""
        << fmt(view.y(b.center.value())) << "\" r=\"" << fmt(b.epsilon * view.scale())
        << "\" fill=\"" << hex_color(witness_color(b.witness)) << "\"/>\n";
  }
  out << "<polygon fill=\"none\" stroke=\"black\" stroke-width=\"1\" points=\"";
  for (std::size_t i = 0; i < proof.loop.size(); ++i) {
    out << (i == 0 ? "" : " ") << fmt(view.x(proof.loop[i])) << ',' << fmt(view.y(proof.loop[i]));
  }
  out << "\"/>\n";
  const Complex c = proof.island_point.z.value();
  out << "<circle cx=\"" << fmt(view.x(c)) << "\" cy=\"" << fmt(view.y(c))
      << "\" r=\"4\" fill=\"red\" stroke=\"black\"/>\n</svg>\n";
  if (!out) throw Error("cannot write '" + spec.path + "'");
}

}  // namespace wiggle
