#pragma once

// Image emitters: SVG for curves and island maps, binary PPM for scans.

#include <cstdint>
#include <string>
#include <vector>

#include "wiggle/island.hpp"
#include "wiggle/squiggle.hpp"

namespace wiggle {

enum class ImageFormat { Svg, Ppm };

struct RenderSpec {
  double re_min = 0.0;
  double re_max = 1.0;
  double im_min = 0.0;
  double im_max = 1.0;
  int width = 512;
  int height = 512;
  std::string path;
  ImageFormat format = ImageFormat::Svg;

  /// Throws InvalidParameter on non-positive sizes or an empty viewport.
  void validate() const;
};

/// One <path> element through the 2^depth + 1 vertices of iterate(z, depth).
void render_curve(const Parameter& z, int depth, const RenderSpec& spec);

enum class PixelClass : std::uint8_t {
  EmbeddedHeuristic,
  IntersectingHeuristic,
  Unknown,
  CertifiedIn,
  CertifiedOut,
  Outside,
};

const char* to_string(PixelClass c) noexcept;

struct ScanResult {
  int width = 0;
  int height = 0;
  int depth = 0;
  std::vector<PixelClass> pixels;  // row-major, top row first

  PixelClass at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
  /// Share of in-disk pixels with class c.
  double fraction(PixelClass c) const;
};

/// Pixel centre (x + 1/2, y + 1/2) of the viewport, top row first.
Complex pixel_center(const RenderSpec& spec, int x, int y);

/// Classifies every pixel centre inside |z - 1/2| < 1/2 with the
/// self-intersection heuristic. Writes a PPM when spec.path is set: white
/// embedded, black intersecting, grey unknown or outside.
ScanResult render_scan(const RenderSpec& spec, int depth);

void write_ppm(const ScanResult& scan, const std::string& path);

/// Stable RGB colour for a witness (u, v, n).
std::uint32_t witness_color(const CrossingCertificate& w);

/// Balls coloured by witness, the loop and a marker at the island point.
/// Runs replay_proof first when `verify` is set and throws Error if it fails.
void render_island_map(const IslandProof& proof, const RenderSpec& spec, bool verify = true);

}  // namespace wiggle
