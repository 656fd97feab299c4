#pragma once

#include <iosfwd>
#include <span>
#include <vector>

#include "wiggle/geometry.hpp"

namespace wiggle {

inline constexpr int kDefaultDepthCap = 24;

/// Vertices of the curve iterate, from 0 to 1.
struct Polyline {
  std::vector<Complex> vertices;
};

/// Iterate of the concatenate-and-reverse construction: 2^depth + 1
/// vertices, the depth-(d-1) vertices sitting at the even indices.
Polyline iterate(const Parameter& z, int depth, int depth_cap = kDefaultDepthCap);

/// Radius of the disk about 1/2 mapped into itself by both generators.
double bounding_radius(const Parameter& z);
Disk bounding_disk(const Parameter& z);

class NoRoot : public Error {
 public:
  using Error::Error;
};

/// Solves |z|^d + |1 - z|^d = 1 by bisection on [1e-6, 2]. Exactly 1 on
/// the real axis.
double hausdorff_dimension(const Parameter& z, double tol = 1e-12, int max_iterations = 200);

enum class HeuristicResult { EmbeddedAtDepth, Intersecting, Unknown };

const char* to_string(HeuristicResult r) noexcept;

struct HeuristicOptions {
  double gap_threshold = 0.0;
  double collinear_tol = 1e-12;
};

/// Self-intersection report for a polyline: whether two non-adjacent
/// segments properly cross, and the minimum non-adjacent gap when none do.
struct SelfIntersectionReport {
  bool crossing = false;
  bool near_contact = false;  // some non-adjacent gap <= threshold
};

SelfIntersectionReport polyline_self_intersection(std::span<const Complex> vertices,
                                                  const HeuristicOptions& opt = {});

/// Crossing-or-touching test between two polylines.
bool polylines_intersect(std::span<const Complex> a, std::span<const Complex> b);

HeuristicResult self_intersect_heuristic(const Parameter& z, int depth,
                                         const HeuristicOptions& opt = {},
                                         int depth_cap = kDefaultDepthCap);

/// Two columns re,im; one vertex per row; 17 significant digits.
void write_polyline_csv(std::ostream& out, const Polyline& p);

}  // namespace wiggle
