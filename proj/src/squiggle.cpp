#include "wiggle/squiggle.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "segment_bvh.hpp"

namespace wiggle {

Polyline iterate(const Parameter& z, int depth, int depth_cap) {
  if (depth < 0 || depth > depth_cap) {
    throw InvalidParameter("iterate depth outside [0, cap]");
  }
  const AffineMap f = letter_map(Letter::F, z);
  const AffineMap g = letter_map(Letter::G, z);

  std::vector<Complex> w{Complex{0.0, 0.0}, Complex{1.0, 0.0}};
  std::vector<Complex> next;
  for (int d = 1; d <= depth; ++d) {
    const std::size_t m = w.size();
    next.clear();
    next.reserve(2 * m - 1);
    // Reversed f-image runs 0 -> z, reversed g-image runs z -> 1.
    for (std::size_t i = m; i-- > 0;) next.push_back(f(w[i]));
    for (std::size_t i = m - 1; i-- > 0;) next.push_back(g(w[i]));
    w.swap(next);
  }
  return Polyline{std::move(w)};
}

double bounding_radius(const Parameter& z) {
  const double mz = std::abs(z.value());
  const double m1z = std::abs(1.0 - z.value());
  return std::max(m1z / (2.0 * (1.0 - mz)), mz / (2.0 * (1.0 - m1z)));
}

Disk bounding_disk(const Parameter& z) {
  return Disk{Complex{0.5, 0.0}, bounding_radius(z)};
}

double hausdorff_dimension(const Parameter& z, double tol, int max_iterations) {
  if (!(tol > 0)) throw InvalidParameter("tolerance must be positive");
  if (!z.in_wiggle_disk()) throw NoRoot("dimension equation needs |z - 1/2| < 1/2");
  // |z| + |1 - z| = 1 on the real segment.
  if (z.im() == 0.0) return 1.0;

  const double p = std::abs(z.value());
  const double q = std::abs(1.0 - z.value());
  const auto excess = [&](double d) { return std::pow(p, d) + std::pow(q, d) - 1.0; };

  double lo = 1e-6;
  double hi = 2.0;
  if (!(excess(lo) > 0.0) || !(excess(hi) < 0.0)) {
    throw NoRoot("dimension equation has no root in (0, 2]");
  }
  for (int it = 0; it < max_iterations; ++it) {
    if (hi - lo <= tol) return 0.5 * (lo + hi);
    const double mid = 0.5 * (lo + hi);
    if (excess(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  throw NoRoot("dimension bisection did not converge");
}

const char* to_string(HeuristicResult r) noexcept {
  switch (r) {
    case HeuristicResult::EmbeddedAtDepth:
      return "embedded-at-depth";
    case HeuristicResult::Intersecting:
      return "intersecting";
    case HeuristicResult::Unknown:
      return "unknown";
  }
  return "unknown";
}

SelfIntersectionReport polyline_self_intersection(std::span<const Complex> vertices,
                                                  const HeuristicOptions& opt) {
  SelfIntersectionReport report;
  if (vertices.size() < 4) return report;
  // On the real line the polyline is an arc exactly when it is monotone.
  // Tiny pieces collapse to repeated vertices in floating point, which the
  // pairwise test would read as contacts.
  if (std::all_of(vertices.begin(), vertices.end(), [](Complex v) { return v.imag() == 0.0; })) {
    const bool up = std::is_sorted(vertices.begin(), vertices.end(),
                                   [](Complex a, Complex b) { return a.real() < b.real(); });
    const bool down = std::is_sorted(vertices.begin(), vertices.end(),
                                     [](Complex a, Complex b) { return a.real() > b.real(); });
    report.near_contact = !up && !down;
    return report;
  }
  const detail::SegmentBvh bvh(vertices);
  bvh.self_pairs(opt.gap_threshold, [&](std::size_t i, std::size_t j) {
    if (j <= i + 1) return true;  // adjacent segments share a vertex
    const Complex a = vertices[i], b = vertices[i + 1];
    const Complex c = vertices[j], d = vertices[j + 1];
    const double g = opt.gap_threshold;
    if (std::max(a.real(), b.real()) + g < std::min(c.real(), d.real()) ||
        std::max(c.real(), d.real()) + g < std::min(a.real(), b.real()) ||
        std::max(a.imag(), b.imag()) + g < std::min(c.imag(), d.imag()) ||
        std::max(c.imag(), d.imag()) + g < std::min(a.imag(), b.imag())) {
      return true;  // boxes apart, so the segments are too
    }
    if (segments_properly_cross(a, b, c, d, opt.collinear_tol)) {
      report.crossing = true;
      return false;
    }
    if (!report.near_contact && segment_segment_distance(a, b, c, d) <= opt.gap_threshold) {
      report.near_contact = true;
    }
    return true;
  });
  return report;
}

bool polylines_intersect(std::span<const Complex> a, std::span<const Complex> b) {
  if (a.size() < 2 || b.size() < 2) return false;
  const detail::SegmentBvh ba(a);
  const detail::SegmentBvh bb(b);
  bool hit = false;
  ba.cross_pairs(bb, 0.0, [&](std::size_t i, std::size_t j) {
    if (segments_touch(a[i], a[i + 1], b[j], b[j + 1])) {
      hit = true;
      return false;
    }
    return true;
  });
  return hit;
}

HeuristicResult self_intersect_heuristic(const Parameter& z, int depth,
                                         const HeuristicOptions& opt, int depth_cap) {
  const Polyline p = iterate(z, depth, depth_cap);
  const SelfIntersectionReport r = polyline_self_intersection(p.vertices, opt);
  if (r.crossing) return HeuristicResult::Intersecting;
  if (r.near_contact) return HeuristicResult::Unknown;
  return HeuristicResult::EmbeddedAtDepth;
}

void write_polyline_csv(std::ostream& out, const Polyline& p) {
  char buf[64];
  for (Complex v : p.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", v.real(), v.imag());
    out << buf;
  }
}

}  // namespace wiggle
