#include "wiggle/motion.hpp"

#include <algorithm>
#include <cmath>

namespace wiggle {

MapJet word_jet(const Word& w, const Parameter& z) {
  const Complex zv = z.value();
  const MapJet f{-zv, Complex{-1.0, 0.0}, zv, Complex{1.0, 0.0}};
  const MapJet g{zv - 1.0, Complex{1.0, 0.0}, Complex{1.0, 0.0}, Complex{0.0, 0.0}};
  MapJet m;
  for (int i = 0; i < w.size(); ++i) {
    const MapJet& in = w[i] == Letter::F ? f : g;
    MapJet out;
    out.a = m.a * in.a;
    out.da = m.da * in.a + m.a * in.da;
    out.b = m.a * in.b + m.b;
    out.db = m.da * in.b + m.a * in.db + m.db;
    m = out;
  }
  return m;
}

RegionBounds RegionBounds::over(const Disk& region) {
  RegionBounds rb;
  rb.rho = region.radius;
  const double mz = std::abs(region.center);
  const double m1 = std::abs(1.0 - region.center);
  rb.mod_z_max = mz + region.radius;
  rb.mod_1mz_max = m1 + region.radius;
  rb.mod_z_min = std::max(0.0, mz - region.radius);
  rb.mod_1mz_min = std::max(0.0, m1 - region.radius);
  if (!(rb.mod_z_max < 1.0) || !(rb.mod_1mz_max < 1.0)) {
    throw InvalidParameter("parameter region leaves the contraction region");
  }
  // R = max(|1-z| / (2(1-|z|)), |z| / (2(1-|1-z|))); both moduli have
  // gradient of norm at most 1.
  const double d1 = 1.0 - rb.mod_z_max;
  const double d2 = 1.0 - rb.mod_1mz_max;
  rb.radius_max = std::max(rb.mod_1mz_max / (2.0 * d1), rb.mod_z_max / (2.0 * d2));
  const double rate1 = 1.0 / (2.0 * d1) + rb.mod_1mz_max / (2.0 * d1 * d1);
  const double rate2 = 1.0 / (2.0 * d2) + rb.mod_z_max / (2.0 * d2 * d2);
  rb.radius_rate = std::max(rate1, rate2);
  return rb;
}

PointBounds point_bounds(const Word& w, Complex x, const RegionBounds& rb) {
  // Innermost letter first. For a letter x -> a x + b with a, b affine in z
  // and |a'| = 1: y' = a' y + a y_in' + b', y'' = 2 a' y_in' + a y_in''.
  PointBounds p{std::abs(x), 0.0, 0.0};
  for (int i = w.size(); i-- > 0;) {
    PointBounds q;
    if (w[i] == Letter::F) {
      const double a = rb.mod_z_max;
      q.value = a * p.value + a;
      q.first = p.value + a * p.first + 1.0;
      q.second = 2.0 * p.first + a * p.second;
    } else {
      const double a = rb.mod_1mz_max;
      q.value = a * p.value + 1.0;
      q.first = p.value + a * p.first;
      q.second = 2.0 * p.first + a * p.second;
    }
    p = q;
  }
  return p;
}

CoefficientBounds coefficient_bounds(const Word& w, const RegionBounds& rb) {
  CoefficientBounds c{1.0, 0.0, 0.0, 1.0};
  for (int i = 0; i < w.size(); ++i) {
    const bool is_f = w[i] == Letter::F;
    const double a = is_f ? rb.mod_z_max : rb.mod_1mz_max;
    const double lo = is_f ? rb.mod_z_min : rb.mod_1mz_min;
    CoefficientBounds n;
    n.value = c.value * a;
    n.first = c.value + c.first * a;
    n.second = 2.0 * c.first + c.second * a;
    n.lower = c.lower * lo;
    c = n;
  }
  return c;
}

double radius_rate_bound(const Word& w, const RegionBounds& rb) {
  const CoefficientBounds c = coefficient_bounds(w, rb);
  return c.first * rb.radius_max + c.value * rb.radius_rate;
}

}  // namespace wiggle
