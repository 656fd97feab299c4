#pragma once

// How word images move with the parameter: exact first derivatives at a
// point (forward mode) and sound magnitude bounds over a disk of
// parameters, used to turn clearances into stability radii.

#include "wiggle/geometry.hpp"

namespace wiggle {

/// Word map together with the z-derivatives of its coefficients.
struct MapJet {
  Complex a{1.0, 0.0};
  Complex da{0.0, 0.0};
  Complex b{0.0, 0.0};
  Complex db{0.0, 0.0};

  Complex at(Complex x) const noexcept { return a * x + b; }
  Complex derivative_at(Complex x) const noexcept { return da * x + db; }
};

MapJet word_jet(const Word& w, const Parameter& z);

/// Magnitude bounds valid for every z' in a disk of parameters.
struct RegionBounds {
  double mod_z_max = 0.0;     // sup |z'|
  double mod_z_min = 0.0;     // inf |z'|
  double mod_1mz_max = 0.0;   // sup |1 - z'|
  double mod_1mz_min = 0.0;   // inf |1 - z'|
  double radius_max = 0.0;    // sup R(z')
  double radius_rate = 0.0;   // sup |dR/dz'|
  double rho = 0.0;

  /// Throws InvalidParameter when the disk leaves the contraction region.
  static RegionBounds over(const Disk& region);
};

/// sup over the region of |y|, |dy/dz|, |d2y/dz2| for y = w(x).
struct PointBounds {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
};

PointBounds point_bounds(const Word& w, Complex x, const RegionBounds& rb);

/// sup over the region of |a_w|, |a_w'|, |a_w''| and inf of |a_w|.
struct CoefficientBounds {
  double value = 0.0;
  double first = 0.0;
  double second = 0.0;
  double lower = 0.0;
};

CoefficientBounds coefficient_bounds(const Word& w, const RegionBounds& rb);

/// sup over the region of |d/dz (|a_w| R(z))|.
double radius_rate_bound(const Word& w, const RegionBounds& rb);

}  // namespace wiggle
