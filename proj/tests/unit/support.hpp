#pragma once

#include <random>

#include "wiggle/geometry.hpp"

namespace testing_support {

/// Uniform sample of valid parameters inside |z - 1/2| < radius.
inline wiggle::Complex random_parameter(std::mt19937_64& rng, double radius = 0.45) {
  std::uniform_real_distribution<double> u(-radius, radius);
  while (true) {
    const wiggle::Complex z{0.5 + u(rng), u(rng)};
    if (std::abs(z - 0.5) < radius && wiggle::Parameter::is_valid(z)) return z;
  }
}

}  // namespace testing_support
