#pragma once

// Complex affine maps, words over {f, g}, disks, rays and the planar
// predicates shared by the certifiers.

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace wiggle {

using Complex = std::complex<double>;

/// Additive safety margin used by every strict comparison.
inline constexpr double kDefaultTau = 1e-9;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InvalidParameter : public Error {
 public:
  using Error::Error;
};

class SingularMap : public Error {
 public:
  using Error::Error;
};

class DegenerateDirections : public Error {
 public:
  using Error::Error;
};

/// A parameter z with |z| < 1 and |1 - z| < 1, the region where both
/// generators contract.
class Parameter {
 public:
  explicit Parameter(Complex z);

  static bool is_valid(Complex z) noexcept;

  Complex value() const noexcept { return z_; }
  double re() const noexcept { return z_.real(); }
  double im() const noexcept { return z_.imag(); }

  /// |z - 1/2| < 1/2, the disk containing every wiggle parameter.
  bool in_wiggle_disk() const noexcept;

  friend bool operator==(const Parameter&, const Parameter&) = default;

 private:
  Complex z_;
};

enum class Letter : std::uint8_t { F = 0, G = 1 };

/// Finite word over {f, g}. Stored packed; at most kMaxLength letters.
/// The leftmost letter acts outermost: "ffg" is f o f o g.
class Word {
 public:
  static constexpr int kMaxLength = 64;

  Word() = default;
  explicit Word(std::string_view letters);

  static Word from_string(std::string_view letters) { return Word(letters); }

  int size() const noexcept { return size_; }
  bool empty() const noexcept { return size_ == 0; }
  Letter operator[](int i) const noexcept {
    return static_cast<Letter>((bits_ >> i) & 1u);
  }

  Word appended(Letter l) const;
  Word concat(const Word& tail) const;
  Word prefix(int length) const;
  bool starts_with(const Word& head) const noexcept;
  std::string to_string() const;

  /// Number of F letters.
  int count_f() const noexcept;

  std::uint64_t bits() const noexcept { return bits_; }

  friend bool operator==(const Word&, const Word&) = default;
  friend auto operator<=>(const Word& a, const Word& b) {
    if (a.size_ != b.size_) return a.size_ <=> b.size_;
    return a.to_string() <=> b.to_string();
  }

 private:
  std::uint64_t bits_ = 0;  // bit i set <=> letter i is G
  std::uint8_t size_ = 0;
};

/// x -> a x + b
struct AffineMap {
  Complex a{1.0, 0.0};
  Complex b{0.0, 0.0};

  static AffineMap identity() { return {}; }
  Complex operator()(Complex x) const noexcept { return a * x + b; }
};

AffineMap letter_map(Letter letter, const Parameter& z);
AffineMap compose(const AffineMap& outer, const AffineMap& inner) noexcept;
AffineMap invert(const AffineMap& m, double singular_floor = 1e-300);
AffineMap word_map(const Word& u, const Parameter& z);

struct Disk {
  Complex center;
  double radius = 0.0;
};

Disk image_disk(const AffineMap& m, const Disk& d) noexcept;

/// Strict: |c1 - c2| > r1 + r2 + margin. Tangent disks are not disjoint.
bool disks_disjoint(const Disk& d1, const Disk& d2, double margin);

/// Polyline anchor -> bends... -> infinity along `direction`.
struct Ray {
  Complex anchor;
  std::vector<Complex> bends;
  Complex direction{1.0, 0.0};

  /// Throws InvalidParameter if the direction is not a unit vector or the
  /// bend count exceeds `max_bends`.
  static Ray make(Complex anchor, std::vector<Complex> bends, Complex direction,
                  int max_bends = 2);
  static Ray straight(Complex anchor, Complex direction) {
    return make(anchor, {}, direction);
  }

  Complex last_point() const noexcept {
    return bends.empty() ? anchor : bends.back();
  }
  Ray translated(Complex delta) const;
  bool is_simple(double tol = 1e-12) const;
};

/// inf over the whole ray of |x - center| - radius. Negative values are
/// penetration depth.
double ray_disk_clearance(const Ray& r, const Disk& d);

/// Minimum over `disks` of ray_disk_clearance; +inf for an empty span.
double ray_disks_clearance(const Ray& r, std::span<const Disk> disks);

/// Distance between two rays; 0 when they meet.
double ray_ray_distance(const Ray& r1, const Ray& r2);

/// True iff the escape directions alternate r, s, r, s in cyclic order.
/// Throws DegenerateDirections when two directions are closer than
/// `theta_min` radians.
bool directions_linked(const Ray& r_plus, const Ray& r_minus, const Ray& s_plus,
                       const Ray& s_minus, double theta_min = 1e-6);
bool directions_linked(Complex r_plus, Complex r_minus, Complex s_plus,
                       Complex s_minus, double theta_min = 1e-6);

// Planar primitives.

double cross(Complex a, Complex b) noexcept;
double point_segment_distance(Complex p, Complex a, Complex b) noexcept;
double point_halfline_distance(Complex p, Complex origin, Complex dir) noexcept;
double segment_segment_distance(Complex a, Complex b, Complex c, Complex d) noexcept;
/// Interiors cross transversally; touching and collinear overlap excluded.
bool segments_properly_cross(Complex a, Complex b, Complex c, Complex d,
                             double collinear_tol = 1e-12) noexcept;
/// Closed segments share at least one point.
bool segments_touch(Complex a, Complex b, Complex c, Complex d) noexcept;

}  // namespace wiggle
