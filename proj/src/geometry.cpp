#include "wiggle/geometry.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <numbers>

namespace wiggle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Point p + t e for t in [0, t_max]; t_max = +inf for a half-line.
struct Piece {
  Complex p;
  Complex e;
  double t_max;

  bool bounded() const { return std::isfinite(t_max); }
  Complex end() const { return p + e; }
};

double dot(Complex a, Complex b) { return a.real() * b.real() + a.imag() * b.imag(); }

double point_piece_distance(Complex x, const Piece& piece) {
  return piece.bounded() ? point_segment_distance(x, piece.p, piece.end())
                         : point_halfline_distance(x, piece.p, piece.e);
}

bool pieces_meet(const Piece& a, const Piece& b) {
  const Complex w = b.p - a.p;
  const double den = cross(a.e, b.e);
  const double scale = std::abs(a.e) * std::abs(b.e);
  if (std::abs(den) > 1e-15 * scale) {
    const double t = cross(w, b.e) / den;
    const double s = cross(w, a.e) / den;
    return t >= 0.0 && t <= a.t_max && s >= 0.0 && s <= b.t_max;
  }
  // Parallel: they meet only when collinear with overlapping extent.
  const double la = std::abs(a.e);
  if (std::abs(cross(w, a.e)) > 1e-15 * la * std::max(std::abs(w), 1.0)) return false;
  const double inv = 1.0 / (la * la);
  const double s0 = dot(w, a.e) * inv;
  const double s1 = b.bounded() ? dot(w + b.e, a.e) * inv
                                : (dot(b.e, a.e) > 0 ? kInf : -kInf);
  const double lo = std::min(s0, s1);
  const double hi = std::max(s0, s1);
  return hi >= 0.0 && lo <= a.t_max;
}

double piece_distance(const Piece& a, const Piece& b) {
  if (pieces_meet(a, b)) return 0.0;
  double d = std::min(point_piece_distance(a.p, b), point_piece_distance(b.p, a));
  if (a.bounded()) d = std::min(d, point_piece_distance(a.end(), b));
  if (b.bounded()) d = std::min(d, point_piece_distance(b.end(), a));
  return d;
}

std::vector<Piece> pieces_of(const Ray& r) {
  std::vector<Piece> out;
  out.reserve(r.bends.size() + 1);
  Complex from = r.anchor;
  for (Complex bend : r.bends) {
    out.push_back({from, bend - from, 1.0});
    from = bend;
  }
  out.push_back({from, r.direction, kInf});
  return out;
}

double angle_of(Complex d) {
  double a = std::arg(d);
  if (a < 0) a += 2.0 * std::numbers::pi;
  return a;
}

double ccw_offset(double from, double to) {
  double d = to - from;
  while (d < 0) d += 2.0 * std::numbers::pi;
  while (d >= 2.0 * std::numbers::pi) d -= 2.0 * std::numbers::pi;
  return d;
}

}  // namespace

Parameter::Parameter(Complex z) : z_(z) {
  if (!is_valid(z)) {
    throw InvalidParameter("parameter must satisfy |z| < 1 and |1 - z| < 1");
  }
}

bool Parameter::is_valid(Complex z) noexcept {
  return std::isfinite(z.real()) && std::isfinite(z.imag()) && std::abs(z) < 1.0 &&
         std::abs(1.0 - z) < 1.0;
}

bool Parameter::in_wiggle_disk() const noexcept {
  return std::abs(z_ - 0.5) < 0.5;
}

Word::Word(std::string_view letters) {
  if (letters.size() > static_cast<std::size_t>(kMaxLength)) {
    throw InvalidParameter("word longer than 64 letters");
  }
  for (std::size_t i = 0; i < letters.size(); ++i) {
    switch (letters[i]) {
      case 'f':
      case 'F':
        break;
      case 'g':
      case 'G':
        bits_ |= std::uint64_t{1} << i;
        break;
      default:
        throw InvalidParameter("word letters must be f or g");
    }
  }
  size_ = static_cast<std::uint8_t>(letters.size());
}

Word Word::appended(Letter l) const {
  if (size_ >= kMaxLength) throw InvalidParameter("word longer than 64 letters");
  Word w = *this;
  if (l == Letter::G) w.bits_ |= std::uint64_t{1} << size_;
  ++w.size_;
  return w;
}

Word Word::concat(const Word& tail) const {
  if (size_ + tail.size_ > kMaxLength) {
    throw InvalidParameter("word longer than 64 letters");
  }
  Word w = *this;
  if (tail.size_ > 0) w.bits_ |= tail.bits_ << size_;
  w.size_ = static_cast<std::uint8_t>(size_ + tail.size_);
  return w;
}

Word Word::prefix(int length) const {
  length = std::clamp(length, 0, static_cast<int>(size_));
  Word w;
  w.size_ = static_cast<std::uint8_t>(length);
  w.bits_ = length == 64 ? bits_ : bits_ & ((std::uint64_t{1} << length) - 1);
  return w;
}

bool Word::starts_with(const Word& head) const noexcept {
  if (head.size_ > size_) return false;
  const std::uint64_t mask =
      head.size_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << head.size_) - 1;
  return (bits_ & mask) == head.bits_;
}

std::string Word::to_string() const {
  std::string s(size_, 'f');
  for (int i = 0; i < size_; ++i) {
    if ((*this)[i] == Letter::G) s[i] = 'g';
  }
  return s;
}

int Word::count_f() const noexcept {
  const std::uint64_t mask =
      size_ == 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << size_) - 1;
  return size_ - std::popcount(bits_ & mask);
}

AffineMap letter_map(Letter letter, const Parameter& z) {
  const Complex v = z.value();
  if (letter == Letter::F) return {-v, v};
  return {v - 1.0, Complex{1.0, 0.0}};
}

AffineMap compose(const AffineMap& outer, const AffineMap& inner) noexcept {
  return {outer.a * inner.a, outer.a * inner.b + outer.b};
}

AffineMap invert(const AffineMap& m, double singular_floor) {
  if (!(std::abs(m.a) >= singular_floor)) {
    throw SingularMap("affine map is not invertible");
  }
  const Complex inv = 1.0 / m.a;
  return {inv, -m.b * inv};
}

AffineMap word_map(const Word& u, const Parameter& z) {
  const AffineMap f = letter_map(Letter::F, z);
  const AffineMap g = letter_map(Letter::G, z);
  AffineMap m;
  for (int i = 0; i < u.size(); ++i) {
    m = compose(m, u[i] == Letter::F ? f : g);
  }
  return m;
}

Disk image_disk(const AffineMap& m, const Disk& d) noexcept {
  return {m(d.center), std::abs(m.a) * d.radius};
}

bool disks_disjoint(const Disk& d1, const Disk& d2, double margin) {
  if (margin < 0) throw InvalidParameter("margin must be nonnegative");
  return std::abs(d1.center - d2.center) > d1.radius + d2.radius + margin;
}

Ray Ray::make(Complex anchor, std::vector<Complex> bends, Complex direction,
              int max_bends) {
  if (std::abs(std::abs(direction) - 1.0) > 1e-12) {
    throw InvalidParameter("ray direction must be a unit vector");
  }
  if (static_cast<int>(bends.size()) > max_bends) {
    throw InvalidParameter("ray has too many bends");
  }
  return Ray{anchor, std::move(bends), direction};
}

Ray Ray::translated(Complex delta) const {
  Ray r = *this;
  r.anchor += delta;
  for (Complex& b : r.bends) b += delta;
  return r;
}

bool Ray::is_simple(double tol) const {
  const auto pieces = pieces_of(*this);
  for (std::size_t i = 0; i < pieces.size(); ++i) {
    if (std::abs(pieces[i].e) <= tol) return false;
  }
  for (std::size_t i = 0; i + 1 < pieces.size(); ++i) {
    // Consecutive pieces share a vertex; reject exact fold-backs.
    const Complex e1 = pieces[i].e;
    const Complex e2 = pieces[i + 1].e;
    if (std::abs(cross(e1, e2)) <= tol * std::abs(e1) * std::abs(e2) && dot(e1, e2) < 0) {
      return false;
    }
    for (std::size_t j = i + 2; j < pieces.size(); ++j) {
      if (pieces_meet(pieces[i], pieces[j])) return false;
    }
  }
  return true;
}

double cross(Complex a, Complex b) noexcept {
  return a.real() * b.imag() - a.imag() * b.real();
}

double point_segment_distance(Complex p, Complex a, Complex b) noexcept {
  const Complex e = b - a;
  const double len2 = std::norm(e);
  if (len2 == 0.0) return std::abs(p - a);
  const double t = std::clamp(dot(p - a, e) / len2, 0.0, 1.0);
  return std::abs(p - (a + t * e));
}

double point_halfline_distance(Complex p, Complex origin, Complex dir) noexcept {
  const double len2 = std::norm(dir);
  const double t = std::max(0.0, dot(p - origin, dir) / len2);
  return std::abs(p - (origin + t * dir));
}

double segment_segment_distance(Complex a, Complex b, Complex c, Complex d) noexcept {
  if (segments_touch(a, b, c, d)) return 0.0;
  return std::min({point_segment_distance(a, c, d), point_segment_distance(b, c, d),
                   point_segment_distance(c, a, b), point_segment_distance(d, a, b)});
}

bool segments_properly_cross(Complex a, Complex b, Complex c, Complex d,
                             double collinear_tol) noexcept {
  const Complex ab = b - a;
  const Complex cd = d - c;
  const double lab = std::abs(ab);
  const double lcd = std::abs(cd);
  const double o1 = cross(ab, c - a);
  const double o2 = cross(ab, d - a);
  const double o3 = cross(cd, a - c);
  const double o4 = cross(cd, b - c);
  const double t1 = collinear_tol * lab * std::max(std::abs(c - a), std::abs(d - a));
  const double t2 = collinear_tol * lcd * std::max(std::abs(a - c), std::abs(b - c));
  if (std::abs(o1) <= t1 || std::abs(o2) <= t1) return false;
  if (std::abs(o3) <= t2 || std::abs(o4) <= t2) return false;
  return (o1 > 0) != (o2 > 0) && (o3 > 0) != (o4 > 0);
}

bool segments_touch(Complex a, Complex b, Complex c, Complex d) noexcept {
  return pieces_meet(Piece{a, b - a, 1.0}, Piece{c, d - c, 1.0});
}

double ray_disk_clearance(const Ray& r, const Disk& d) {
  double best = kInf;
  Complex from = r.anchor;
  for (Complex bend : r.bends) {
    best = std::min(best, point_segment_distance(d.center, from, bend));
    from = bend;
  }
  best = std::min(best, point_halfline_distance(d.center, from, r.direction));
  return best - d.radius;
}

double ray_disks_clearance(const Ray& r, std::span<const Disk> disks) {
  double best = kInf;
  for (const Disk& d : disks) best = std::min(best, ray_disk_clearance(r, d));
  return best;
}

double ray_ray_distance(const Ray& r1, const Ray& r2) {
  const auto p1 = pieces_of(r1);
  const auto p2 = pieces_of(r2);
  double best = kInf;
  for (const Piece& a : p1) {
    for (const Piece& b : p2) {
      best = std::min(best, piece_distance(a, b));
      if (best == 0.0) return 0.0;
    }
  }
  return best;
}

bool directions_linked(Complex r_plus, Complex r_minus, Complex s_plus, Complex s_minus,
                       double theta_min) {
  const std::array<double, 4> angles{angle_of(r_plus), angle_of(r_minus),
                                     angle_of(s_plus), angle_of(s_minus)};
  for (std::size_t i = 0; i < angles.size(); ++i) {
    for (std::size_t j = i + 1; j < angles.size(); ++j) {
      const double d = ccw_offset(angles[i], angles[j]);
      if (std::min(d, 2.0 * std::numbers::pi - d) < theta_min) {
        throw DegenerateDirections("ray escape directions are not separated");
      }
    }
  }
  const double span = ccw_offset(angles[1], angles[0]);
  const bool s1_inside = ccw_offset(angles[1], angles[2]) < span;
  const bool s2_inside = ccw_offset(angles[1], angles[3]) < span;
  return s1_inside != s2_inside;
}

bool directions_linked(const Ray& r_plus, const Ray& r_minus, const Ray& s_plus,
                       const Ray& s_minus, double theta_min) {
  return directions_linked(r_plus.direction, r_minus.direction, s_plus.direction,
                           s_minus.direction, theta_min);
}

}  // namespace wiggle
