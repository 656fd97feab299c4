#include "wiggle/crossing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "wiggle/motion.hpp"
#include "wiggle/squiggle.hpp"

namespace wiggle {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct Candidate {
  Ray ray;
  double clearance;
  double angle;
};

double angle_of(Complex d) {
  const double a = std::arg(d);
  if (a >= 0) return a;
  const double w = a + kTwoPi;
  return w < kTwoPi ? w : 0.0;
}

double ccw_offset(double from, double to) {
  // Both angles lie in [0, 2 pi).
  const double d = to - from;
  return d < 0 ? d + kTwoPi : d;
}

std::vector<Complex> convex_hull(std::vector<Complex> pts) {
  std::sort(pts.begin(), pts.end(), [](Complex a, Complex b) {
    return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
  });
  if (pts.size() < 3) return pts;
  std::vector<Complex> hull(2 * pts.size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < pts.size(); ++i) {
    while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  for (std::size_t i = pts.size() - 1, t = k + 1; i-- > 0;) {
    while (k >= t && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0) --k;
    hull[k++] = pts[i];
  }
  hull.resize(k - 1);
  return hull;
}

std::vector<Candidate> ray_candidates(Complex anchor, std::span<const Disk> avoid,
                                      const RayFamily& family) {
  std::vector<Candidate> out;
  for (const Disk& d : avoid) {
    if (std::abs(anchor - d.center) <= d.radius + family.tau) return out;
  }
  for (int k = 0; k < family.directions; ++k) {
    const double theta = kTwoPi * k / family.directions;
    const Complex dir = std::polar(1.0, theta);
    Ray r = Ray::straight(anchor, dir);
    const double c = ray_disks_clearance(r, avoid);
    if (c > family.tau) out.push_back({std::move(r), c, theta});
  }
  if (family.one_bend && !avoid.empty() && family.max_bends > 0) {
    double rmax = 0.0;
    for (const Disk& d : avoid) rmax = std::max(rmax, d.radius);
    const double inflate = family.bend_inflation * rmax;
    constexpr int kSides = 16;
    const double scale = 1.0 / std::cos(std::numbers::pi / kSides);
    std::vector<Complex> pts;
    pts.reserve(avoid.size() * kSides);
    for (const Disk& d : avoid) {
      for (int s = 0; s < kSides; ++s) {
        pts.push_back(d.center + std::polar((d.radius + inflate) * scale, kTwoPi * s / kSides));
      }
    }
    const auto hull = convex_hull(std::move(pts));
    Complex centroid{0.0, 0.0};
    for (Complex h : hull) centroid += h;
    centroid /= static_cast<double>(hull.size());
    const std::size_t step =
        std::max<std::size_t>(1, hull.size() / static_cast<std::size_t>(family.max_bends));
    for (std::size_t i = 0; i < hull.size(); i += step) {
      const Complex bend = hull[i];
      const Complex out_dir = bend - centroid;
      if (std::abs(out_dir) == 0.0 || std::abs(bend - anchor) == 0.0) continue;
      Ray r = Ray::make(anchor, {bend}, out_dir / std::abs(out_dir));
      if (!r.is_simple()) continue;
      const double c = ray_disks_clearance(r, avoid);
      if (c > family.tau) out.push_back({r, c, angle_of(r.direction)});
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const Candidate& a, const Candidate& b) {
    return a.clearance > b.clearance;
  });
  return out;
}

bool separated(double a, double b, double theta_min) {
  const double d = ccw_offset(a, b);
  return std::min(d, kTwoPi - d) >= theta_min;
}

// Lazily filled table of ray-ray distances between two candidate lists.
class DistanceTable {
 public:
  DistanceTable(const std::vector<Candidate>& a, const std::vector<Candidate>& b)
      : a_(a), b_(b), d_(a.size() * b.size(), -1.0) {}

  double operator()(std::size_t i, std::size_t j) {
    double& d = d_[i * b_.size() + j];
    if (d < 0.0) d = ray_ray_distance(a_[i].ray, b_[j].ray);
    return d;
  }

 private:
  const std::vector<Candidate>& a_;
  const std::vector<Candidate>& b_;
  std::vector<double> d_;
};

// Best candidate from `cands` whose angle lies strictly inside the ccw arc
// (lo, lo + span), scored against r-rays i and j. Returns index and score.
std::pair<int, double> best_in_arc(const std::vector<Candidate>& cands, double lo,
                                   double span, DistanceTable& to_rm, std::size_t i,
                                   DistanceTable& to_rp, std::size_t j, double floor,
                                   double theta_min) {
  int best = -1;
  double score = floor;
  for (std::size_t k = 0; k < cands.size(); ++k) {
    const Candidate& c = cands[k];
    if (c.clearance <= score) break;  // sorted by clearance
    const double off = ccw_offset(lo, c.angle);
    if (off < theta_min || off > span - theta_min) continue;
    double s = std::min(c.clearance, to_rm(i, k));
    if (s <= score) continue;
    s = std::min(s, to_rp(j, k));
    if (s <= score) continue;
    score = s;
    best = static_cast<int>(k);
  }
  return {best, score};
}

void enumerate_unions(const AffineMap& m, int depth, const Parameter& z, const Disk& bounding,
                      std::vector<Disk>& out) {
  if (depth == 0) {
    out.push_back(image_disk(m, bounding));
    return;
  }
  enumerate_unions(compose(m, letter_map(Letter::F, z)), depth - 1, z, bounding, out);
  enumerate_unions(compose(m, letter_map(Letter::G, z)), depth - 1, z, bounding, out);
}

Word extension_word(std::size_t index, int n) {
  std::string s(static_cast<std::size_t>(n), 'f');
  for (int i = 0; i < n; ++i) {
    if ((index >> (n - 1 - i)) & 1u) s[static_cast<std::size_t>(i)] = 'g';
  }
  return Word(s);
}

struct Anchors {
  Complex p_minus, p_plus, q_minus, q_plus;
};

Anchors anchors_of(const Word& u, const Word& v, const Parameter& z) {
  const AffineMap mu = word_map(u, z);
  const AffineMap mv = word_map(v, z);
  return {mu(0.0), mu(1.0), mv(0.0), mv(1.0)};
}

}  // namespace

BallUnion ball_union(const Word& u, int n, const Parameter& z, int cap) {
  if (n < 0 || n > cap) throw InvalidParameter("ball union depth outside [0, cap]");
  if (u.size() + n > Word::kMaxLength) throw InvalidParameter("ball union word too long");
  BallUnion out{u, n, {}};
  out.disks.reserve(std::size_t{1} << n);
  enumerate_unions(word_map(u, z), n, z, bounding_disk(z), out.disks);
  return out;
}

std::optional<LinkedRays> search_linked_rays(Complex p_minus, Complex p_plus,
                                             std::span<const Disk> avoid_r, Complex q_minus,
                                             Complex q_plus, std::span<const Disk> avoid_s,
                                             const RayFamily& family) {
  const auto rm_c = ray_candidates(p_minus, avoid_r, family);
  if (rm_c.empty()) return std::nullopt;
  const auto rp_c = ray_candidates(p_plus, avoid_r, family);
  if (rp_c.empty()) return std::nullopt;
  const auto sm_c = ray_candidates(q_minus, avoid_s, family);
  if (sm_c.empty()) return std::nullopt;
  const auto sp_c = ray_candidates(q_plus, avoid_s, family);
  if (sp_c.empty()) return std::nullopt;

  const double th = family.theta_min;
  DistanceTable rm_rp(rm_c, rp_c), rm_sm(rm_c, sm_c), rp_sm(rp_c, sm_c);
  DistanceTable rm_sp(rm_c, sp_c), rp_sp(rp_c, sp_c), sm_sp(sm_c, sp_c);
  double best = family.tau;
  std::optional<LinkedRays> found;
  for (std::size_t i = 0; i < rm_c.size(); ++i) {
    const Candidate& rm = rm_c[i];
    if (rm.clearance <= best) break;
    for (std::size_t j = 0; j < rp_c.size(); ++j) {
      const Candidate& rp = rp_c[j];
      if (rp.clearance <= best) break;
      if (!separated(rm.angle, rp.angle, th)) continue;
      const double m0 = std::min({rm.clearance, rp.clearance, rm_rp(i, j)});
      if (m0 <= best) continue;
      const double span = ccw_offset(rm.angle, rp.angle);
      for (int option = 0; option < 2; ++option) {
        // option 0: s- inside the arc rm -> rp, s+ outside; option 1 swapped.
        const double lo_m = option == 0 ? rm.angle : rp.angle;
        const double span_m = option == 0 ? span : kTwoPi - span;
        const double lo_p = option == 0 ? rp.angle : rm.angle;
        const double span_p = kTwoPi - span_m;
        const double floor = std::max(best, 0.0);
        const auto [im, sm_score] = best_in_arc(sm_c, lo_m, span_m, rm_sm, i, rp_sm, j, floor, th);
        if (im < 0) continue;
        const auto [ip, sp_score] = best_in_arc(sp_c, lo_p, span_p, rm_sp, i, rp_sp, j, floor, th);
        if (ip < 0) continue;
        double total = std::min({m0, sm_score, sp_score});
        if (total <= best) continue;
        total = std::min(total, sm_sp(static_cast<std::size_t>(im), static_cast<std::size_t>(ip)));
        if (total <= best) continue;
        best = total;
        found = LinkedRays{rm.ray, rp.ray, sm_c[im].ray, sp_c[ip].ray, total};
      }
    }
  }
  return found;
}

std::optional<double> linked_rays_clearance(const LinkedRays& rays,
                                            std::span<const Disk> avoid_r,
                                            std::span<const Disk> avoid_s,
                                            double theta_min) {
  const Ray* all[] = {&rays.r_minus, &rays.r_plus, &rays.s_minus, &rays.s_plus};
  for (const Ray* r : all) {
    if (!r->is_simple()) return std::nullopt;
  }
  try {
    if (!directions_linked(rays.r_plus, rays.r_minus, rays.s_plus, rays.s_minus, theta_min)) {
      return std::nullopt;
    }
  } catch (const DegenerateDirections&) {
    return std::nullopt;
  }
  double c = kInf;
  c = std::min(c, ray_disks_clearance(rays.r_minus, avoid_r));
  c = std::min(c, ray_disks_clearance(rays.r_plus, avoid_r));
  c = std::min(c, ray_disks_clearance(rays.s_minus, avoid_s));
  c = std::min(c, ray_disks_clearance(rays.s_plus, avoid_s));
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) c = std::min(c, ray_ray_distance(*all[i], *all[j]));
  }
  return c;
}

bool crossing_words_admissible(const Word& u, const Word& v) noexcept {
  if (u.empty() || v.empty()) return false;
  if (u[0] != Letter::F || v[0] != Letter::G) return false;
  static const Word kU{"ffg"}, kV{"ggf"};
  return !(u.starts_with(kU) && v.starts_with(kV));
}

std::optional<CrossingCertificate> find_crossing(const Word& u, const Word& v, int n,
                                                 const Parameter& z,
                                                 const RayFamily& family) {
  if (!crossing_words_admissible(u, v)) return std::nullopt;
  const BallUnion bu = ball_union(u, n, z);
  const BallUnion bv = ball_union(v, n, z);
  const Anchors a = anchors_of(u, v, z);
  auto rays = search_linked_rays(a.p_minus, a.p_plus, bv.disks, a.q_minus, a.q_plus, bu.disks,
                                 family);
  if (!rays) return std::nullopt;
  CrossingCertificate cert;
  cert.u = u;
  cert.v = v;
  cert.n = n;
  cert.r_minus = std::move(rays->r_minus);
  cert.r_plus = std::move(rays->r_plus);
  cert.s_minus = std::move(rays->s_minus);
  cert.s_plus = std::move(rays->s_plus);
  cert.clearance = rays->clearance;
  cert.z = z;
  cert.epsilon = stability_radius(cert);
  return cert;
}

std::optional<double> crossing_clearance_at(const CrossingCertificate& cert,
                                            const Parameter& at) {
  if (!crossing_words_admissible(cert.u, cert.v)) return std::nullopt;
  if (cert.n < 0 || cert.n > kDefaultUnionCap) return std::nullopt;
  const Anchors home = anchors_of(cert.u, cert.v, cert.z);
  const double tol = 1e-12;
  if (std::abs(cert.r_minus.anchor - home.p_minus) > tol ||
      std::abs(cert.r_plus.anchor - home.p_plus) > tol ||
      std::abs(cert.s_minus.anchor - home.q_minus) > tol ||
      std::abs(cert.s_plus.anchor - home.q_plus) > tol) {
    return std::nullopt;
  }
  const Anchors now = anchors_of(cert.u, cert.v, at);
  const LinkedRays moved{cert.r_minus.translated(now.p_minus - home.p_minus),
                         cert.r_plus.translated(now.p_plus - home.p_plus),
                         cert.s_minus.translated(now.q_minus - home.q_minus),
                         cert.s_plus.translated(now.q_plus - home.q_plus), 0.0};
  const BallUnion bu = ball_union(cert.u, cert.n, at);
  const BallUnion bv = ball_union(cert.v, cert.n, at);
  return linked_rays_clearance(moved, bv.disks, bu.disks);
}

bool verify_crossing(const CrossingCertificate& cert, const Parameter& at, double tau) {
  if (!(cert.clearance > tau)) return false;
  const auto c = crossing_clearance_at(cert, at);
  if (!c || !(*c > tau)) return false;
  const double dz = std::abs(at.value() - cert.z.value());
  double threshold = tau;
  if (dz == 0.0) {
    threshold = cert.clearance - tau;
  } else if (cert.epsilon > 0.0 && dz < cert.epsilon) {
    threshold = std::max(tau, cert.clearance * (1.0 - dz / (2.0 * cert.epsilon)) - tau);
  }
  return *c >= threshold;
}

AffinePair affine_ratio(const Word& u, const Word& v, const Parameter& z) {
  const AffineMap m = compose(invert(word_map(v, z)), word_map(u, z));
  return {m.a, m.b};
}

double stability_radius(const CrossingCertificate& cert, const Parameter& z,
                        const Disk& region, double tau) {
  if (!(cert.clearance > tau)) return 0.0;
  const double room = region.radius - std::abs(z.value() - region.center);
  if (!(room > 0.0)) return 0.0;
  RegionBounds rb;
  try {
    rb = RegionBounds::over(region);
  } catch (const InvalidParameter&) {
    return 0.0;
  }
  const double rho = region.radius;
  const Complex half{0.5, 0.0};
  const Disk bounding = bounding_disk(z);

  struct Moving {
    Complex position;
    Complex velocity;
    double second;  // sup |d2/dz2| over the region
  };
  auto moving_point = [&](const Word& w, Complex x) {
    const MapJet j = word_jet(w, z);
    return Moving{j.at(x), j.derivative_at(x), point_bounds(w, x, rb).second};
  };
  auto relative_rate = [&](const Moving& a, const Moving& b) {
    return std::abs(a.velocity - b.velocity) + rho * (a.second + b.second);
  };

  const Moving pm = moving_point(cert.u, 0.0), pp = moving_point(cert.u, 1.0);
  const Moving qm = moving_point(cert.v, 0.0), qp = moving_point(cert.v, 1.0);
  const Ray* r_rays[] = {&cert.r_minus, &cert.r_plus};
  const Moving* r_anchor[] = {&pm, &pp};
  const Ray* s_rays[] = {&cert.s_minus, &cert.s_plus};
  const Moving* s_anchor[] = {&qm, &qp};

  double eps = kInf;
  auto account = [&](double clearance, double rate) {
    if (!(clearance > tau)) {
      eps = 0.0;
      return;
    }
    if (rate > 0.0) eps = std::min(eps, 0.5 * clearance / rate);
  };

  const std::size_t count = std::size_t{1} << cert.n;
  for (std::size_t k = 0; k < count; ++k) {
    const Word ext = extension_word(k, cert.n);
    for (int side = 0; side < 2; ++side) {
      // side 0: disks of v.S_n.B against the r-rays; side 1: u.S_n.B against s.
      const Word w = (side == 0 ? cert.v : cert.u).concat(ext);
      const Moving c = moving_point(w, half);
      const Disk disk = image_disk(word_map(w, z), bounding);
      const double dr = radius_rate_bound(w, rb);
      for (int i = 0; i < 2; ++i) {
        const Ray& ray = side == 0 ? *r_rays[i] : *s_rays[i];
        const Moving& anchor = side == 0 ? *r_anchor[i] : *s_anchor[i];
        account(ray_disk_clearance(ray, disk), relative_rate(anchor, c) + dr);
      }
    }
  }
  const Ray* all[] = {&cert.r_minus, &cert.r_plus, &cert.s_minus, &cert.s_plus};
  const Moving* all_anchor[] = {&pm, &pp, &qm, &qp};
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      account(ray_ray_distance(*all[i], *all[j]), relative_rate(*all_anchor[i], *all_anchor[j]));
    }
  }
  return std::max(0.0, std::min(eps, room));
}

double stability_radius(const CrossingCertificate& cert, double max_radius, double tau) {
  const Complex z = cert.z.value();
  const double slack = std::min(1.0 - std::abs(z), 1.0 - std::abs(1.0 - z));
  double rho = std::min(max_radius, 0.5 * slack);
  double eps = stability_radius(cert, cert.z, Disk{z, rho}, tau);
  // A smaller region tightens the second-order terms.
  if (eps > 0.0 && eps < 0.5 * rho) {
    rho = 2.0 * eps;
    eps = std::max(eps, stability_radius(cert, cert.z, Disk{z, rho}, tau));
  }
  return eps;
}

}  // namespace wiggle
