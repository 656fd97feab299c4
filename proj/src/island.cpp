#include "wiggle/island.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <numbers>
#include <queue>
#include <sstream>

#include "wiggle/json_io.hpp"
#include "wiggle/motion.hpp"
#include "wiggle/squiggle.hpp"

namespace wiggle {

namespace {

constexpr double kSqrt2 = std::numbers::sqrt2;

Word word_of_index(std::size_t index, int n) {
  std::string s(static_cast<std::size_t>(n), 'f');
  for (int i = 0; i < n; ++i) {
    if ((index >> (n - 1 - i)) & 1u) s[static_cast<std::size_t>(i)] = 'g';
  }
  return Word(s);
}

double box_offset(Complex d) { return std::max(std::abs(d.real()), std::abs(d.imag())); }

bool in_box(const TemplateBox& b, Complex alpha, Complex beta) {
  return box_offset(alpha - b.alpha) <= b.h_alpha && box_offset(beta - b.beta) <= b.h_beta;
}

std::vector<Disk> mapped_disks(const GammaEnclosure& g, Complex alpha, Complex beta) {
  std::vector<Disk> out;
  out.reserve(g.disks.size());
  const double scale = std::abs(alpha);
  for (const Disk& d : g.disks) out.push_back({alpha * d.center + beta, scale * d.radius});
  return out;
}

// sup |(N/D)''| from sup bounds of N, N', N'', D', D'' and inf |D|.
double quotient_second(double n0, double n1, double n2, double d0, double d1, double d2) {
  return n2 / d0 + 2.0 * n1 * d1 / (d0 * d0) + n0 * d2 / (d0 * d0) +
         2.0 * n0 * d1 * d1 / (d0 * d0 * d0);
}

// Largest r with slope * r + curvature * r^2 / 2 <= slack.
double reach(double slack, double slope, double curvature) {
  if (!(slack > 0.0)) return 0.0;
  const double disc = slope * slope + 2.0 * curvature * slack;
  const double denom = slope + std::sqrt(disc);
  return denom > 0.0 ? 2.0 * slack / denom : std::numeric_limits<double>::infinity();
}

struct AffineJet {
  Complex alpha, dalpha, beta, dbeta;
};

AffineJet affine_jet(const Word& u, const Word& v, const Parameter& z) {
  const MapJet ju = word_jet(u, z);
  const MapJet jv = word_jet(v, z);
  const Complex a2 = jv.a * jv.a;
  const Complex num = ju.b - jv.b;
  return {ju.a / jv.a, (ju.da * jv.a - ju.a * jv.da) / a2, num / jv.a,
          ((ju.db - jv.db) * jv.a - num * jv.da) / a2};
}

// Open parameter interval of the edge p + t (q - p) inside the disk of
// radius r about c, or nullopt.
std::optional<std::pair<double, double>> chord(Complex p, Complex q, Complex c, double r) {
  if (!(r > 0.0)) return std::nullopt;
  const Complex d = q - p;
  const Complex w = p - c;
  const double a = std::norm(d);
  const double b = (std::conj(d) * w).real();
  const double cc = std::norm(w) - r * r;
  const double disc = b * b - a * cc;
  if (!(disc > 0.0) || a == 0.0) return std::nullopt;
  const double s = std::sqrt(disc);
  return std::make_pair((-b - s) / a, (-b + s) / a);
}

std::vector<std::pair<double, double>> edge_intervals(Complex p, Complex q,
                                                      const std::vector<CertifiedBall>& balls,
                                                      double tau) {
  std::vector<std::pair<double, double>> iv;
  for (const CertifiedBall& b : balls) {
    const double r = b.epsilon - tau;
    if (point_segment_distance(b.center.value(), p, q) >= r) continue;
    if (auto c = chord(p, q, b.center.value(), r)) iv.push_back(*c);
  }
  std::sort(iv.begin(), iv.end());
  return iv;
}

// Furthest point reachable from x along open intervals with t0 < x < t1.
double furthest(const std::vector<std::pair<double, double>>& iv, double x) {
  double best = x;
  for (const auto& [t0, t1] : iv) {
    if (t0 >= x) break;
    if (t1 > best) best = t1;
  }
  return best;
}

void check_loop(const std::vector<Complex>& loop) {
  if (loop.size() < 3) throw InvalidParameter("loop needs at least three vertices");
  for (std::size_t i = 0; i < loop.size(); ++i) {
    if (loop[i] == loop[(i + 1) % loop.size()]) {
      throw InvalidParameter("loop repeats a vertex");
    }
  }
}

double parse_double(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const double d = std::stod(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw InvalidParameter("config key '" + key + "' needs a number, got '" + value + "'");
  }
}

std::int64_t parse_int(const std::string& key, const std::string& value) {
  try {
    std::size_t used = 0;
    const long long d = std::stoll(value, &used);
    if (used != value.size()) throw std::invalid_argument(value);
    return d;
  } catch (const std::exception&) {
    throw InvalidParameter("config key '" + key + "' needs an integer, got '" + value + "'");
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

bool inside_any(const std::vector<CertifiedBall>& balls, Complex z) {
  for (const CertifiedBall& b : balls) {
    if (std::abs(z - b.center.value()) < b.epsilon) return true;
  }
  return false;
}

}  // namespace

void ParamRegion::validate() const {
  if (!(half_width > 0.0)) throw InvalidParameter("half width must be positive");
  for (double sx : {-1.0, 1.0}) {
    for (double sy : {-1.0, 1.0}) {
      const Complex corner = center + Complex{sx * half_width, sy * half_width};
      if (!(std::abs(corner - 0.5) < 0.5)) {
        throw InvalidParameter("parameter square leaves the disk |z - 1/2| < 1/2");
      }
    }
  }
}

bool ParamRegion::contains(Complex z) const noexcept {
  return std::abs(z.real() - center.real()) < half_width &&
         std::abs(z.imag() - center.imag()) < half_width;
}

Disk ParamRegion::circumscribed() const noexcept { return {center, half_width * kSqrt2}; }

GammaEnclosure build_gamma_enclosure(const Disk& valid_over, int depth) {
  if (depth < 0 || depth > 16) throw InvalidParameter("enclosure depth outside [0, 16]");
  const RegionBounds rb = RegionBounds::over(valid_over);
  const Parameter z0(valid_over.center);
  const Disk bounding = bounding_disk(z0);
  const double rho = valid_over.radius;
  GammaEnclosure g{depth, valid_over, {}};
  const std::size_t count = std::size_t{1} << depth;
  g.disks.reserve(count);
  for (std::size_t k = 0; k < count; ++k) {
    const Word w = word_of_index(k, depth);
    Disk d = image_disk(word_map(w, z0), bounding);
    d.radius += rho * (point_bounds(w, 0.5, rb).first + radius_rate_bound(w, rb));
    g.disks.push_back(d);
  }
  return g;
}

bool gamma_enclosure_contains_samples(const GammaEnclosure& g, int iterate_depth) {
  const double h = g.valid_over.radius / kSqrt2;
  for (double sx : {-1.0, 0.0, 1.0}) {
    for (double sy : {-1.0, 0.0, 1.0}) {
      const Parameter z(g.valid_over.center + Complex{sx * h, sy * h});
      for (Complex p : iterate(z, iterate_depth).vertices) {
        bool inside = false;
        for (const Disk& d : g.disks) {
          if (std::abs(p - d.center) < d.radius) {
            inside = true;
            break;
          }
        }
        if (!inside) return false;
      }
    }
  }
  return true;
}

std::optional<double> template_clearance_at(const GammaEnclosure& g, const TemplateBox& box,
                                            Complex alpha, Complex beta) {
  const auto avoid_r = mapped_disks(g, alpha, beta);
  const LinkedRays moved{box.rays.r_minus, box.rays.r_plus,
                         box.rays.s_minus.translated(beta - box.beta),
                         box.rays.s_plus.translated(alpha + beta - box.alpha - box.beta), 0.0};
  return linked_rays_clearance(moved, avoid_r, g.disks);
}

bool verify_template_box(const GammaEnclosure& g, const TemplateBox& box, double tau) {
  if (!(box.h_alpha >= 0.0) || !(box.h_beta >= 0.0)) return false;
  if (box_offset(box.alpha - 1.0) <= box.h_alpha && box_offset(box.beta) <= box.h_beta) {
    return false;
  }
  const double tol = 1e-12;
  if (std::abs(box.rays.r_minus.anchor) > tol || std::abs(box.rays.r_plus.anchor - 1.0) > tol ||
      std::abs(box.rays.s_minus.anchor - box.beta) > tol ||
      std::abs(box.rays.s_plus.anchor - box.alpha - box.beta) > tol) {
    return false;
  }
  const auto c0 = template_clearance_at(g, box, box.alpha, box.beta);
  if (!c0) return false;
  double m_alpha = 1.0;
  for (const Disk& d : g.disks) m_alpha = std::max(m_alpha, std::abs(d.center) + d.radius);
  const double motion = kSqrt2 * (box.h_alpha * m_alpha + box.h_beta);
  if (!(*c0 - motion > tau)) return false;
  static constexpr Complex kCorners[] = {{1, 1}, {1, -1}, {-1, 1}, {-1, -1}};
  for (Complex ca : kCorners) {
    for (Complex cb : kCorners) {
      const auto c = template_clearance_at(g, box, box.alpha + box.h_alpha * ca,
                                           box.beta + box.h_beta * cb);
      if (!c || !(*c > tau)) return false;
    }
  }
  return true;
}

std::optional<TemplateBox> build_template_box(const GammaEnclosure& g, Complex alpha0,
                                              Complex beta0, double weight,
                                              const RayFamily& family) {
  const auto avoid_r = mapped_disks(g, alpha0, beta0);
  auto rays = search_linked_rays(0.0, 1.0, avoid_r, beta0, alpha0 + beta0, g.disks, family);
  if (!rays) return std::nullopt;
  TemplateBox box{alpha0, beta0, 0.0, 0.0, *rays, rays->clearance};
  double m_alpha = 1.0;
  for (const Disk& d : g.disks) m_alpha = std::max(m_alpha, std::abs(d.center) + d.radius);
  const double budget = 0.9 * (box.clearance - family.tau);
  if (!(budget > 0.0)) return std::nullopt;
  weight = std::isfinite(weight) && weight > 0.0 ? weight : 1.0;
  double h_alpha = budget / (kSqrt2 * (m_alpha + weight));
  for (int attempt = 0; attempt < 6; ++attempt, h_alpha *= 0.5) {
    box.h_alpha = h_alpha;
    box.h_beta = weight * h_alpha;
    if (verify_template_box(g, box, family.tau)) return box;
  }
  box.h_alpha = box.h_beta = 0.0;
  if (verify_template_box(g, box, family.tau)) return box;
  return std::nullopt;
}

TemplateRegion build_template_region(const GammaEnclosure& g,
                                     const std::vector<AffinePair>& seeds,
                                     const RayFamily& family) {
  TemplateRegion region;
  for (const AffinePair& s : seeds) {
    bool covered = false;
    for (const TemplateBox& b : region.boxes) covered = covered || in_box(b, s.alpha, s.beta);
    if (covered) continue;
    if (auto box = build_template_box(g, s.alpha, s.beta, 1.0, family)) {
      region.boxes.push_back(std::move(*box));
    }
  }
  return region;
}

std::vector<Parameter> scan_grid(const ParamRegion& u, double spacing) {
  if (!(spacing > 0.0)) throw InvalidParameter("grid spacing must be positive");
  const double h = u.half_width;
  // Offsets k * spacing strictly inside (-h, h), plus both edges; a pitch
  // wider than the whole square leaves only the edges.
  std::vector<double> offsets{-h};
  if (spacing <= 2.0 * h) {
    const auto k_max = static_cast<long>(std::ceil(h / spacing)) - 1;
    for (long k = -k_max; k <= k_max; ++k) {
      const double o = static_cast<double>(k) * spacing;
      if (std::abs(o) < h) offsets.push_back(o);
    }
  }
  offsets.push_back(h);
  std::vector<Parameter> out;
  out.reserve(offsets.size() * offsets.size());
  for (double oy : offsets) {
    for (double ox : offsets) out.emplace_back(u.center + Complex{ox, oy});
  }
  return out;
}

double template_radius(const Word& u, const Word& v, const Parameter& z, const TemplateBox& box,
                       double cap) {
  if (!(cap > 0.0)) return 0.0;
  const AffineJet j = affine_jet(u, v, z);
  const double slack_a = box.h_alpha - box_offset(j.alpha - box.alpha);
  const double slack_b = box.h_beta - box_offset(j.beta - box.beta);
  if (slack_a < 0.0 || slack_b < 0.0) return 0.0;
  RegionBounds rb;
  try {
    rb = RegionBounds::over(Disk{z.value(), cap});
  } catch (const InvalidParameter&) {
    return 0.0;
  }
  const CoefficientBounds au = coefficient_bounds(u, rb);
  const CoefficientBounds av = coefficient_bounds(v, rb);
  if (!(av.lower > 0.0)) return 0.0;
  const PointBounds bu = point_bounds(u, 0.0, rb);
  const PointBounds bv = point_bounds(v, 0.0, rb);
  const double m_alpha =
      quotient_second(au.value, au.first, au.second, av.lower, av.first, av.second);
  const double m_beta = quotient_second(bu.value + bv.value, bu.first + bv.first,
                                        bu.second + bv.second, av.lower, av.first, av.second);
  const double r = std::min(reach(slack_a, std::abs(j.dalpha), m_alpha),
                            reach(slack_b, std::abs(j.dbeta), m_beta));
  return std::min(r, cap);
}

std::vector<CrossingCertificate> harvest_crossings(const Parameter& z,
                                                   const HarvestOptions& options) {
  const Polyline curve = iterate(z, options.prefilter_depth);
  PairWorklist worklist(z, options.family.tau);
  std::vector<CrossingCertificate> found;
  int first = -1;
  std::vector<Complex> a(curve.vertices.size()), b(curve.vertices.size());
  while (!worklist.empty() && worklist.word_length() <= options.max_word_length &&
         worklist.pairs_examined() < options.max_pairs) {
    const int length = worklist.word_length();
    if (first >= 0 && length > first + options.extra_levels) break;
    const auto survivors = worklist.step();
    int tried = 0;
    for (const WordPair& p : survivors) {
      if (tried >= options.pairs_per_level) break;
      if (extends_excluded_pair(p) || !crossing_words_admissible(p.u, p.v)) continue;
      const AffineMap mu = word_map(p.u, z);
      const AffineMap mv = word_map(p.v, z);
      for (std::size_t i = 0; i < curve.vertices.size(); ++i) {
        a[i] = mu(curve.vertices[i]);
        b[i] = mv(curve.vertices[i]);
      }
      if (!polylines_intersect(a, b)) continue;
      ++tried;
      for (int n : options.union_depths) {
        if (n > kDefaultUnionCap || p.u.size() + n > Word::kMaxLength) continue;
        auto cert = find_crossing(p.u, p.v, n, z, options.family);
        if (cert && cert->epsilon > 0.0) found.push_back(std::move(*cert));
      }
    }
    if (!found.empty() && first < 0) first = length;
  }
  std::stable_sort(found.begin(), found.end(),
                   [](const CrossingCertificate& x, const CrossingCertificate& y) {
                     return x.epsilon > y.epsilon;
                   });
  return found;
}

std::optional<CertifiedBall> ball_from_witness(CertifyContext& ctx,
                                               const CrossingCertificate& witness) {
  if (!(witness.epsilon > 0.0)) return std::nullopt;
  const Complex z = witness.z.value();
  const double room = ctx.gamma.valid_over.radius - std::abs(z - ctx.gamma.valid_over.center);
  const double cap = std::min(witness.epsilon, room);
  if (!(cap > ctx.tau)) return std::nullopt;
  const AffineJet j = affine_jet(witness.u, witness.v, witness.z);
  int best_box = -1;
  double best = 0.0;
  for (std::size_t i = 0; i < ctx.region.boxes.size(); ++i) {
    const TemplateBox& box = ctx.region.boxes[i];
    if (!in_box(box, j.alpha, j.beta)) continue;
    const double r = template_radius(witness.u, witness.v, witness.z, box, cap);
    if (r > best) {
      best = r;
      best_box = static_cast<int>(i);
    }
  }
  // A box centred on this point gives the full slack; add one unless an
  // existing box already allows most of the crossing radius.
  if (best < 0.5 * cap) {
    const double da = std::abs(j.dalpha);
    const double weight = da > 0.0 ? std::abs(j.dbeta) / da : 1.0;
    if (auto box = build_template_box(ctx.gamma, j.alpha, j.beta, weight, ctx.harvest.family)) {
      const double r = template_radius(witness.u, witness.v, witness.z, *box, cap);
      if (r > best) {
        ctx.region.boxes.push_back(std::move(*box));
        best = r;
        best_box = static_cast<int>(ctx.region.boxes.size()) - 1;
      }
    }
  }
  if (best_box < 0 || !(best > ctx.tau)) return std::nullopt;
  return CertifiedBall{witness.z, best, witness, best_box};
}

std::optional<CertifiedBall> certify_grid_point(CertifyContext& ctx, const Parameter& z) {
  const auto certs = harvest_crossings(z, ctx.harvest);
  std::optional<CertifiedBall> best;
  for (std::size_t i = 0; i < certs.size() && i < 4; ++i) {
    auto ball = ball_from_witness(ctx, certs[i]);
    if (ball && (!best || ball->epsilon > best->epsilon)) best = std::move(ball);
  }
  return best;
}

bool coverage_check(const std::vector<Complex>& loop, const std::vector<CertifiedBall>& balls,
                    double tau) {
  return uncovered_segments(loop, balls, tau).empty();
}

std::vector<EdgeGap> uncovered_segments(const std::vector<Complex>& loop,
                                        const std::vector<CertifiedBall>& balls, double tau) {
  check_loop(loop);
  std::vector<EdgeGap> gaps;
  for (std::size_t e = 0; e < loop.size(); ++e) {
    const Complex p = loop[e], q = loop[(e + 1) % loop.size()];
    const auto iv = edge_intervals(p, q, balls, tau);
    double x = 0.0;
    while (true) {
      const double next = furthest(iv, x);
      if (next > x) {
        if (next > 1.0) break;
        x = next;
        continue;
      }
      // x is uncovered up to the first interval opening at or after it.
      double resume = 1.0;
      for (const auto& iv_k : iv) {
        if (iv_k.first >= x) {
          resume = std::min(resume, iv_k.first);
          break;
        }
      }
      gaps.push_back({static_cast<int>(e), x, resume});
      if (resume >= 1.0) break;
      x = std::nextafter(resume, 2.0);
    }
  }
  return gaps;
}

int winding_number(const std::vector<Complex>& loop, Complex p, double tau) {
  check_loop(loop);
  double total = 0.0;
  for (std::size_t i = 0; i < loop.size(); ++i) {
    const Complex a = loop[i], b = loop[(i + 1) % loop.size()];
    if (point_segment_distance(p, a, b) <= tau) {
      throw InvalidParameter("point lies on the loop");
    }
    total += std::arg((b - p) / (a - p));
  }
  const double turns = total / (2.0 * std::numbers::pi);
  const double rounded = std::round(turns);
  if (std::abs(turns - rounded) >= 0.1) throw Error("winding number residual too large");
  return static_cast<int>(rounded);
}

IslandConfig parse_island_config(std::istream& in) {
  IslandConfig c;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw InvalidParameter("config line " + std::to_string(line_no) + " lacks '='");
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key == "center_re") {
      c.region.center.real(parse_double(key, value));
    } else if (key == "center_im") {
      c.region.center.imag(parse_double(key, value));
    } else if (key == "half_width") {
      c.region.half_width = parse_double(key, value);
    } else if (key == "spacing") {
      c.spacing = parse_double(key, value);
    } else if (key == "loop_radius") {
      c.loop_radius = parse_double(key, value);
    } else if (key == "loop_vertices") {
      c.loop_vertices.clear();
      std::stringstream ss(value);
      std::string item;
      while (std::getline(ss, item, ';')) {
        item = trim(item);
        if (item.empty()) continue;
        const auto comma = item.find(',');
        if (comma == std::string::npos) {
          throw InvalidParameter("loop vertex '" + item + "' must be re,im");
        }
        c.loop_vertices.emplace_back(parse_double(key, trim(item.substr(0, comma))),
                                     parse_double(key, trim(item.substr(comma + 1))));
      }
    } else if (key == "budget_depth") {
      c.island_budgets.max_depth = static_cast<int>(parse_int(key, value));
    } else if (key == "budget_pairs") {
      c.island_budgets.max_pairs = parse_int(key, value);
    } else if (key == "grid_embed_pairs") {
      c.grid_embed_pairs = parse_int(key, value);
    } else if (key == "gamma_depth") {
      c.gamma_depth = static_cast<int>(parse_int(key, value));
    } else if (key == "harvest_max_length") {
      c.harvest.max_word_length = static_cast<int>(parse_int(key, value));
    } else if (key == "harvest_pairs_per_level") {
      c.harvest.pairs_per_level = static_cast<int>(parse_int(key, value));
    } else if (key == "retries") {
      c.retries = static_cast<int>(parse_int(key, value));
    } else if (key == "checkpoint") {
      c.checkpoint_path = value;
    } else if (key == "checkpoint_every") {
      c.checkpoint_every = static_cast<int>(parse_int(key, value));
    } else if (key == "grid") {
      if (value != "true" && value != "false") {
        throw InvalidParameter("config key 'grid' needs true or false");
      }
      c.grid = value == "true";
    } else {
      throw InvalidParameter("unknown config key '" + key + "'");
    }
  }
  if (!(c.spacing > 0.0)) throw InvalidParameter("spacing must be positive");
  if (!(c.loop_radius > 0.0 && c.loop_radius < 1.0)) {
    throw InvalidParameter("loop_radius must lie in (0, 1)");
  }
  if (c.checkpoint_every <= 0) throw InvalidParameter("checkpoint_every must be positive");
  c.region.validate();
  return c;
}

std::vector<Complex> default_loop(const ParamRegion& u, double radius_fraction) {
  std::vector<Complex> loop;
  for (int k = 0; k < 8; ++k) {
    loop.push_back(u.center +
                   std::polar(radius_fraction * u.half_width, std::numbers::pi * k / 4.0));
  }
  return loop;
}

std::vector<int> route_loop(const std::vector<Parameter>& grid, const std::vector<double>& weight,
                            Complex around, const std::vector<std::pair<int, int>>& banned) {
  const auto side = static_cast<int>(std::lround(std::sqrt(static_cast<double>(grid.size()))));
  if (side < 2 || static_cast<std::size_t>(side * side) != grid.size() ||
      weight.size() != grid.size()) {
    throw InvalidParameter("route_loop needs a square grid with one weight per point");
  }
  const int n = side * side;
  // Cut: a ray from `around`, tilted so it misses every grid point. Crossing
  // it flips the sheet; a walk from (v, 0) to (v, 1) winds an odd number of
  // times.
  Complex dir = std::polar(1.0, 1.4);
  for (int k = 0; k < 16; ++k) {
    bool clear = true;
    for (const Parameter& p : grid) {
      const Complex d = (p.value() - around) / dir;
      if (d.real() > 0.0 && std::abs(d.imag()) < 1e-9 * std::abs(d)) clear = false;
    }
    if (clear) break;
    dir *= std::polar(1.0, 0.0137);
  }
  auto crosses = [&](Complex a, Complex b) {
    const Complex pa = (a - around) / dir, pb = (b - around) / dir;
    if ((pa.imag() > 0.0) == (pb.imag() > 0.0)) return false;
    const double x = pa.real() - pa.imag() * (pb.real() - pa.real()) / (pb.imag() - pa.imag());
    return x > 0.0;
  };
  auto is_banned = [&](int a, int b) {
    return std::any_of(banned.begin(), banned.end(), [&](const std::pair<int, int>& e) {
      return (e.first == a && e.second == b) || (e.first == b && e.second == a);
    });
  };
  struct Edge {
    int to;
    double cost;
    bool flip;
  };
  std::vector<std::vector<Edge>> adj(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) {
    if (!(weight[static_cast<std::size_t>(a)] > 0.0)) continue;
    const int ax = a % side, ay = a / side;
    for (int dy = -1; dy <= 1; ++dy) {
      for (int dx = -1; dx <= 1; ++dx) {
        const int bx = ax + dx, by = ay + dy;
        if ((dx == 0 && dy == 0) || bx < 0 || by < 0 || bx >= side || by >= side) continue;
        const int b = by * side + bx;
        const double wa = weight[static_cast<std::size_t>(a)];
        const double wb = weight[static_cast<std::size_t>(b)];
        if (!(wb > 0.0) || is_banned(a, b)) continue;
        if (dx != 0 && dy != 0 && (weight[static_cast<std::size_t>(ay * side + bx)] < 0.0 ||
                                   weight[static_cast<std::size_t>(by * side + ax)] < 0.0)) {
          continue;
        }
        const Complex pa = grid[static_cast<std::size_t>(a)].value();
        const Complex pb = grid[static_cast<std::size_t>(b)].value();
        adj[static_cast<std::size_t>(a)].push_back(
            {b, std::abs(pb - pa) * 0.5 * (1.0 / wa + 1.0 / wb), crosses(pa, pb)});
      }
    }
  }

  // Dijkstra on the two-sheet cover from each (v, 0) to (v, 1).
  const double inf = std::numeric_limits<double>::infinity();
  double best_cost = inf;
  std::vector<int> best;
  std::vector<double> dist(static_cast<std::size_t>(2 * n));
  std::vector<int> parent(static_cast<std::size_t>(2 * n));
  for (int v = 0; v < n; ++v) {
    if (adj[static_cast<std::size_t>(v)].empty()) continue;
    std::fill(dist.begin(), dist.end(), inf);
    std::fill(parent.begin(), parent.end(), -1);
    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<std::size_t>(v)] = 0.0;
    queue.push({0.0, v});
    const int target = v + n;
    while (!queue.empty()) {
      const auto [d, s] = queue.top();
      queue.pop();
      if (d > dist[static_cast<std::size_t>(s)] || d >= best_cost) continue;
      if (s == target) break;
      const int node = s % n, sheet = s / n;
      for (const Edge& e : adj[static_cast<std::size_t>(node)]) {
        const int t = e.to + n * (sheet ^ (e.flip ? 1 : 0));
        const double nd = d + e.cost;
        if (nd < dist[static_cast<std::size_t>(t)]) {
          dist[static_cast<std::size_t>(t)] = nd;
          parent[static_cast<std::size_t>(t)] = s;
          queue.push({nd, t});
        }
      }
    }
    if (dist[static_cast<std::size_t>(target)] < best_cost) {
      best_cost = dist[static_cast<std::size_t>(target)];
      best.clear();
      for (int s = parent[static_cast<std::size_t>(target)]; s != v;
           s = parent[static_cast<std::size_t>(s)]) {
        best.push_back(s % n);
      }
      best.push_back(v);
      std::reverse(best.begin(), best.end());
    }
  }
  return best;
}

bool ball_sample_check(const CertifiedBall& ball, int count, double fraction, double tau) {
  for (int k = 0; k < count; ++k) {
    const Complex z =
        ball.center.value() + std::polar(fraction * ball.epsilon, 2.0 * std::numbers::pi * k / count);
    if (!Parameter::is_valid(z) || !verify_crossing(ball.witness, Parameter(z), tau)) {
      return false;
    }
  }
  return true;
}

namespace {

class Checkpoint {
 public:
  Checkpoint(const std::string& path, int every) : every_(every) {
    if (!path.empty()) out_.open(path, std::ios::app);
  }
  void write(const Json& record) {
    if (!out_.is_open()) return;
    out_ << record.dump() << '\n';
    if (++pending_ >= every_) {
      out_.flush();
      pending_ = 0;
    }
  }
  ~Checkpoint() {
    if (out_.is_open()) out_.flush();
  }

 private:
  std::ofstream out_;
  int every_;
  int pending_ = 0;
};

struct Resume {
  std::vector<CrossingCertificate> witnesses;
  std::vector<GridRecord> grid;
};

Resume load_checkpoint(const std::string& path) {
  Resume r;
  if (path.empty()) return r;
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    Json j;
    try {
      j = Json::parse(line);
    } catch (const Json::exception&) {
      continue;  // a torn line from an interrupted run
    }
    const std::string kind = j.value("kind", "");
    if (kind == "ball") {
      r.witnesses.push_back(crossing_certificate_from_json(j.at("witness")));
    } else if (kind == "grid") {
      r.grid.push_back({Parameter(complex_from_json(j.at("z"))), j.at("ball").get<bool>(),
                        j.at("embedded").get<bool>()});
    }
  }
  return r;
}

class LoopWalker {
 public:
  LoopWalker(CertifyContext& ctx, std::vector<CertifiedBall>& balls, Checkpoint& checkpoint,
             ProveResult& result, const IslandConfig& config, const ProgressFn& progress)
      : ctx_(ctx),
        balls_(balls),
        checkpoint_(checkpoint),
        result_(result),
        config_(config),
        progress_(progress) {}

  void walk(const std::vector<Complex>& loop) {
    for (std::size_t e = 0; e < loop.size(); ++e) {
      walk_edge(loop[e], loop[(e + 1) % loop.size()]);
      if (progress_) {
        progress_("edge " + std::to_string(e + 1) + "/" + std::to_string(loop.size()) +
                  ": " + std::to_string(balls_.size()) + " balls, " +
                  std::to_string(result_.harvests) + " harvests");
      }
    }
  }

 private:
  static constexpr double kGapStep = 2.5e-7;

  void walk_edge(Complex p, Complex q) {
    const double length = std::abs(q - p);
    double t = 0.0;
    while (t <= 1.0) {
      const Complex x = p + (q - p) * t;
      const double exit = covered_exit(p, q, x);
      if (exit > t) {
        t = exit;
        continue;
      }
      auto ball = certify_at(Parameter(x));
      if (!ball) {
        result_.gap_points.emplace_back(x);
        checkpoint_.write({{"kind", "gap"}, {"z", to_json(x)}});
        t += kGapStep / length;
        continue;
      }
      previous_ = ball->witness;
      reference_eps_ = std::max(ball->epsilon, 0.9 * reference_eps_);
      checkpoint_.write(record(*ball));
      balls_.push_back(std::move(*ball));
    }
  }

  // Largest edge parameter reached by a ball that contains x with margin.
  double covered_exit(Complex p, Complex q, Complex x) const {
    double best = -1.0;
    for (auto it = balls_.rbegin(); it != balls_.rend(); ++it) {
      const double r = it->epsilon - ctx_.tau;
      if (!(std::abs(x - it->center.value()) < r)) continue;
      if (auto c = chord(p, q, it->center.value(), r)) best = std::max(best, c->second);
    }
    return best;
  }

  std::optional<CertifiedBall> certify_at(const Parameter& z) {
    std::optional<CertifiedBall> best;
    auto consider = [&](const CrossingCertificate& cert) {
      auto ball = ball_from_witness(ctx_, cert);
      if (ball && ball->epsilon > config_.min_epsilon &&
          (!best || ball->epsilon > best->epsilon)) {
        best = std::move(ball);
      }
    };
    if (previous_) {
      for (int n = previous_->n - 1; n <= previous_->n + 2; ++n) {
        if (n < 2 || n > kDefaultUnionCap || previous_->u.size() + n > Word::kMaxLength) continue;
        if (auto cert = find_crossing(previous_->u, previous_->v, n, z, ctx_.harvest.family)) {
          consider(*cert);
        }
      }
    }
    // Harvest again, looking further down the levels when the first pass
    // only finds a thin crossing: the best pair often changes across a dip.
    HarvestOptions options = ctx_.harvest;
    for (int pass = 0; pass < 3; ++pass) {
      const double wanted = (pass == 0 ? 0.5 : 0.25) * reference_eps_;
      if (best && best->epsilon >= wanted) break;
      if (pass == 1) options.extra_levels += 3;
      if (pass == 2) {
        if (std::find(options.union_depths.begin(), options.union_depths.end(),
                      kDefaultUnionCap) != options.union_depths.end()) {
          break;
        }
        options.union_depths.push_back(kDefaultUnionCap);
      }
      ++result_.harvests;
      const auto certs = harvest_crossings(z, options);
      for (std::size_t i = 0; i < certs.size() && i < 4; ++i) consider(certs[i]);
    }
    if (best && !(best->epsilon > 2.0 * ctx_.tau)) best.reset();
    return best;
  }

  static Json record(const CertifiedBall& b) {
    Json j = to_json(b);
    j["kind"] = "ball";
    return j;
  }

  CertifyContext& ctx_;
  std::vector<CertifiedBall>& balls_;
  Checkpoint& checkpoint_;
  ProveResult& result_;
  const IslandConfig& config_;
  const ProgressFn& progress_;
  std::optional<CrossingCertificate> previous_;
  // Slowly decaying recent radius, so one thin ball does not lower the bar.
  double reference_eps_ = 0.0;
};

// Keeps only the boxes some ball uses, renumbering the indices.
void prune_templates(IslandProof& proof) {
  std::vector<int> remap(proof.templates.boxes.size(), -1);
  std::vector<TemplateBox> kept;
  for (CertifiedBall& b : proof.cover) {
    int& slot = remap[static_cast<std::size_t>(b.box)];
    if (slot < 0) {
      slot = static_cast<int>(kept.size());
      kept.push_back(proof.templates.boxes[static_cast<std::size_t>(b.box)]);
    }
    b.box = slot;
  }
  proof.templates.boxes = std::move(kept);
}

}  // namespace

ProveResult prove_island(const IslandConfig& config, const ProgressFn& progress) {
  ProveResult result;
  auto note = [&](const std::string& s) {
    result.diagnostics.push_back(s);
    if (progress) progress(s);
  };
  config.region.validate();
  const Parameter center(config.region.center);

  const EmbedOutcome island = certify_in(center, config.island_budgets);
  if (!island.certified) {
    note("island point not certified embedded");
    return result;
  }
  note("island point certified at word length " + std::to_string(island.depth_reached));

  CertifyContext ctx;
  ctx.harvest = config.harvest;
  ctx.gamma = build_gamma_enclosure(
      Disk{config.region.center, 1.05 * config.region.half_width * kSqrt2}, config.gamma_depth);
  if (!gamma_enclosure_contains_samples(ctx.gamma)) {
    note("gamma enclosure misses sampled curve vertices");
    return result;
  }

  std::vector<CertifiedBall> balls;
  const Resume resume = load_checkpoint(config.checkpoint_path);
  for (const CrossingCertificate& w : resume.witnesses) {
    if (!verify_crossing(w, w.z)) continue;
    if (auto b = ball_from_witness(ctx, w)) balls.push_back(std::move(*b));
  }
  if (!resume.witnesses.empty()) {
    note("resumed " + std::to_string(balls.size()) + " balls from checkpoint");
  }
  Checkpoint checkpoint(config.checkpoint_path, config.checkpoint_every);

  std::vector<GridRecord> grid = resume.grid;
  if (config.grid) {
    const auto points = scan_grid(config.region, config.spacing);
    EmbedBudgets quick;
    quick.max_pairs = config.grid_embed_pairs;
    std::size_t done = 0;
    for (const Parameter& z : points) {
      ++done;
      const bool seen = std::any_of(grid.begin(), grid.end(),
                                    [&](const GridRecord& g) { return g.z == z; });
      if (seen) continue;
      GridRecord rec{z, false, false};
      if (auto ball = certify_grid_point(ctx, z)) {
        rec.ball = true;
        Json j = to_json(*ball);
        j["kind"] = "ball";
        checkpoint.write(j);
        balls.push_back(std::move(*ball));
      }
      rec.embedded = certify_in(z, quick).certified;
      checkpoint.write({{"kind", "grid"},
                        {"z", to_json(z.value())},
                        {"ball", rec.ball},
                        {"embedded", rec.embedded}});
      grid.push_back(rec);
      if (progress && done % 20 == 0) {
        progress("grid " + std::to_string(done) + "/" + std::to_string(points.size()));
      }
    }
    note("grid: " + std::to_string(grid.size()) + " points, " + std::to_string(balls.size()) +
         " balls");
  }

  // Route weights: ball radius at each grid point, negative where embedded.
  const bool routed = config.loop_vertices.empty() && config.grid;
  std::vector<Parameter> points;
  std::vector<double> weight;
  if (routed) {
    points = scan_grid(config.region, config.spacing);
    for (const Parameter& z : points) {
      double w = 0.0;
      for (const GridRecord& g : grid) {
        if (g.z == z && g.embedded) w = -1.0;
      }
      if (w == 0.0) {
        for (const CertifiedBall& b : balls) {
          if (b.center == z) w = std::max(w, b.epsilon);
        }
      }
      weight.push_back(w);
    }
  }
  std::vector<std::pair<int, int>> banned;
  std::vector<Complex> loop = config.loop_vertices;
  for (int attempt = 0; attempt <= config.retries; ++attempt) {
    std::vector<int> route;
    if (routed) {
      route = route_loop(points, weight, center.value(), banned);
      if (route.empty()) {
        note("no grid route around the island point");
        break;
      }
      loop.clear();
      for (int i : route) loop.push_back(points[static_cast<std::size_t>(i)].value());
      note("routed loop with " + std::to_string(loop.size()) + " vertices");
    } else if (config.loop_vertices.empty()) {
      loop = default_loop(config.region, config.loop_radius * (1.0 - 0.05 * attempt));
    }
    result.gap_points.clear();
    LoopWalker walker(ctx, balls, checkpoint, result, config, progress);
    walker.walk(loop);
    result.gaps = uncovered_segments(loop, balls, ctx.tau);
    if (result.gaps.empty()) break;
    note("attempt " + std::to_string(attempt) + ": " + std::to_string(result.gaps.size()) +
         " uncovered segments");
    if (!config.loop_vertices.empty()) break;
    // Reroute around the edges that kept gaps.
    for (const EdgeGap& g : result.gaps) {
      const std::size_t e = static_cast<std::size_t>(g.edge);
      if (routed) banned.emplace_back(route[e], route[(e + 1) % route.size()]);
    }
  }
  result.balls = balls.size();
  if (!result.gaps.empty()) {
    note("loop not covered");
    return result;
  }

  bool exclusive = !inside_any(balls, center.value());
  for (const GridRecord& g : grid) {
    if (g.embedded && inside_any(balls, g.z.value())) exclusive = false;
  }
  if (!exclusive) {
    note("a parameter is both certified embedded and covered by a crossing ball");
    return result;
  }
  const int w_island = winding_number(loop, center.value(), ctx.tau);
  const int w_reference = winding_number(loop, Complex{0.5, 0.0}, ctx.tau);
  if (std::abs(w_island) != 1 || w_reference != 0) {
    note("loop winding numbers are " + std::to_string(w_island) + " and " +
         std::to_string(w_reference));
    return result;
  }
  std::size_t unsound = 0;
  for (const CertifiedBall& b : balls) unsound += ball_sample_check(b) ? 0 : 1;
  if (unsound > 0) {
    note(std::to_string(unsound) + " balls fail the sampled soundness check");
    return result;
  }

  IslandProof proof;
  proof.region = config.region;
  proof.island_point = island.certificate;
  proof.loop = loop;
  proof.cover = std::move(balls);
  proof.gamma = ctx.gamma;
  proof.templates = std::move(ctx.region);
  proof.grid = std::move(grid);
  prune_templates(proof);
  note("proof assembled: " + std::to_string(proof.cover.size()) + " balls, " +
       std::to_string(proof.templates.boxes.size()) + " template boxes");
  result.proof = std::move(proof);
  return result;
}

ReplayReport replay_proof(const IslandProof& proof, double tau) {
  ReplayReport report;
  auto fail = [&](const std::string& s) {
    report.ok = false;
    report.failures.push_back(s);
  };
  try {
    proof.region.validate();
  } catch (const Error& e) {
    fail(e.what());
  }

  const EmbedCertificate& ic = proof.island_point;
  if (!ic.terminated) fail("island certificate is not terminated");
  EmbedBudgets budgets;
  budgets.max_depth = std::max(3, ic.max_depth);
  budgets.max_pairs = std::max<std::int64_t>(1, ic.pairs_examined);
  budgets.margin = ic.margin;
  const EmbedOutcome again = certify_in(ic.z, budgets);
  if (!again.certified || again.certificate.pairs_examined != ic.pairs_examined) {
    fail("island certificate does not replay");
  }

  if (!gamma_enclosure_contains_samples(proof.gamma)) fail("gamma enclosure misses samples");
  const Disk& over = proof.gamma.valid_over;
  for (std::size_t i = 0; i < proof.templates.boxes.size(); ++i) {
    if (!verify_template_box(proof.gamma, proof.templates.boxes[i], tau)) {
      fail("template box " + std::to_string(i) + " fails");
    }
  }

  for (std::size_t i = 0; i < proof.cover.size(); ++i) {
    const CertifiedBall& b = proof.cover[i];
    const std::string tag = "ball " + std::to_string(i);
    const CrossingCertificate& w = b.witness;
    if (!(w.z == b.center)) {
      fail(tag + ": witness parameter differs from centre");
      continue;
    }
    if (!verify_crossing(w, w.z, tau)) {
      fail(tag + ": witness does not verify");
      continue;
    }
    const double eps = stability_radius(w);
    if (!(b.epsilon <= w.epsilon && w.epsilon <= eps)) fail(tag + ": radius exceeds stability");
    const double room = over.radius - std::abs(b.center.value() - over.center);
    if (!(b.epsilon <= room)) fail(tag + ": ball leaves the enclosure region");
    if (b.box < 0 || b.box >= static_cast<int>(proof.templates.boxes.size())) {
      fail(tag + ": no template box");
      continue;
    }
    const double r = template_radius(w.u, w.v, w.z,
                                     proof.templates.boxes[static_cast<std::size_t>(b.box)],
                                     std::min(w.epsilon, room));
    if (!(b.epsilon <= r)) fail(tag + ": radius exceeds template box");
    if (!ball_sample_check(b, 8, 0.9, tau)) fail(tag + ": sampled check fails");
  }

  try {
    if (!coverage_check(proof.loop, proof.cover, tau)) fail("loop not covered");
    if (std::abs(winding_number(proof.loop, ic.z.value(), tau)) != 1) {
      fail("loop does not wind once around the island point");
    }
    if (proof.reference != Complex{0.5, 0.0}) fail("reference point must be 1/2");
    if (winding_number(proof.loop, proof.reference, tau) != 0) {
      fail("loop winds around the reference point");
    }
  } catch (const Error& e) {
    fail(e.what());
  }

  if (inside_any(proof.cover, ic.z.value())) fail("island point lies in a crossing ball");
  for (const GridRecord& g : proof.grid) {
    if (g.embedded && inside_any(proof.cover, g.z.value())) {
      fail("embedded grid point lies in a crossing ball");
    }
  }
  return report;
}

}  // namespace wiggle
