#pragma once

// Desk-scale disconnection proof: a loop of parameters covered by balls of
// stable crossings (so it lies in R) that winds once around a parameter
// certified embedded, and not at all around 1/2.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <string>
#include <vector>

#include "wiggle/crossing.hpp"
#include "wiggle/embed.hpp"

namespace wiggle {

/// Axis-aligned open square of parameters.
struct ParamRegion {
  Complex center{0.3409, 0.43486};
  double half_width = 2.5e-5;

  /// Throws InvalidParameter unless the closed square lies in |z - 1/2| < 1/2.
  void validate() const;
  bool contains(Complex z) const noexcept;
  /// Smallest disk containing the square.
  Disk circumscribed() const noexcept;
};

/// Disks whose union contains gamma(z) for every z in `valid_over`.
struct GammaEnclosure {
  int depth = 0;
  Disk valid_over;
  std::vector<Disk> disks;
};

/// Images of the bounding disk under all words of length `depth` at the
/// centre of `valid_over`, each inflated by its motion over that disk.
GammaEnclosure build_gamma_enclosure(const Disk& valid_over, int depth);

/// Checks that every vertex of iterate(z, depth) lies strictly inside the
/// union for each sampled parameter (corners, centre and edge midpoints of
/// the square inscribed in `valid_over`).
bool gamma_enclosure_contains_samples(const GammaEnclosure& g, int iterate_depth = 10);

/// A box of (alpha, beta): |Re, Im of alpha - alpha0| <= h_alpha and the same
/// for beta. `rays` are anchored at 0, 1 (r-, r+, avoiding alpha Gamma + beta)
/// and beta0, alpha0 + beta0 (s-, s+, avoiding Gamma).
struct TemplateBox {
  Complex alpha;
  Complex beta;
  double h_alpha = 0.0;
  double h_beta = 0.0;
  LinkedRays rays;
  double clearance = 0.0;
};

struct TemplateRegion {
  std::vector<TemplateBox> boxes;
};

/// Clearance of the template rays for one (alpha, beta), with the s-rays
/// moved rigidly from the box centre. nullopt when not linked.
std::optional<double> template_clearance_at(const GammaEnclosure& g, const TemplateBox& box,
                                            Complex alpha, Complex beta);

/// Interval argument over the box interior plus the 16 corners.
bool verify_template_box(const GammaEnclosure& g, const TemplateBox& box,
                         double tau = kDefaultTau);

/// Searches template rays at (alpha0, beta0) and sizes the largest box the
/// clearance allows, with the half-widths split in proportion to `weight`
/// (beta over alpha). nullopt when no rays are found or the box fails.
std::optional<TemplateBox> build_template_box(const GammaEnclosure& g, Complex alpha0,
                                              Complex beta0, double weight = 1.0,
                                              const RayFamily& family = {});

/// Verified boxes around each seed not already inside the region.
TemplateRegion build_template_region(const GammaEnclosure& g,
                                     const std::vector<AffinePair>& seeds,
                                     const RayFamily& family = {});

/// Row-major grid covering the closed square, corners included: rows by
/// ascending imaginary part, real part ascending within a row.
std::vector<Parameter> scan_grid(const ParamRegion& u, double spacing);

struct CertifiedBall {
  Parameter center{Complex{0.5, 0.0}};
  double epsilon = 0.0;
  CrossingCertificate witness;
  int box = -1;  // index into the template region
};

/// Largest radius about z on which (alpha(z'), beta(z')) stays in the box,
/// capped by `cap`. Zero when (alpha(z), beta(z)) is outside.
double template_radius(const Word& u, const Word& v, const Parameter& z,
                       const TemplateBox& box, double cap);

struct HarvestOptions {
  int max_word_length = 48;
  /// Levels examined after the first level that yields a crossing.
  int extra_levels = 2;
  /// Prefiltered pairs tried per level.
  int pairs_per_level = 48;
  std::vector<int> union_depths{6, 8, 10};
  int prefilter_depth = 10;
  std::int64_t max_pairs = 2'000'000;
  RayFamily family;
};

/// Crossing certificates for pairs that survive the embed worklist at z,
/// best stability radius first.
std::vector<CrossingCertificate> harvest_crossings(const Parameter& z,
                                                   const HarvestOptions& options = {});

/// Shared state of a certification run: the enclosure and the growing
/// template region.
struct CertifyContext {
  GammaEnclosure gamma;
  TemplateRegion region;
  HarvestOptions harvest;
  double tau = kDefaultTau;
};

/// Ball about z from a witness: radius min(stability radius, template
/// radius, room inside gamma.valid_over). Adds a template box when no
/// existing one contains (alpha(z), beta(z)).
std::optional<CertifiedBall> ball_from_witness(CertifyContext& ctx,
                                               const CrossingCertificate& witness);

/// Harvests crossings at z and keeps the largest ball. nullopt is a gap.
std::optional<CertifiedBall> certify_grid_point(CertifyContext& ctx, const Parameter& z);

/// Every edge is covered by open intervals on which the edge lies inside
/// some ball with margin tau.
bool coverage_check(const std::vector<Complex>& loop, const std::vector<CertifiedBall>& balls,
                    double tau = kDefaultTau);

/// Uncovered parameter intervals [t0, t1] per edge.
struct EdgeGap {
  int edge = 0;
  double t0 = 0.0;
  double t1 = 0.0;
};
std::vector<EdgeGap> uncovered_segments(const std::vector<Complex>& loop,
                                        const std::vector<CertifiedBall>& balls,
                                        double tau = kDefaultTau);

/// Signed winding number of the closed polygon about p. Throws
/// InvalidParameter when p is within tau of the loop.
int winding_number(const std::vector<Complex>& loop, Complex p, double tau = kDefaultTau);

struct IslandConfig {
  ParamRegion region;
  double spacing = 2.5e-6;
  /// Explicit loop. Empty means a loop routed through the grid balls, or an
  /// octagon of radius loop_radius * half_width about the centre when the
  /// grid is off.
  std::vector<Complex> loop_vertices;
  double loop_radius = 0.9;
  EmbedBudgets island_budgets;
  /// Pair budget of the embed check run at every grid point.
  std::int64_t grid_embed_pairs = 100'000;
  int gamma_depth = 10;
  HarvestOptions harvest;
  int retries = 3;
  /// Ball radii below this count as failures.
  double min_epsilon = 1e-12;
  std::string checkpoint_path;
  int checkpoint_every = 1000;
  bool grid = true;
};

/// key = value lines; '#' starts a comment. Keys: center_re, center_im,
/// half_width, spacing, loop_vertices (re,im;re,im;...), loop_radius,
/// budget_depth, budget_pairs, grid_embed_pairs, gamma_depth,
/// harvest_max_length, harvest_pairs_per_level, retries, checkpoint,
/// checkpoint_every, grid. Throws InvalidParameter on unknown keys or bad
/// values.
IslandConfig parse_island_config(std::istream& in);

std::vector<Complex> default_loop(const ParamRegion& u, double radius_fraction);

/// Loop through points of a square grid (as from scan_grid). `weight` has one
/// entry per point: the ball radius there, 0 when the point has no ball,
/// negative when it is certified embedded. Returns grid indices of the
/// cheapest closed walk winding an odd number of times around `around`,
/// where an edge between 8-neighbours costs its length over the harmonic mean
/// of the endpoint radii. Diagonals next to embedded points and `banned`
/// edges are not used. Empty when no such walk exists.
std::vector<int> route_loop(const std::vector<Parameter>& grid, const std::vector<double>& weight,
                            Complex around,
                            const std::vector<std::pair<int, int>>& banned = {});

struct GridRecord {
  Parameter z{Complex{0.5, 0.0}};
  bool ball = false;
  bool embedded = false;  // certify_in succeeded with the grid budget
};

struct IslandProof {
  ParamRegion region;
  EmbedCertificate island_point;
  std::vector<Complex> loop;
  std::vector<CertifiedBall> cover;
  Complex reference{0.5, 0.0};
  GammaEnclosure gamma;
  TemplateRegion templates;
  std::vector<GridRecord> grid;
};

struct ProveResult {
  std::optional<IslandProof> proof;
  std::vector<std::string> diagnostics;
  std::vector<EdgeGap> gaps;
  std::vector<Parameter> gap_points;
  std::size_t balls = 0;
  std::size_t harvests = 0;
};

using ProgressFn = std::function<void(const std::string&)>;

ProveResult prove_island(const IslandConfig& config, const ProgressFn& progress = {});

struct ReplayReport {
  bool ok = true;
  std::vector<std::string> failures;
};

/// Re-runs every check on a stored proof without searching: the island
/// embed certificate, each witness and its radius, each template box,
/// coverage, both winding numbers, grid mutual exclusion and sampled ball
/// soundness.
ReplayReport replay_proof(const IslandProof& proof, double tau = kDefaultTau);

/// verify_crossing at `count` points on the circle of radius
/// fraction * epsilon about the ball centre.
bool ball_sample_check(const CertifiedBall& ball, int count = 8, double fraction = 0.9,
                       double tau = kDefaultTau);

}  // namespace wiggle
