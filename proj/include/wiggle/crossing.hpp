#pragma once

// Stable crossings: certificates that two pieces u.gamma and v.gamma of the
// curve must meet, which puts the parameter outside the wiggle set.
//
// Rays r-, r+ leave u(0), u(1) and avoid every disk of v.S_n.B; rays s-, s+
// leave v(0), v(1) and avoid every disk of u.S_n.B. When the four rays are
// pairwise disjoint and their escape directions alternate, the two proper
// lines through u.gamma and v.gamma have odd intersection number, so the
// pieces intersect.

#include <optional>
#include <span>
#include <vector>

#include "wiggle/geometry.hpp"

namespace wiggle {

inline constexpr int kDefaultUnionCap = 12;

struct BallUnion {
  Word word;
  int n = 0;
  std::vector<Disk> disks;  // one per extension word, lexicographic order
};

BallUnion ball_union(const Word& u, int n, const Parameter& z, int cap = kDefaultUnionCap);

struct RayFamily {
  int directions = 64;
  bool one_bend = true;
  /// Hull vertices tried as bend points, per anchor.
  int max_bends = 24;
  /// Inflation of the opposing hull, as a fraction of its largest disk radius.
  double bend_inflation = 0.25;
  double theta_min = 1e-6;
  double tau = kDefaultTau;
};

/// Four rays r-, r+ (first pair) and s-, s+ (second pair) with the minimum
/// of all their clearances.
struct LinkedRays {
  Ray r_minus;
  Ray r_plus;
  Ray s_minus;
  Ray s_plus;
  double clearance = 0.0;
};

/// Searches the ray family for linked rays: r-/r+ from p_minus/p_plus
/// avoiding `avoid_r`, s-/s+ from q_minus/q_plus avoiding `avoid_s`.
std::optional<LinkedRays> search_linked_rays(Complex p_minus, Complex p_plus,
                                             std::span<const Disk> avoid_r, Complex q_minus,
                                             Complex q_plus, std::span<const Disk> avoid_s,
                                             const RayFamily& family = {});

/// Minimum clearance of a fixed ray set, or nullopt when the rays are not
/// simple, not linked, or the escape directions are degenerate.
std::optional<double> linked_rays_clearance(const LinkedRays& rays,
                                            std::span<const Disk> avoid_r,
                                            std::span<const Disk> avoid_s,
                                            double theta_min = 1e-6);

struct CrossingCertificate {
  Word u;
  Word v;
  int n = 0;
  Ray r_minus;  // from u(0)
  Ray r_plus;   // from u(1)
  Ray s_minus;  // from v(0)
  Ray s_plus;   // from v(1)
  double clearance = 0.0;
  Parameter z{Complex{0.5, 0.0}};
  double epsilon = 0.0;
};

/// u must start with f and v with g, and the pair must not extend (ffg, ggf).
bool crossing_words_admissible(const Word& u, const Word& v) noexcept;

std::optional<CrossingCertificate> find_crossing(const Word& u, const Word& v, int n,
                                                 const Parameter& z,
                                                 const RayFamily& family = {});

/// Recomputes anchors, ball unions and the bounding radius at `at`, moves
/// each ray rigidly with its anchor and re-checks every clearance and the
/// linking. At the certificate's own parameter the minimum clearance must be
/// at least cert.clearance - tau; at a displaced parameter it must stay above
/// the bound promised by cert.epsilon.
bool verify_crossing(const CrossingCertificate& cert, const Parameter& at,
                     double tau = kDefaultTau);

/// Minimum clearance of the certificate's rays at `at`; nullopt if the
/// configuration is not linked or not admissible.
std::optional<double> crossing_clearance_at(const CrossingCertificate& cert,
                                            const Parameter& at);

/// (alpha, beta) with v^-1 o u : x -> alpha x + beta.
struct AffinePair {
  Complex alpha;
  Complex beta;
};

AffinePair affine_ratio(const Word& u, const Word& v, const Parameter& z);

/// Radius of a ball about z on which every clearance of the certificate
/// stays positive: half the minimum over constraints of clearance / rate,
/// where each rate bounds the relative motion of the two objects in the
/// constraint over `region`. Capped so the ball stays inside `region`.
/// Returns 0 when the clearance does not exceed tau.
double stability_radius(const CrossingCertificate& cert, const Parameter& z,
                        const Disk& region, double tau = kDefaultTau);

/// Convenience: stability radius over the disk about z of radius
/// `max_radius`.
double stability_radius(const CrossingCertificate& cert, double max_radius = 1e-3,
                        double tau = kDefaultTau);

}  // namespace wiggle
