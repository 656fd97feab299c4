#pragma once

// JSON forms of certificates and proofs. Complex numbers are [re, im].

#include "json.hpp"

#include "wiggle/crossing.hpp"
#include "wiggle/embed.hpp"
#include "wiggle/island.hpp"

namespace wiggle {

using Json = nlohmann::json;

inline constexpr int kProofFormat = 1;

Json to_json(Complex z);
Json to_json(const Ray& r);
Json to_json(const EmbedCertificate& c);
Json to_json(const CrossingCertificate& c);
Json to_json(const CertifiedBall& b);
Json to_json(const TemplateBox& b);
Json to_json(const IslandProof& p);

/// Each reader throws InvalidParameter on malformed input.
Complex complex_from_json(const Json& j);
Ray ray_from_json(const Json& j);
EmbedCertificate embed_certificate_from_json(const Json& j);
CrossingCertificate crossing_certificate_from_json(const Json& j);
CertifiedBall ball_from_json(const Json& j);
TemplateBox template_box_from_json(const Json& j);
/// Rebuilds the gamma enclosure from its stored depth and parameter disk.
IslandProof proof_from_json(const Json& j);

}  // namespace wiggle
