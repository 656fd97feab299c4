#include "wiggle/json_io.hpp"

#include <cmath>

namespace wiggle {

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) {
    throw InvalidParameter(std::string("missing JSON field '") + key + "'");
  }
  return j.at(key);
}

double number(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw InvalidParameter(std::string("field '") + key + "' is not a number");
  return v.get<double>();
}

std::int64_t integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) {
    throw InvalidParameter(std::string("field '") + key + "' is not an integer");
  }
  return v.get<std::int64_t>();
}

std::string text(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_string()) throw InvalidParameter(std::string("field '") + key + "' is not a string");
  return v.get<std::string>();
}

Json rays_json(const Ray& a, const Ray& b) { return Json::array({to_json(a), to_json(b)}); }

std::pair<Ray, Ray> rays_from(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_array() || v.size() != 2) {
    throw InvalidParameter(std::string("field '") + key + "' must hold two rays");
  }
  return {ray_from_json(v[0]), ray_from_json(v[1])};
}

}  // namespace

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Json to_json(const Ray& r) {
  Json bends = Json::array();
  for (Complex b : r.bends) bends.push_back(to_json(b));
  return {{"anchor", to_json(r.anchor)}, {"bends", bends}, {"dir", to_json(r.direction)}};
}

Json to_json(const EmbedCertificate& c) {
  return {{"z", to_json(c.z.value())},
          {"margin", c.margin},
          {"maxDepth", c.max_depth},
          {"pairsExamined", c.pairs_examined},
          {"terminated", c.terminated}};
}

Json to_json(const CrossingCertificate& c) {
  return {{"u", c.u.to_string()},
          {"v", c.v.to_string()},
          {"n", c.n},
          {"z", to_json(c.z.value())},
          {"clearance", c.clearance},
          {"epsilon", c.epsilon},
          {"raysR", rays_json(c.r_minus, c.r_plus)},
          {"raysS", rays_json(c.s_minus, c.s_plus)}};
}

Json to_json(const CertifiedBall& b) {
  return {{"center", to_json(b.center.value())},
          {"epsilon", b.epsilon},
          {"box", b.box},
          {"witness", to_json(b.witness)}};
}

Json to_json(const TemplateBox& b) {
  return {{"alpha", to_json(b.alpha)},
          {"beta", to_json(b.beta)},
          {"hAlpha", b.h_alpha},
          {"hBeta", b.h_beta},
          {"clearance", b.clearance},
          {"raysR", rays_json(b.rays.r_minus, b.rays.r_plus)},
          {"raysS", rays_json(b.rays.s_minus, b.rays.s_plus)}};
}

Json to_json(const IslandProof& p) {
  Json loop = Json::array();
  for (Complex v : p.loop) loop.push_back(to_json(v));
  Json cover = Json::array();
  for (const CertifiedBall& b : p.cover) cover.push_back(to_json(b));
  Json boxes = Json::array();
  for (const TemplateBox& b : p.templates.boxes) boxes.push_back(to_json(b));
  Json grid = Json::array();
  for (const GridRecord& g : p.grid) {
    grid.push_back({{"z", to_json(g.z.value())}, {"ball", g.ball}, {"embedded", g.embedded}});
  }
  return {{"format", kProofFormat},
          {"region", {{"center", to_json(p.region.center)}, {"halfWidth", p.region.half_width}}},
          {"islandPoint", to_json(p.island_point)},
          {"loop", loop},
          {"referencePoint", to_json(p.reference)},
          {"gamma",
           {{"depth", p.gamma.depth},
            {"center", to_json(p.gamma.valid_over.center)},
            {"radius", p.gamma.valid_over.radius}}},
          {"templates", boxes},
          {"cover", cover},
          {"grid", grid}};
}

Complex complex_from_json(const Json& j) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw InvalidParameter("complex number must be [re, im]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

Ray ray_from_json(const Json& j) {
  std::vector<Complex> bends;
  const Json& b = field(j, "bends");
  if (!b.is_array()) throw InvalidParameter("ray bends must be an array");
  for (const Json& x : b) bends.push_back(complex_from_json(x));
  return Ray::make(complex_from_json(field(j, "anchor")), std::move(bends),
                   complex_from_json(field(j, "dir")));
}

EmbedCertificate embed_certificate_from_json(const Json& j) {
  EmbedCertificate c;
  c.z = Parameter(complex_from_json(field(j, "z")));
  c.margin = number(j, "margin");
  c.max_depth = static_cast<int>(integer(j, "maxDepth"));
  c.pairs_examined = integer(j, "pairsExamined");
  const Json& t = field(j, "terminated");
  if (!t.is_boolean()) throw InvalidParameter("field 'terminated' is not a boolean");
  c.terminated = t.get<bool>();
  return c;
}

CrossingCertificate crossing_certificate_from_json(const Json& j) {
  CrossingCertificate c;
  c.u = Word(text(j, "u"));
  c.v = Word(text(j, "v"));
  c.n = static_cast<int>(integer(j, "n"));
  c.z = Parameter(complex_from_json(field(j, "z")));
  c.clearance = number(j, "clearance");
  c.epsilon = number(j, "epsilon");
  std::tie(c.r_minus, c.r_plus) = rays_from(j, "raysR");
  std::tie(c.s_minus, c.s_plus) = rays_from(j, "raysS");
  return c;
}

CertifiedBall ball_from_json(const Json& j) {
  CertifiedBall b;
  b.center = Parameter(complex_from_json(field(j, "center")));
  b.epsilon = number(j, "epsilon");
  b.box = static_cast<int>(integer(j, "box"));
  b.witness = crossing_certificate_from_json(field(j, "witness"));
  return b;
}

TemplateBox template_box_from_json(const Json& j) {
  TemplateBox b;
  b.alpha = complex_from_json(field(j, "alpha"));
  b.beta = complex_from_json(field(j, "beta"));
  b.h_alpha = number(j, "hAlpha");
  b.h_beta = number(j, "hBeta");
  b.clearance = number(j, "clearance");
  std::tie(b.rays.r_minus, b.rays.r_plus) = rays_from(j, "raysR");
  std::tie(b.rays.s_minus, b.rays.s_plus) = rays_from(j, "raysS");
  b.rays.clearance = b.clearance;
  return b;
}

IslandProof proof_from_json(const Json& j) {
  if (integer(j, "format") != kProofFormat) throw InvalidParameter("unsupported proof format");
  IslandProof p;
  const Json& region = field(j, "region");
  p.region.center = complex_from_json(field(region, "center"));
  p.region.half_width = number(region, "halfWidth");
  p.island_point = embed_certificate_from_json(field(j, "islandPoint"));
  for (const Json& v : field(j, "loop")) p.loop.push_back(complex_from_json(v));
  p.reference = complex_from_json(field(j, "referencePoint"));
  const Json& gamma = field(j, "gamma");
  p.gamma = build_gamma_enclosure(
      Disk{complex_from_json(field(gamma, "center")), number(gamma, "radius")},
      static_cast<int>(integer(gamma, "depth")));
  for (const Json& b : field(j, "templates")) p.templates.boxes.push_back(template_box_from_json(b));
  for (const Json& b : field(j, "cover")) p.cover.push_back(ball_from_json(b));
  for (const Json& g : field(j, "grid")) {
    GridRecord r;
    r.z = Parameter(complex_from_json(field(g, "z")));
    r.ball = field(g, "ball").get<bool>();
    r.embedded = field(g, "embedded").get<bool>();
    p.grid.push_back(r);
  }
  return p;
}

}  // namespace wiggle
