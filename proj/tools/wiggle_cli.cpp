// Command-line front end. Exit codes: 0 success, 1 inconclusive or failed
// result, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "wiggle/embed.hpp"
#include "wiggle/format.hpp"
#include "wiggle/island.hpp"
#include "wiggle/json_io.hpp"
#include "wiggle/render.hpp"
#include "wiggle/squiggle.hpp"

using namespace wiggle;

namespace {

constexpr int kOk = 0;
constexpr int kInconclusive = 1;
constexpr int kUsage = 2;

struct Options {
  std::string z = "0.5+0i";
  int depth = 10;
  double spacing = 0.0;
  double margin = kDefaultTau;
  std::optional<int> budget_depth;
  std::optional<std::int64_t> budget_pairs;
  std::string config;
  std::string out;
  std::string proof;
  bool json = false;
  int width = 256;
  int height = 256;
  double re_min = 0.0, re_max = 1.0, im_min = 0.0, im_max = 0.5;
};

void print_json(const Json& j) { std::cout << j.dump(2) << '\n'; }

Parameter parameter_of(const Options& o) { return Parameter(parse_complex(o.z)); }

int run_curve(const Options& o) {
  const Parameter z = parameter_of(o);
  if (o.out.empty()) {
    write_polyline_csv(std::cout, iterate(z, o.depth));
    return kOk;
  }
  if (o.out.size() >= 4 && o.out.substr(o.out.size() - 4) == ".csv") {
    std::ofstream f(o.out);
    if (!f) throw Error("cannot write '" + o.out + "'");
    write_polyline_csv(f, iterate(z, o.depth));
  } else {
    // Square viewport around the bounding disk.
    const Disk b = bounding_disk(z);
    RenderSpec spec;
    spec.re_min = b.center.real() - b.radius;
    spec.re_max = b.center.real() + b.radius;
    spec.im_min = b.center.imag() - b.radius;
    spec.im_max = b.center.imag() + b.radius;
    spec.width = o.width;
    spec.height = o.width;
    spec.path = o.out;
    render_curve(z, o.depth, spec);
  }
  if (o.json) {
    print_json({{"z", to_json(z.value())},
                {"depth", o.depth},
                {"vertices", (std::size_t{1} << o.depth) + 1},
                {"out", o.out}});
  } else {
    std::cout << "wrote " << o.out << '\n';
  }
  return kOk;
}

int run_dimension(const Options& o) {
  const Parameter z = parameter_of(o);
  const double d = hausdorff_dimension(z);
  if (o.json) {
    print_json({{"z", to_json(z.value())}, {"dimension", d}});
  } else {
    std::cout << format_number(d) << '\n';
  }
  return kOk;
}

int run_scan(const Options& o) {
  RenderSpec spec;
  spec.width = o.width;
  spec.height = o.height;
  spec.re_min = o.re_min;
  spec.re_max = o.re_max;
  spec.im_min = o.im_min;
  spec.im_max = o.im_max;
  spec.path = o.out;
  spec.format = ImageFormat::Ppm;
  const ScanResult scan = render_scan(spec, o.depth);
  const double embedded = scan.fraction(PixelClass::EmbeddedHeuristic);
  const double intersecting = scan.fraction(PixelClass::IntersectingHeuristic);
  const double unknown = scan.fraction(PixelClass::Unknown);
  if (o.json) {
    print_json({{"classification", "heuristic"},
                {"depth", o.depth},
                {"width", spec.width},
                {"height", spec.height},
                {"embedded", embedded},
                {"intersecting", intersecting},
                {"unknown", unknown}});
  } else {
    std::cout << "heuristic scan, depth " << o.depth << '\n'
              << "embedded     " << format_number(embedded) << '\n'
              << "intersecting " << format_number(intersecting) << '\n'
              << "unknown      " << format_number(unknown) << '\n';
  }
  return kOk;
}

int run_certify_in(const Options& o) {
  EmbedBudgets b;
  b.max_depth = o.budget_depth.value_or(b.max_depth);
  b.max_pairs = o.budget_pairs.value_or(b.max_pairs);
  b.margin = o.margin;
  const EmbedOutcome r = certify_in(parameter_of(o), b);
  if (r.certified) {
    print_json(to_json(r.certificate));
    return kOk;
  }
  if (o.json) {
    print_json({{"result", "inconclusive"},
                {"reason", to_string(*r.reason)},
                {"depthReached", r.depth_reached},
                {"pairsExamined", r.certificate.pairs_examined}});
  } else {
    std::cout << "inconclusive: " << to_string(*r.reason) << " at word length "
              << r.depth_reached << " after " << r.certificate.pairs_examined << " pairs\n";
  }
  return kInconclusive;
}

int run_certify_out(const Options& o) {
  HarvestOptions h;
  h.max_word_length = o.budget_depth.value_or(h.max_word_length);
  h.max_pairs = o.budget_pairs.value_or(h.max_pairs);
  h.family.tau = o.margin;
  const auto certs = harvest_crossings(parameter_of(o), h);
  if (certs.empty()) {
    if (o.json) {
      print_json({{"result", "not-found"}});
    } else {
      std::cout << "no stable crossing found\n";
    }
    return kInconclusive;
  }
  print_json(to_json(certs.front()));
  return kOk;
}

int run_island(const Options& o) {
  IslandConfig config;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw InvalidParameter("cannot read config '" + o.config + "'");
    config = parse_island_config(in);
  }
  if (o.spacing > 0.0) config.spacing = o.spacing;
  const ProveResult r = prove_island(config, [](const std::string& s) {
    std::cerr << s << '\n';
  });
  if (!r.proof) {
    if (o.json) {
      Json gaps = Json::array();
      for (const EdgeGap& g : r.gaps) gaps.push_back({{"edge", g.edge}, {"t0", g.t0}, {"t1", g.t1}});
      Json points = Json::array();
      for (const Parameter& p : r.gap_points) points.push_back(to_json(p.value()));
      print_json({{"result", "failure"},
                  {"diagnostics", r.diagnostics},
                  {"uncovered", gaps},
                  {"gapPoints", points}});
    } else {
      std::cout << "failure\n";
      for (const std::string& d : r.diagnostics) std::cout << "  " << d << '\n';
    }
    return kInconclusive;
  }
  const std::string path = o.out.empty() ? "proof.json" : o.out;
  std::ofstream f(path);
  if (!f) throw Error("cannot write '" + path + "'");
  f << to_json(*r.proof).dump() << '\n';
  if (o.json) {
    print_json({{"result", "proof"},
                {"path", path},
                {"balls", r.proof->cover.size()},
                {"templateBoxes", r.proof->templates.boxes.size()}});
  } else {
    std::cout << "proof written to " << path << " (" << r.proof->cover.size() << " balls)\n";
  }
  return kOk;
}

IslandProof load_proof(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidParameter("cannot read proof '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::exception& e) {
    throw InvalidParameter(std::string("proof is not JSON: ") + e.what());
  }
  return proof_from_json(j);
}

int run_replay(const Options& o) {
  const ReplayReport rep = replay_proof(load_proof(o.proof));
  if (o.json) {
    print_json({{"ok", rep.ok}, {"failures", rep.failures}});
  } else {
    std::cout << (rep.ok ? "proof verified" : "proof rejected") << '\n';
    for (const std::string& f : rep.failures) std::cout << "  " << f << '\n';
  }
  return rep.ok ? kOk : kInconclusive;
}

int run_render_island(const Options& o) {
  const IslandProof proof = load_proof(o.proof);
  RenderSpec spec;
  const double h = proof.region.half_width;
  spec.re_min = proof.region.center.real() - h;
  spec.re_max = proof.region.center.real() + h;
  spec.im_min = proof.region.center.imag() - h;
  spec.im_max = proof.region.center.imag() + h;
  spec.width = o.width;
  spec.height = o.width;
  spec.path = o.out.empty() ? "island.svg" : o.out;
  try {
    render_island_map(proof, spec);
  } catch (const InvalidParameter&) {
    throw;
  } catch (const Error& e) {
    std::cerr << e.what() << '\n';
    return kInconclusive;
  }
  std::cout << "wrote " << spec.path << '\n';
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"wiggle: numerics for the squiggle family f(x) = -zx + z, g(x) = (z-1)x + 1"};
  app.require_subcommand(1);
  Options o;

  auto add_z = [&](CLI::App* c) {
    c->add_option("--z", o.z, "parameter, e.g. 0.3409+0.43486i")->required();
  };
  auto add_json = [&](CLI::App* c) { c->add_flag("--json", o.json, "machine-readable output"); };
  auto add_budgets = [&](CLI::App* c) {
    c->add_option("--budget-depth", o.budget_depth, "maximum word length");
    c->add_option("--budget-pairs", o.budget_pairs, "maximum pairs examined");
    c->add_option("--margin", o.margin, "separation margin");
  };

  auto* curve = app.add_subcommand("curve", "iterate polyline as SVG (or CSV)");
  add_z(curve);
  curve->add_option("--depth", o.depth, "refinement depth")->check(CLI::Range(0, 24));
  curve->add_option("--out", o.out, "output path (.svg or .csv); CSV to stdout if absent");
  curve->add_option("--size", o.width, "SVG size in pixels");
  add_json(curve);

  auto* dimension = app.add_subcommand("dimension", "similarity dimension");
  add_z(dimension);
  add_json(dimension);

  auto* scan = app.add_subcommand("scan", "heuristic classification of the parameter disk");
  scan->add_option("--depth", o.depth, "heuristic depth")->check(CLI::Range(0, 24));
  scan->add_option("--width", o.width, "pixels");
  scan->add_option("--height", o.height, "pixels");
  scan->add_option("--re-min", o.re_min);
  scan->add_option("--re-max", o.re_max);
  scan->add_option("--im-min", o.im_min);
  scan->add_option("--im-max", o.im_max);
  scan->add_option("--out", o.out, "PPM output path");
  add_json(scan);

  auto* cin = app.add_subcommand("certify-in", "certify that the curve is embedded");
  add_z(cin);
  add_budgets(cin);
  add_json(cin);

  auto* cout_cmd = app.add_subcommand("certify-out", "search for a stable crossing");
  add_z(cout_cmd);
  add_budgets(cout_cmd);
  add_json(cout_cmd);

  auto* island = app.add_subcommand("island", "prove the island is separated");
  island->add_option("--config", o.config, "key = value config file");
  island->add_option("--spacing", o.spacing, "grid spacing");
  island->add_option("--out", o.out, "proof path (default proof.json)");
  add_json(island);

  auto* render = app.add_subcommand("render-island", "SVG map of a verified proof");
  render->add_option("--proof", o.proof, "proof JSON")->required();
  render->add_option("--out", o.out, "SVG path (default island.svg)");
  render->add_option("--size", o.width, "pixels");

  auto* replay = app.add_subcommand("replay", "re-verify a stored proof");
  replay->add_option("--proof", o.proof, "proof JSON")->required();
  add_json(replay);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << e.what() << "\n\n" << app.help();
    return kUsage;
  }
  try {
    if (curve->parsed()) return run_curve(o);
    if (dimension->parsed()) return run_dimension(o);
    if (scan->parsed()) return run_scan(o);
    if (cin->parsed()) return run_certify_in(o);
    if (cout_cmd->parsed()) return run_certify_out(o);
    if (island->parsed()) return run_island(o);
    if (render->parsed()) return run_render_island(o);
    if (replay->parsed()) return run_replay(o);
  } catch (const InvalidParameter& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kInconclusive;
  }
  return kUsage;
}
