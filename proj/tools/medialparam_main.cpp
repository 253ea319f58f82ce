#include <exception>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "medialparam/medialparam.hpp"

namespace {

std::vector<medial::Point2> parse_queries(const std::vector<std::string>& raw) {
  std::vector<medial::Point2> out;
  for (const auto& s : raw) {
    std::istringstream ss(s);
    double x = 0.0, y = 0.0;
    char comma = 0;
    if (!(ss >> x >> comma >> y) || comma != ',' ||
        !(ss >> std::ws).eof())
      throw CLI::ValidationError("--query", "expected x,y but got \"" + s +
                                                "\"");
    out.push_back({x, y});
  }
  return out;
}

int do_run(const medial::RunConfig& cfg) {
  using namespace medial;
  DomainSpec domain = parse_domain(cfg.input);
  for (const auto& w : domain.warnings)
    std::cout << "warning: " << w << "\n";

  PipelineResult r = run_pipeline(std::move(domain), cfg);

  MeshStats st = mesh_stats(r.mesh);
  std::cout << "loops=" << r.mesh.loop_range.size()
            << " bverts=" << r.mesh.bverts.size()
            << " sverts=" << r.mesh.sverts.size() << " faces=" << st.faces
            << " quads=" << st.quads << " triangles=" << st.triangles
            << " euler=" << st.euler << "\n";

  if (cfg.verify) {
    VoronoiReport rep = verify_voronoi(r.voronoi, r.sites.pos);
    std::cout << "verify: checked=" << rep.checked
              << " max_equidist_rel=" << fmt17(rep.max_equidist_rel)
              << " max_encroach_rel=" << fmt17(rep.max_encroach_rel) << "\n";
    if (!rep.pass) {
      std::cerr << "medialparam: [verify] Voronoi oracle failed: "
                << rep.detail << "\n";
      return 1;
    }
  }

  std::vector<std::vector<Point2>> contour_polys;
  if (!cfg.contours.empty() || !cfg.queries.empty()) {
    ParamMap pm(r.mesh);
    for (double rv : cfg.contours)
      for (size_t c = 0; c < r.mesh.loop_range.size(); c++) {
        auto polys = pm.iso_contour(rv, static_cast<int>(c));
        contour_polys.insert(contour_polys.end(),
                             std::make_move_iterator(polys.begin()),
                             std::make_move_iterator(polys.end()));
      }
    for (const auto& q : cfg.queries) {
      try {
        ParamPoint pp = pm.to_param(q);
        std::cout << "query " << fmt17(q.x) << "," << fmt17(q.y)
                  << " -> curve=" << pp.curve_id << " theta=" << fmt17(pp.theta)
                  << " r=" << fmt17(pp.r) << "\n";
      } catch (const InversionError&) {
        std::cout << "query " << fmt17(q.x) << "," << fmt17(q.y)
                  << " -> outside\n";
      }
    }
  }

  if (!cfg.mesh_path.empty())
    write_mesh_file(r.mesh, cfg.mesh_path, config_echo(cfg, r.epsilon));
  if (!cfg.svg_path.empty())
    write_svg_file(r.labeled, r.mesh, contour_polys, cfg.svg_path);
  if (!cfg.field_path.empty()) {
    Box2 frame = r.domain.bbox().scaled_about_center(1.2);
    write_field_csv_file(sample_field(r.sites, frame, cfg.field_resolution),
                         cfg.field_path);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"medial parametrization of planar Bezier domains"};
  app.require_subcommand(1);

  medial::RunConfig cfg;
  std::vector<std::string> raw_queries;

  auto* run = app.add_subcommand(
      "run", "sample a domain file, build its medial mesh, write artifacts");
  run->add_option("input", cfg.input, "domain JSON file")
      ->required()
      ->check(CLI::ExistingFile);
  run->add_option("--samples", cfg.samples, "boundary samples (see --sampling)")
      ->capture_default_str();
  std::map<std::string, medial::SamplingStrategy> strategies{
      {"equal", medial::SamplingStrategy::EqualCount},
      {"length", medial::SamplingStrategy::LengthDependent}};
  run->add_option("--sampling", cfg.sampling,
                  "equal: N samples per loop; length: spacing from the "
                  "longest perimeter / N")
      ->transform(CLI::CheckedTransformer(strategies, CLI::ignore_case))
      ->default_str("equal");
  run->add_option("--alpha", cfg.alpha, "dipole offset fraction in (0, 0.25]")
      ->capture_default_str();
  run->add_option("--epsilon-scale", cfg.epsilon_scale,
                  "edge-collapse threshold, fraction of the median limb")
      ->capture_default_str();
  run->add_option("--contours", cfg.contours,
                  "iso-r values rendered into the SVG")
      ->delimiter(',');
  run->add_option("--query", raw_queries,
                  "x,y point mapped to (curve, theta, r); repeatable")
      ->allow_extra_args(false);
  run->add_option("--svg", cfg.svg_path, "write a layered SVG");
  run->add_option("--mesh", cfg.mesh_path, "write the mesh as text");
  run->add_option("--field", cfg.field_path,
                  "write the implicit field grid as CSV");
  run->add_option("--field-resolution", cfg.field_resolution,
                  "field grid resolution per axis")
      ->capture_default_str();
  run->add_option("--seed", cfg.seed, "insertion-shuffle seed")
      ->capture_default_str();
  run->add_flag("--verify", cfg.verify,
                "run the brute-force Voronoi oracle and fail on violations");

  CLI11_PARSE(app, argc, argv);

  try {
    cfg.queries = parse_queries(raw_queries);
    return do_run(cfg);
  } catch (const medial::PipelineError& e) {
    std::cerr << "medialparam: error: " << e.what() << "\n";  // "stage: msg"
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "medialparam: " << e.what() << "\n";
    return 1;
  }
}
