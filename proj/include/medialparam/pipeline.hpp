#pragma once

// End-to-end driver: boundary sampling through interpolative remeshing.
// Each stage throws a PipelineError tagged with its stage name; the CLI
// surfaces that tag in its exit diagnostics.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "medialparam/curve.hpp"
#include "medialparam/delaunay.hpp"
#include "medialparam/dipole.hpp"
#include "medialparam/medial.hpp"
#include "medialparam/mesh_io.hpp"
#include "medialparam/remesh.hpp"
#include "medialparam/voronoi.hpp"

namespace medial {

struct RunConfig {
  std::string input;
  int samples = 100;
  SamplingStrategy sampling = SamplingStrategy::EqualCount;
  double alpha = 0.1;
  double epsilon_scale = 0.01;
  double frame_scale = 2.0;
  std::uint64_t seed = 42;
  std::vector<double> contours;
  std::vector<Point2> queries;
  std::string svg_path, mesh_path, field_path;
  int field_resolution = 64;
  bool verify = false;
};

struct PipelineResult {
  DomainSpec domain;
  std::vector<Sample> samples;
  std::vector<Dipole> dipoles;
  SiteSet sites;
  Triangulation tri;
  VoronoiTess voronoi;   // pre-collapse, as verify_voronoi expects
  LabeledTess labeled;   // after collapse and vertex typing
  RemeshedMesh mesh;
  double epsilon = 0.0;  // collapse threshold actually used
};

inline PipelineResult run_pipeline(DomainSpec domain, const RunConfig& cfg) {
  PipelineResult r;
  r.domain = std::move(domain);
  r.samples = sample_domain(r.domain, cfg.sampling, cfg.samples);
  r.dipoles = make_dipoles(r.samples, r.domain, cfg.alpha);
  r.sites = collect_sites(r.dipoles);
  r.tri = delaunay(r.sites, cfg.seed);
  r.voronoi = voronoi_dual(r.tri, cfg.frame_scale);
  LabeledTess raw = classify_edges(r.voronoi, r.sites, r.samples);
  r.epsilon = limb_median_epsilon(raw, cfg.epsilon_scale);
  r.labeled = type_spine_vertices(collapse_short_edges(raw, r.epsilon));
  r.mesh = interpolative_remesh(r.labeled);
  return r;
}

// Header comment for mesh files: the knobs that shaped the output.
inline std::string config_echo(const RunConfig& cfg, double epsilon) {
  return "alpha=" + fmt17(cfg.alpha) + " epsilon=" + fmt17(epsilon) +
         " samples=" + std::to_string(cfg.samples) + " sampling=" +
         (cfg.sampling == SamplingStrategy::EqualCount ? "equal" : "length") +
         " seed=" + std::to_string(cfg.seed);
}

}  // namespace medial
