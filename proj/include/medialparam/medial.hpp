#pragma once

// Medial structure on top of the Voronoi tessellation: label cells by dipole
// side, classify edges (Out / Boundary / Limb / Spine), collapse near-zero
// edges, and type the spine vertices.

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "medialparam/curve.hpp"
#include "medialparam/dipole.hpp"
#include "medialparam/voronoi.hpp"

namespace medial {

enum class EdgeLabel : std::uint8_t { Out = 0, Boundary, Limb, Spine };
enum class SpineVertexType : std::uint8_t { Interior, Branch, Polar };

struct BoundaryLoop {
  int curve_id = -1;
  std::vector<int> verts;  // directed cycle, verts[i] -> verts[(i+1)%n]
  std::vector<int> edges;  // edges[i] joins verts[i] and verts[(i+1)%n]
};

struct LabeledTess {
  VoronoiTess tess;
  SiteSet sites;
  std::vector<Sample> samples;
  std::vector<char> cell_in;        // per cell: site lies inside the domain
  std::vector<EdgeLabel> labels;    // per edge
  std::vector<int> eB, eL, eS, eOut;
  std::vector<BoundaryLoop> loops;  // one per input curve
  std::map<int, SpineVertexType> spine_type;  // keyed by vertex id
  int pole_vertex = -1;  // set when the spine degenerates to one vertex
};

inline std::vector<char> label_cells(const VoronoiTess& tess,
                                     const SiteSet& sites) {
  if (tess.cells.size() != sites.size())
    throw TopologyError("medial", "site/cell count mismatch");
  std::vector<char> in(sites.size());
  for (size_t i = 0; i < sites.size(); i++) in[i] = sites.is_inner[i] ? 1 : 0;
  return in;
}

namespace detail {

inline void index_labels(LabeledTess& lt) {
  lt.eB.clear();
  lt.eL.clear();
  lt.eS.clear();
  lt.eOut.clear();
  for (size_t i = 0; i < lt.labels.size(); i++) {
    switch (lt.labels[i]) {
      case EdgeLabel::Boundary: lt.eB.push_back(static_cast<int>(i)); break;
      case EdgeLabel::Limb: lt.eL.push_back(static_cast<int>(i)); break;
      case EdgeLabel::Spine: lt.eS.push_back(static_cast<int>(i)); break;
      case EdgeLabel::Out: lt.eOut.push_back(static_cast<int>(i)); break;
    }
  }
}

inline int in_cell_of_edge(const LabeledTess& lt, int e) {
  const VoronoiEdge& ed = lt.tess.edges[e];
  if (ed.cell_left >= 0 && lt.cell_in[ed.cell_left]) return ed.cell_left;
  if (ed.cell_right >= 0 && lt.cell_in[ed.cell_right]) return ed.cell_right;
  return -1;
}

// Chain the boundary edges into one directed cycle per input curve.  Each
// edge is directed so its In cell lies on the left, which by construction
// matches the source curve's traversal direction (the inner dipole site sits
// left of the curve); the nearest-sample tangents double-check that.
inline void assemble_boundary_loops(LabeledTess& lt) {
  lt.loops.clear();
  std::map<int, std::pair<int, int>> next;  // vert -> (vert, edge)
  for (int e : lt.eB) {
    const VoronoiEdge& ed = lt.tess.edges[e];
    int u = ed.a, w = ed.b;
    if (!(ed.cell_left >= 0 && lt.cell_in[ed.cell_left])) std::swap(u, w);
    if (!next.emplace(u, std::make_pair(w, e)).second)
      throw TopologyError("medial", "non-manifold boundary at vertex " +
                                        std::to_string(u));
  }

  int curve_count = 0;
  for (const auto& s : lt.samples)
    curve_count = std::max(curve_count, s.curve_id + 1);

  std::set<int> seen;
  for (const auto& [start, _] : next) {
    if (seen.count(start)) continue;
    BoundaryLoop loop;
    int v = start;
    while (true) {
      auto it = next.find(v);
      if (it == next.end())
        throw TopologyError("medial", "open boundary chain at vertex " +
                                          std::to_string(v));
      loop.verts.push_back(v);
      loop.edges.push_back(it->second.second);
      seen.insert(v);
      v = it->second.first;
      if (v == start) break;
      if (seen.count(v))
        throw TopologyError("medial", "boundary cycles intersect at vertex " +
                                          std::to_string(v));
    }
    if (loop.verts.size() < 3)
      throw TopologyError("medial", "degenerate boundary cycle");

    double align = 0.0;
    for (size_t i = 0; i < loop.edges.size(); i++) {
      int cell = in_cell_of_edge(lt, loop.edges[i]);
      const Sample& s = lt.samples[lt.sites.sample_idx[cell]];
      if (loop.curve_id < 0) loop.curve_id = s.curve_id;
      if (loop.curve_id != s.curve_id)
        throw TopologyError("medial",
                            "boundary cycle spans curves " +
                                std::to_string(loop.curve_id) + " and " +
                                std::to_string(s.curve_id));
      Point2 p = lt.tess.verts[loop.verts[i]];
      Point2 q = lt.tess.verts[loop.verts[(i + 1) % loop.verts.size()]];
      align += dot(q - p, s.tangent);
    }
    if (!(align > 0.0))
      throw TopologyError("medial",
                          "boundary cycle orientation disagrees with curve " +
                              std::to_string(loop.curve_id));
    lt.loops.push_back(std::move(loop));
  }

  if (static_cast<int>(lt.loops.size()) != curve_count)
    throw TopologyError("medial",
                        "expected " + std::to_string(curve_count) +
                            " boundary cycles, assembled " +
                            std::to_string(lt.loops.size()));
  std::sort(lt.loops.begin(), lt.loops.end(),
            [](const BoundaryLoop& a, const BoundaryLoop& b) {
              return a.curve_id < b.curve_id;
            });
  for (int c = 0; c < curve_count; c++)
    if (lt.loops[c].curve_id != c)
      throw TopologyError("medial", "curve " + std::to_string(c) +
                                        " has no boundary cycle");
}

}  // namespace detail

inline LabeledTess classify_edges(const VoronoiTess& tess,
                                  const SiteSet& sites,
                                  const std::vector<Sample>& samples) {
  LabeledTess lt;
  lt.tess = tess;
  lt.sites = sites;
  lt.samples = samples;
  lt.cell_in = label_cells(tess, sites);
  lt.labels.assign(tess.edges.size(), EdgeLabel::Out);

  for (size_t i = 0; i < tess.edges.size(); i++) {
    const VoronoiEdge& e = tess.edges[i];
    if (e.cell_right < 0) {
      if (lt.cell_in[e.cell_left])
        throw TopologyError("medial",
                            "inner cell " + std::to_string(e.cell_left) +
                                " reaches the frame; clearance too small");
      lt.labels[i] = EdgeLabel::Out;
      continue;
    }
    bool li = lt.cell_in[e.cell_left], ri = lt.cell_in[e.cell_right];
    if (li && ri)
      lt.labels[i] = EdgeLabel::Spine;  // refined to Limb below
    else if (!li && !ri)
      lt.labels[i] = EdgeLabel::Out;
    else
      lt.labels[i] = EdgeLabel::Boundary;
  }

  std::set<int> boundary_verts;
  for (size_t i = 0; i < tess.edges.size(); i++)
    if (lt.labels[i] == EdgeLabel::Boundary) {
      boundary_verts.insert(tess.edges[i].a);
      boundary_verts.insert(tess.edges[i].b);
    }
  for (size_t i = 0; i < tess.edges.size(); i++)
    if (lt.labels[i] == EdgeLabel::Spine &&
        (boundary_verts.count(tess.edges[i].a) ||
         boundary_verts.count(tess.edges[i].b)))
      lt.labels[i] = EdgeLabel::Limb;

  detail::index_labels(lt);
  detail::assemble_boundary_loops(lt);
  return lt;
}

// Default collapse threshold: a fraction of the median limb length, so the
// cleanup scale tracks the sampling resolution.
inline double limb_median_epsilon(const LabeledTess& lt, double scale) {
  if (lt.eL.empty())
    throw TopologyError("medial", "no limb edges; domain is under-sampled");
  std::vector<double> lens;
  lens.reserve(lt.eL.size());
  for (int e : lt.eL)
    lens.push_back(
        dist(lt.tess.verts[lt.tess.edges[e].a], lt.tess.verts[lt.tess.edges[e].b]));
  std::sort(lens.begin(), lens.end());
  return scale * lens[lens.size() / 2];
}

inline LabeledTess collapse_short_edges(const LabeledTess& lt, double epsilon) {
  if (!(epsilon > 0.0))
    throw std::invalid_argument("collapse_short_edges: epsilon must be > 0");

  std::vector<Point2> verts = lt.tess.verts;
  std::vector<std::vector<int>> cells = lt.tess.cells;
  std::map<std::pair<int, int>, EdgeLabel> label_map;
  for (size_t i = 0; i < lt.tess.edges.size(); i++) {
    auto key = std::minmax(lt.tess.edges[i].a, lt.tess.edges[i].b);
    label_map[{key.first, key.second}] = lt.labels[i];
  }
  auto rank = [](EdgeLabel l) {
    switch (l) {
      case EdgeLabel::Boundary: return 3;
      case EdgeLabel::Limb: return 2;
      case EdgeLabel::Spine: return 1;
      case EdgeLabel::Out: return 0;
    }
    return 0;
  };

  while (true) {
    // Shortest non-Out edge under the threshold; ties by vertex pair.
    std::pair<int, int> pick{-1, -1};
    double best = epsilon;
    for (const auto& [key, lab] : label_map) {
      if (lab == EdgeLabel::Out) continue;
      double len = dist(verts[key.first], verts[key.second]);
      if (len < best) {
        best = len;
        pick = key;
      }
    }
    if (pick.first < 0) break;

    int lo = pick.first, hi = pick.second;
    verts[lo] = lerp(verts[lo], verts[hi], 0.5);
    for (auto& loop : cells) {
      for (int& v : loop)
        if (v == hi) v = lo;
      std::vector<int> clean;
      for (int v : loop)
        if (clean.empty() || clean.back() != v) clean.push_back(v);
      while (clean.size() > 1 && clean.front() == clean.back())
        clean.pop_back();
      if (clean.size() < 3)
        throw TopologyError("medial",
                            "collapse reduces a cell below 3 vertices");
      std::set<int> uniq(clean.begin(), clean.end());
      if (uniq.size() != clean.size())
        throw TopologyError("medial", "collapse pinches a cell");
      loop = std::move(clean);
    }
    std::map<std::pair<int, int>, EdgeLabel> renamed;
    for (const auto& [key, lab] : label_map) {
      int u = key.first == hi ? lo : key.first;
      int w = key.second == hi ? lo : key.second;
      if (u == w) continue;
      auto k = std::minmax(u, w);
      auto it = renamed.find({k.first, k.second});
      if (it == renamed.end() || rank(lab) > rank(it->second))
        renamed[{k.first, k.second}] = lab;
    }
    label_map = std::move(renamed);
  }

  // Compact vertices and rebuild the edge list from the cell loops.
  std::vector<int> remap(verts.size(), -1);
  LabeledTess out;
  out.tess.frame = lt.tess.frame;
  for (const auto& loop : cells)
    for (int v : loop)
      if (remap[v] < 0) remap[v] = 0;
  for (size_t v = 0, id = 0; v < verts.size(); v++)
    if (remap[v] == 0) {
      remap[v] = static_cast<int>(id++);
      out.tess.verts.push_back(verts[v]);
    }

  out.tess.cells.resize(cells.size());
  std::map<std::pair<int, int>, int> edge_idx;
  for (size_t c = 0; c < cells.size(); c++) {
    std::vector<int> loop;
    loop.reserve(cells[c].size());
    for (int v : cells[c]) loop.push_back(remap[v]);
    for (size_t i = 0; i < loop.size(); i++) {
      int u = loop[i], w = loop[(i + 1) % loop.size()];
      auto key = std::minmax(u, w);
      auto it = edge_idx.find({key.first, key.second});
      if (it == edge_idx.end()) {
        VoronoiEdge e;
        e.a = u;
        e.b = w;
        e.cell_left = static_cast<int>(c);
        edge_idx.emplace(std::make_pair(key.first, key.second),
                         static_cast<int>(out.tess.edges.size()));
        out.tess.edges.push_back(e);
      } else {
        VoronoiEdge& e = out.tess.edges[it->second];
        if (!(e.a == w && e.b == u) || e.cell_right != -1)
          throw TopologyError("medial",
                              "collapse broke cell adjacency at cell " +
                                  std::to_string(c));
        e.cell_right = static_cast<int>(c);
      }
    }
    out.tess.cells[c] = std::move(loop);
  }

  out.sites = lt.sites;
  out.samples = lt.samples;
  out.cell_in = lt.cell_in;
  out.labels.resize(out.tess.edges.size());
  std::vector<int> old_of_new(verts.size(), -1);
  for (size_t v = 0; v < verts.size(); v++)
    if (remap[v] >= 0) old_of_new[remap[v]] = static_cast<int>(v);
  for (size_t i = 0; i < out.tess.edges.size(); i++) {
    auto key = std::minmax(old_of_new[out.tess.edges[i].a],
                           old_of_new[out.tess.edges[i].b]);
    auto it = label_map.find({key.first, key.second});
    if (it == label_map.end())
      throw TopologyError("medial", "collapse lost an edge label");
    out.labels[i] = it->second;
  }

  detail::index_labels(out);
  detail::assemble_boundary_loops(out);
  return out;
}

inline LabeledTess type_spine_vertices(LabeledTess lt) {
  lt.spine_type.clear();
  lt.pole_vertex = -1;
  if (lt.eS.empty() && lt.eL.empty())
    throw TopologyError("medial", "tessellation has no medial structure");

  std::map<int, int> valency;
  for (int e : lt.eS) {
    valency[lt.tess.edges[e].a]++;
    valency[lt.tess.edges[e].b]++;
  }
  for (const auto& [v, k] : valency)
    lt.spine_type[v] = k == 1 ? SpineVertexType::Polar
                      : k == 2 ? SpineVertexType::Interior
                               : SpineVertexType::Branch;

  // Interior limb endpoints with no spine edge left are degenerate poles,
  // one per disk-like component whose spine collapsed entirely.
  std::set<int> bverts;
  for (int e : lt.eB) {
    bverts.insert(lt.tess.edges[e].a);
    bverts.insert(lt.tess.edges[e].b);
  }
  std::set<int> hubs;
  for (int e : lt.eL) {
    if (!bverts.count(lt.tess.edges[e].a)) hubs.insert(lt.tess.edges[e].a);
    if (!bverts.count(lt.tess.edges[e].b)) hubs.insert(lt.tess.edges[e].b);
  }
  for (int v : hubs)
    if (!valency.count(v)) lt.spine_type[v] = SpineVertexType::Polar;
  if (lt.eS.empty() && hubs.size() == 1) lt.pole_vertex = *hubs.begin();
  return lt;
}

}  // namespace medial
