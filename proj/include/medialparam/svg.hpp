#pragma once

// Layered SVG rendering of a pipeline run: remeshed faces underneath, then
// the labeled Voronoi skeleton (boundary black, limbs green, spine red as a
// single chained group), dipole sites (inner filled, outer hollow), and any
// requested iso-contours on top.  Output is fully deterministic: fixed
// layer order, ids sorted before walks, numbers printed via fmt17.

#include <algorithm>
#include <fstream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "medialparam/medial.hpp"
#include "medialparam/mesh_io.hpp"
#include "medialparam/remesh.hpp"

namespace medial {

namespace detail {

// Chain undirected vertex-id edges into polylines: open chains first, each
// starting at its smallest odd-degree endpoint, then leftover closed loops.
inline std::vector<std::vector<int>> chain_vertex_edges(
    std::vector<std::pair<int, int>> edges) {
  std::map<int, std::vector<int>> adj;
  for (auto& [a, b] : edges) {
    adj[a].push_back(b);
    adj[b].push_back(a);
  }
  for (auto& [v, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());

  std::map<std::pair<int, int>, int> left;  // undirected multiplicity
  for (auto [a, b] : edges) left[std::minmax(a, b)]++;
  auto take = [&](int a, int b) {
    auto it = left.find(std::minmax(a, b));
    if (it == left.end() || it->second == 0) return false;
    it->second--;
    return true;
  };
  auto walk = [&](int start) {
    std::vector<int> chain{start};
    int cur = start;
    for (;;) {
      bool stepped = false;
      for (int nb : adj[cur])
        if (take(cur, nb)) {
          chain.push_back(nb);
          cur = nb;
          stepped = true;
          break;
        }
      if (!stepped) break;
    }
    return chain;
  };

  std::vector<std::vector<int>> out;
  for (const auto& [v, nbrs] : adj)
    if (nbrs.size() % 2 == 1)
      for (;;) {
        auto chain = walk(v);
        if (chain.size() < 2) break;
        out.push_back(std::move(chain));
      }
  for (const auto& [v, nbrs] : adj)
    for (;;) {
      auto chain = walk(v);
      if (chain.size() < 2) break;
      out.push_back(std::move(chain));
    }
  return out;
}

}  // namespace detail

inline void write_svg(const LabeledTess& lt, const RemeshedMesh& mesh,
                      const std::vector<std::vector<Point2>>& contours,
                      std::ostream& os) {
  // View box over the drawn geometry only (the clip frame corners would
  // dwarf the domain).
  Box2 world;
  for (const auto& p : lt.sites.pos) world.expand(p);
  for (int e : lt.eB) {
    world.expand(lt.tess.verts[lt.tess.edges[e].a]);
    world.expand(lt.tess.verts[lt.tess.edges[e].b]);
  }
  for (int e : lt.eL) {
    world.expand(lt.tess.verts[lt.tess.edges[e].a]);
    world.expand(lt.tess.verts[lt.tess.edges[e].b]);
  }
  for (int e : lt.eS) {
    world.expand(lt.tess.verts[lt.tess.edges[e].a]);
    world.expand(lt.tess.verts[lt.tess.edges[e].b]);
  }
  for (const auto& bv : mesh.bverts) world.expand(bv.pos);
  for (const auto& sv : mesh.sverts) world.expand(sv);
  for (const auto& poly : contours)
    for (const auto& p : poly) world.expand(p);
  if (!world.valid())
    throw ValidationError("svg", "nothing to draw");

  double pad = 0.05 * std::max(world.diag(), 1e-12);
  double x0 = world.lo.x - pad, y1 = world.hi.y + pad;
  double w = world.hi.x - world.lo.x + 2 * pad;
  double h = world.hi.y - world.lo.y + 2 * pad;
  double scale = 1000.0 / w;
  double W = 1000.0, H = h * scale;
  auto px = [&](const Point2& p) {
    return fmt17((p.x - x0) * scale) + "," + fmt17((y1 - p.y) * scale);
  };
  auto vert = [&](int v) { return px(lt.tess.verts[v]); };

  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << fmt17(W)
     << "\" height=\"" << fmt17(H) << "\" viewBox=\"0 0 " << fmt17(W) << " "
     << fmt17(H) << "\">\n";

  os << "<g id=\"faces\" fill=\"#f5efe0\" stroke=\"#b9ae93\" "
        "stroke-width=\"0.8\">\n";
  for (const auto& f : mesh.faces) {
    os << "<polygon points=\"";
    for (int k = 0; k < f.n; k++)
      os << (k ? " " : "") << px(mesh.pos(f.v[k]));
    os << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g id=\"boundary\" fill=\"none\" stroke=\"#000000\" "
        "stroke-width=\"2\">\n";
  for (const auto& loop : lt.loops) {
    os << "<polygon points=\"";
    for (size_t i = 0; i < loop.verts.size(); i++)
      os << (i ? " " : "") << vert(loop.verts[i]);
    os << "\"/>\n";
  }
  os << "</g>\n";

  os << "<g id=\"limbs\" stroke=\"#2ca02c\" stroke-width=\"1\">\n";
  for (int e : lt.eL) {
    const auto& ed = lt.tess.edges[e];
    Point2 a = lt.tess.verts[ed.a], b = lt.tess.verts[ed.b];
    os << "<line x1=\"" << fmt17((a.x - x0) * scale) << "\" y1=\""
       << fmt17((y1 - a.y) * scale) << "\" x2=\"" << fmt17((b.x - x0) * scale)
       << "\" y2=\"" << fmt17((y1 - b.y) * scale) << "\"/>\n";
  }
  os << "</g>\n";

  // The spine is one group of chained red polylines; a degenerate
  // single-vertex spine renders as a red dot.
  os << "<g id=\"spine\" fill=\"none\" stroke=\"#d62728\" "
        "stroke-width=\"2.5\">\n";
  std::vector<std::pair<int, int>> spine;
  for (int e : lt.eS)
    spine.push_back({lt.tess.edges[e].a, lt.tess.edges[e].b});
  for (const auto& chain : detail::chain_vertex_edges(std::move(spine))) {
    os << "<polyline points=\"";
    for (size_t i = 0; i < chain.size(); i++)
      os << (i ? " " : "") << vert(chain[i]);
    os << "\"/>\n";
  }
  std::set<int> on_spine;
  for (int e : lt.eS) {
    on_spine.insert(lt.tess.edges[e].a);
    on_spine.insert(lt.tess.edges[e].b);
  }
  for (const auto& [v, ty] : lt.spine_type) {
    if (ty != SpineVertexType::Polar || on_spine.count(v)) continue;
    Point2 p = lt.tess.verts[v];
    os << "<circle cx=\"" << fmt17((p.x - x0) * scale) << "\" cy=\""
       << fmt17((y1 - p.y) * scale) << "\" r=\"3\" fill=\"#d62728\" "
       << "stroke=\"none\"/>\n";
  }
  os << "</g>\n";

  os << "<g id=\"sites\" stroke=\"#1f77b4\" stroke-width=\"1\">\n";
  for (size_t i = 0; i < lt.sites.pos.size(); i++) {
    const Point2& p = lt.sites.pos[i];
    os << "<circle cx=\"" << fmt17((p.x - x0) * scale) << "\" cy=\""
       << fmt17((y1 - p.y) * scale) << "\" r=\"2.2\" fill=\""
       << (lt.sites.is_inner[i] ? "#1f77b4" : "none") << "\"/>\n";
  }
  os << "</g>\n";

  if (!contours.empty()) {
    os << "<g id=\"contours\" fill=\"none\" stroke=\"#ff7f0e\" "
          "stroke-width=\"1.5\">\n";
    for (const auto& poly : contours) {
      if (poly.size() == 1) {
        os << "<circle cx=\"" << fmt17((poly[0].x - x0) * scale)
           << "\" cy=\"" << fmt17((y1 - poly[0].y) * scale)
           << "\" r=\"2\" fill=\"#ff7f0e\" stroke=\"none\"/>\n";
        continue;
      }
      os << "<polyline points=\"";
      for (size_t i = 0; i < poly.size(); i++)
        os << (i ? " " : "") << px(poly[i]);
      os << "\"/>\n";
    }
    os << "</g>\n";
  }

  os << "</svg>\n";
}

inline void write_svg_file(const LabeledTess& lt, const RemeshedMesh& mesh,
                           const std::vector<std::vector<Point2>>& contours,
                           const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("svg", "cannot write " + path);
  write_svg(lt, mesh, contours, out);
}

}  // namespace medial
