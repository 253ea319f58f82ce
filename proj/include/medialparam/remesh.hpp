#pragma once

// Interpolative remeshing: cut the corners of spine and boundary together.
// Every spine edge gets a midpoint vertex; each of its two incident In cells
// interpolates a partner vertex on its single boundary edge at the matching
// chain-arc fraction.  Walking each boundary loop then stitches the
// (boundary, spine) pairs into quads, degenerating to triangles at polar
// fans.  Branch Voronoi vertices are cut: their corner triangles stay
// uncovered and the surrounding faces remain quads.

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "medialparam/medial.hpp"

namespace medial {

struct BVert {
  Point2 pos;
  int loop = -1;        // curve id
  double theta = 0.0;   // normalized arc along the new boundary polyline
};

struct MeshFace {
  std::array<int, 4> v{-1, -1, -1, -1};  // combined indices, CCW
  int n = 0;                             // 3 or 4
  int loop = -1;
};

struct RemeshedMesh {
  std::vector<BVert> bverts;                   // grouped by loop, in order
  std::vector<Point2> sverts;                  // spine-edge midpoints / pole
  std::vector<std::array<int, 2>> loop_range;  // per loop: [begin,end) bverts
  std::vector<std::pair<int, int>> limbs;      // (bvert, svert), loop order
  std::vector<std::pair<int, int>> spine_edges;  // svert pairs from quads
  std::vector<MeshFace> faces;                 // grouped by loop, in order
  std::vector<std::vector<int>> face_of_interval;  // per loop, per bvert k:
                                                   // face over [θ_k, θ_{k+1})

  int combined(int svert) const {
    return static_cast<int>(bverts.size()) + svert;
  }
  bool is_bvert(int idx) const {
    return idx < static_cast<int>(bverts.size());
  }
  Point2 pos(int idx) const {
    return is_bvert(idx) ? bverts[idx].pos
                         : sverts[idx - static_cast<int>(bverts.size())];
  }
};

// New spine connectivity is derivable from the quad faces alone, so the mesh
// file reader and the builder share this.
inline std::vector<std::pair<int, int>> derive_spine_edges(
    const RemeshedMesh& m) {
  std::vector<std::pair<int, int>> out;
  int nb = static_cast<int>(m.bverts.size());
  for (const auto& f : m.faces) {
    if (f.n != 4) continue;
    int s0 = f.v[3] - nb, s1 = f.v[2] - nb;
    out.push_back(std::minmax(s0, s1));
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

namespace detail {

struct CellShape {
  int v0 = -1, v1 = -1;          // boundary edge, in curve direction
  std::vector<int> chain_verts;  // v2 .. v_{m-1}
  std::vector<int> chain_edges;  // spine edge ids along the chain
  int apex = -1;                 // set when chain is empty (3-vertex cell)
};

// Decompose an In cell's loop as [Boundary, Limb, Spine..., Limb].
inline CellShape analyze_cell(
    const LabeledTess& lt, int cell, int boundary_edge,
    const std::map<std::pair<int, int>, int>& edge_of) {
  const std::vector<int>& loop = lt.tess.cells[cell];
  size_t m = loop.size();
  auto eid = [&](size_t i) {
    auto key = std::minmax(loop[i], loop[(i + 1) % m]);
    return edge_of.at({key.first, key.second});
  };

  size_t b = m;
  for (size_t i = 0; i < m; i++) {
    if (lt.labels[eid(i)] != EdgeLabel::Boundary) continue;
    if (b != m)
      throw FaceStructureError(
          "remesh", "cell " + std::to_string(cell) +
                        " has more than one boundary edge");
    b = i;
  }
  if (b == m || eid(b) != boundary_edge)
    throw FaceStructureError("remesh",
                             "cell " + std::to_string(cell) +
                                 " does not own its loop's boundary edge");

  CellShape cs;
  cs.v0 = loop[b];
  cs.v1 = loop[(b + 1) % m];
  std::vector<int> rest;  // vertices after v1, around to v0
  for (size_t k = 2; k < m; k++) rest.push_back(loop[(b + k) % m]);

  auto label_of = [&](int u, int w) {
    auto key = std::minmax(u, w);
    return lt.labels[edge_of.at({key.first, key.second})];
  };
  if (label_of(cs.v1, rest.front()) != EdgeLabel::Limb ||
      label_of(rest.back(), cs.v0) != EdgeLabel::Limb)
    throw FaceStructureError(
        "remesh", "cell " + std::to_string(cell) +
                      " lacks limb edges flanking its boundary edge");
  for (size_t k = 0; k + 1 < rest.size(); k++) {
    auto key = std::minmax(rest[k], rest[k + 1]);
    int e = edge_of.at({key.first, key.second});
    if (lt.labels[e] != EdgeLabel::Spine)
      throw FaceStructureError(
          "remesh", "cell " + std::to_string(cell) +
                        " has a non-spine edge inside its chain");
    cs.chain_edges.push_back(e);
  }
  cs.chain_verts = std::move(rest);
  if (cs.chain_edges.empty()) cs.apex = cs.chain_verts.front();
  return cs;
}

inline bool segments_cross(Point2 a, Point2 b, Point2 c, Point2 d) {
  auto o = [](Point2 p, Point2 q, Point2 r) {
    double v = cross(q - p, r - p);
    return v > 0 ? 1 : v < 0 ? -1 : 0;
  };
  int o1 = o(a, b, c), o2 = o(a, b, d), o3 = o(c, d, a), o4 = o(c, d, b);
  return o1 * o2 < 0 && o3 * o4 < 0;
}

}  // namespace detail

inline RemeshedMesh interpolative_remesh(const LabeledTess& lt) {
  RemeshedMesh mesh;

  // One midpoint vertex per spine edge; a lone pole for the degenerate disk.
  std::map<int, int> svert_of_edge;
  for (int e : lt.eS) {
    const VoronoiEdge& ed = lt.tess.edges[e];
    svert_of_edge[e] = static_cast<int>(mesh.sverts.size());
    mesh.sverts.push_back(lerp(lt.tess.verts[ed.a], lt.tess.verts[ed.b], 0.5));
  }
  // Degenerate poles (disk-like components) get their vertex interned on
  // first use, in boundary-walk order.
  std::map<int, int> pole_svert_of;
  auto pole_svert = [&](int v) {
    auto [it, fresh] = pole_svert_of.try_emplace(
        v, static_cast<int>(mesh.sverts.size()));
    if (fresh) mesh.sverts.push_back(lt.tess.verts[v]);
    return it->second;
  };

  // Spine valency and the unique spine edge of valency-1 vertices.
  std::map<int, std::vector<int>> spine_at;
  for (int e : lt.eS) {
    spine_at[lt.tess.edges[e].a].push_back(e);
    spine_at[lt.tess.edges[e].b].push_back(e);
  }

  std::map<std::pair<int, int>, int> edge_of;
  for (size_t i = 0; i < lt.tess.edges.size(); i++) {
    auto key = std::minmax(lt.tess.edges[i].a, lt.tess.edges[i].b);
    edge_of[{key.first, key.second}] = static_cast<int>(i);
  }

  struct Pair {
    Point2 bpos;
    int svert = -1;
  };

  mesh.loop_range.resize(lt.loops.size());
  mesh.face_of_interval.resize(lt.loops.size());

  for (size_t li = 0; li < lt.loops.size(); li++) {
    const BoundaryLoop& loop = lt.loops[li];
    std::vector<Pair> seq;

    for (size_t ei = 0; ei < loop.edges.size(); ei++) {
      int cell = detail::in_cell_of_edge(lt, loop.edges[ei]);
      auto cs = detail::analyze_cell(lt, cell, loop.edges[ei], edge_of);
      Point2 p0 = lt.tess.verts[cs.v0];
      Point2 p1 = lt.tess.verts[cs.v1];

      if (cs.apex >= 0) {
        // Chain-empty cell: polar apex spawns a fan keeping the old
        // boundary vertices; a pass-through apex (valency >= 2) spawns
        // nothing and its neighbors bridge it with a quad.
        auto it = spine_at.find(cs.apex);
        size_t val = it == spine_at.end() ? 0 : it->second.size();
        if (val >= 2) continue;
        int term;
        auto ty = lt.spine_type.find(cs.apex);
        if (val == 1)
          term = svert_of_edge.at(it->second.front());
        else if (ty != lt.spine_type.end() &&
                 ty->second == SpineVertexType::Polar)
          term = pole_svert(cs.apex);
        else
          throw FaceStructureError(
              "remesh", "cell " + std::to_string(cell) +
                            " apex has no spine edge and is not a pole");
        seq.push_back({p0, term});
        seq.push_back({p1, term});
        continue;
      }

      // Chain arc lengths and per-edge midpoint fractions.
      size_t q = cs.chain_edges.size();
      std::vector<double> cum(q + 1, 0.0);
      for (size_t k = 0; k < q; k++)
        cum[k + 1] = cum[k] + dist(lt.tess.verts[cs.chain_verts[k]],
                                   lt.tess.verts[cs.chain_verts[k + 1]]);
      double total = cum[q];
      if (!(total > 0.0))
        throw FaceStructureError("remesh", "cell " + std::to_string(cell) +
                                               " has a zero-length chain");
      Vec2 chain_dir = lt.tess.verts[cs.chain_verts.back()] -
                       lt.tess.verts[cs.chain_verts.front()];
      bool flip = dot(chain_dir, p1 - p0) < 0.0;  // ties resolve toward t

      // Boundary order: when flipped (the generic cycle case), the chain
      // runs v1-side to v0-side, so emit pairs from the chain's far end.
      for (size_t j = 0; j < q; j++) {
        size_t k = flip ? q - 1 - j : j;
        double t = (cum[k] + 0.5 * (cum[k + 1] - cum[k])) / total;
        double u = flip ? 1.0 - t : t;
        seq.push_back({lerp(p0, p1, u), svert_of_edge.at(cs.chain_edges[k])});
      }
    }

    if (seq.empty())
      throw FaceStructureError("remesh", "loop " + std::to_string(li) +
                                             " produced no vertices");

    // Drop cyclically repeated pairs (shared tip corners).
    std::vector<Pair> pairs;
    for (const auto& pr : seq) {
      if (!pairs.empty() && pairs.back().bpos == pr.bpos &&
          pairs.back().svert == pr.svert)
        continue;
      pairs.push_back(pr);
    }
    while (pairs.size() > 1 && pairs.front().bpos == pairs.back().bpos &&
           pairs.front().svert == pairs.back().svert)
      pairs.pop_back();

    // Intern boundary vertices (consecutive pairs may share one).
    int base = static_cast<int>(mesh.bverts.size());
    std::vector<int> bv_of_pair(pairs.size());
    for (size_t k = 0; k < pairs.size(); k++) {
      if (static_cast<int>(mesh.bverts.size()) > base &&
          mesh.bverts.back().pos == pairs[k].bpos) {
        bv_of_pair[k] = static_cast<int>(mesh.bverts.size()) - 1;
        continue;
      }
      bv_of_pair[k] = static_cast<int>(mesh.bverts.size());
      mesh.bverts.push_back({pairs[k].bpos, static_cast<int>(li), 0.0});
    }
    // Cyclic wrap: trailing pairs may share the first bvert's position.
    if (static_cast<int>(mesh.bverts.size()) - base >= 2 &&
        mesh.bverts.back().pos == mesh.bverts[base].pos) {
      int last = static_cast<int>(mesh.bverts.size()) - 1;
      for (int& id : bv_of_pair)
        if (id == last) id = base;
      mesh.bverts.pop_back();
    }
    int nb_loop = static_cast<int>(mesh.bverts.size()) - base;
    if (nb_loop < 3)
      throw FaceStructureError("remesh", "loop " + std::to_string(li) +
                                             " has fewer than 3 vertices");
    mesh.loop_range[li] = {base, static_cast<int>(mesh.bverts.size())};

    // Limbs in boundary order.
    for (size_t k = 0; k < pairs.size(); k++)
      mesh.limbs.push_back({bv_of_pair[k], pairs[k].svert});

    // Theta: cumulative arc along the new polyline.
    std::vector<double> arc(nb_loop + 1, 0.0);
    for (int k = 0; k < nb_loop; k++)
      arc[k + 1] = arc[k] + dist(mesh.bverts[base + k].pos,
                                 mesh.bverts[base + (k + 1) % nb_loop].pos);
    for (int k = 0; k < nb_loop; k++) {
      mesh.bverts[base + k].theta = arc[k] / arc[nb_loop];
      if (k > 0 && !(mesh.bverts[base + k].theta >
                     mesh.bverts[base + k - 1].theta))
        throw FaceStructureError("remesh",
                                 "theta not strictly increasing on loop " +
                                     std::to_string(li));
    }

    // Faces between consecutive pairs.
    mesh.face_of_interval[li].assign(nb_loop, -1);
    for (size_t k = 0; k < pairs.size(); k++) {
      size_t k2 = (k + 1) % pairs.size();
      int b0 = bv_of_pair[k], b1 = bv_of_pair[k2];
      int s0 = pairs[k].svert, s1 = pairs[k2].svert;
      if (b0 == b1) continue;  // zero-width step between fans
      MeshFace f;
      f.loop = static_cast<int>(li);
      // Spine slots hold raw svert indices until all loops' boundary
      // vertices exist; the final pass below rebases them.
      if (s0 == s1) {
        f.n = 3;
        f.v = {b0, b1, s0, -1};
      } else {
        f.n = 4;
        f.v = {b0, b1, s1, s0};
      }
      Point2 pb0 = mesh.bverts[b0].pos, pb1 = mesh.bverts[b1].pos;
      Point2 ps0 = mesh.sverts[s0], ps1 = mesh.sverts[s1];
      double area =
          f.n == 3 ? 0.5 * cross(pb1 - pb0, ps0 - pb0)
                   : 0.5 * (cross(pb0, pb1) + cross(pb1, ps1) +
                            cross(ps1, ps0) + cross(ps0, pb0));
      if (!(area > 0.0))
        throw FaceStructureError(
            "remesh", "face at loop " + std::to_string(li) + " interval " +
                          std::to_string(b0 - base) + " is not CCW");
      if (f.n == 4 && detail::segments_cross(pb0, ps0, pb1, ps1))
        throw FaceStructureError(
            "remesh", "consecutive limbs cross at loop " +
                          std::to_string(li) + " boundary index " +
                          std::to_string(b0 - base));
      int interval = b0 - base;
      if (mesh.face_of_interval[li][interval] != -1)
        throw FaceStructureError("remesh",
                                 "duplicate face on interval " +
                                     std::to_string(interval) + " of loop " +
                                     std::to_string(li));
      mesh.face_of_interval[li][interval] = static_cast<int>(mesh.faces.size());
      mesh.faces.push_back(f);
    }
    for (int k = 0; k < nb_loop; k++)
      if (mesh.face_of_interval[li][k] < 0)
        throw FaceStructureError("remesh",
                                 "interval " + std::to_string(k) +
                                     " of loop " + std::to_string(li) +
                                     " has no face");
  }

  int nb = static_cast<int>(mesh.bverts.size());
  for (auto& f : mesh.faces) {
    f.v[2] += nb;
    if (f.n == 4) f.v[3] += nb;
  }

  mesh.spine_edges = derive_spine_edges(mesh);
  return mesh;
}

struct MeshStats {
  int quads = 0, triangles = 0;
  int verts = 0, edges = 0, faces = 0;
  int euler = 0;
  std::map<int, int> svert_valency;   // limbs + new spine edges per svert
  std::vector<double> loop_lengths;   // new boundary polyline lengths
};

inline MeshStats mesh_stats(const RemeshedMesh& m) {
  MeshStats st;
  std::set<std::pair<int, int>> sides;
  for (const auto& f : m.faces) {
    (f.n == 4 ? st.quads : st.triangles)++;
    for (int k = 0; k < f.n; k++) {
      auto key = std::minmax(f.v[k], f.v[(k + 1) % f.n]);
      sides.insert(key);
    }
  }
  st.faces = static_cast<int>(m.faces.size());
  st.edges = static_cast<int>(sides.size());
  st.verts = static_cast<int>(m.bverts.size() + m.sverts.size());
  st.euler = st.verts - st.edges + st.faces;

  for (const auto& [bv, sv] : m.limbs) st.svert_valency[sv]++;
  for (const auto& [s0, s1] : m.spine_edges) {
    st.svert_valency[s0]++;
    st.svert_valency[s1]++;
  }

  st.loop_lengths.resize(m.loop_range.size(), 0.0);
  for (size_t li = 0; li < m.loop_range.size(); li++) {
    auto [b, e] = m.loop_range[li];
    for (int k = b; k < e; k++) {
      int nk = k + 1 == e ? b : k + 1;
      st.loop_lengths[li] += dist(m.bverts[k].pos, m.bverts[nk].pos);
    }
  }
  return st;
}

}  // namespace medial
