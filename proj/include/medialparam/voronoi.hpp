#pragma once

// Voronoi tessellation as the dual of the Delaunay triangulation, clipped to
// a rectangular frame around the sites.
//
// Consistency scheme: every coordinate that two cells can share is computed
// exactly once or through a canonicalized formula (circumcenters per
// triangle; clip intersections with lexicographically ordered segment
// endpoints), so shared vertices match bit-for-bit and dedupe exactly.
// Unbounded cells are closed far outside the frame (rays to dual hull-edge
// directions plus a far cap) and then clipped; the synthetic far points can
// never survive clipping.

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "medialparam/delaunay.hpp"
#include "medialparam/geom.hpp"

namespace medial {

struct VoronoiEdge {
  int a = -1, b = -1;                    // vertex ids
  int cell_left = -1, cell_right = -1;   // site ids; -1 = outside the frame
};

struct VoronoiTess {
  std::vector<Point2> verts;
  std::vector<VoronoiEdge> edges;
  std::vector<std::vector<int>> cells;  // per site, CCW loop of vertex ids
  Box2 frame;
};

namespace detail {

// 2x2 determinant with an fma correction term.  Near-degenerate triangles
// (three almost collinear sites) cancel the naive product difference to
// zero even though the exact value is nonzero; the corrected form keeps the
// leading bits so the circumcenter comes out finite (and far away).
inline double det2(double ax, double ay, double bx, double by) {
  double w = ax * by;
  double e = std::fma(ax, by, -w);
  double v = ay * bx;
  double f = std::fma(ay, bx, -v);
  return (w - v) + (e - f);
}

inline Point2 circumcenter(const Point2& a, const Point2& b, const Point2& c) {
  double bx = b.x - a.x, by = b.y - a.y;
  double cx = c.x - a.x, cy = c.y - a.y;
  double d = 2.0 * det2(bx, by, cx, cy);
  double b2 = bx * bx + by * by;
  double c2 = cx * cx + cy * cy;
  double ux = det2(cy, c2, by, b2) / d;
  double uy = det2(bx, b2, cx, c2) / d;
  return {a.x + ux, a.y + uy};
}

// Intersection of segment (a,b) with the line axis==bound, canonicalized so
// both cells sharing the segment compute identical bits.  The interpolation
// is based at the endpoint nearer the line: basing it at the far end of a
// frame-exit segment would put t within one ulp of 1, erasing the near
// endpoint entirely.
inline Point2 clip_point(Point2 a, Point2 b, int axis, double bound) {
  double da = std::fabs((axis == 0 ? a.x : a.y) - bound);
  double db = std::fabs((axis == 0 ? b.x : b.y) - bound);
  if (db < da || (db == da && (b.x < a.x || (b.x == a.x && b.y < a.y))))
    std::swap(a, b);
  if (axis == 0) {
    double t = (bound - a.x) / (b.x - a.x);
    return {bound, a.y + t * (b.y - a.y)};
  }
  double t = (bound - a.y) / (b.y - a.y);
  return {a.x + t * (b.x - a.x), bound};
}

// Sutherland-Hodgman against one half plane: keep side(p) >= 0.
template <class Inside>
std::vector<Point2> clip_half(const std::vector<Point2>& poly, Inside inside,
                              int axis, double bound) {
  std::vector<Point2> out;
  size_t n = poly.size();
  for (size_t i = 0; i < n; i++) {
    const Point2& prev = poly[(i + n - 1) % n];
    const Point2& cur = poly[i];
    bool pin = inside(prev), cin = inside(cur);
    if (cin) {
      if (!pin) out.push_back(clip_point(prev, cur, axis, bound));
      out.push_back(cur);
    } else if (pin) {
      out.push_back(clip_point(prev, cur, axis, bound));
    }
  }
  return out;
}

inline std::vector<Point2> clip_to_frame(std::vector<Point2> poly,
                                         const Box2& frame) {
  poly = clip_half(poly, [&](const Point2& p) { return p.x >= frame.lo.x; },
                   0, frame.lo.x);
  if (!poly.empty())
    poly = clip_half(poly, [&](const Point2& p) { return p.y >= frame.lo.y; },
                     1, frame.lo.y);
  if (!poly.empty())
    poly = clip_half(poly, [&](const Point2& p) { return p.x <= frame.hi.x; },
                     0, frame.hi.x);
  if (!poly.empty())
    poly = clip_half(poly, [&](const Point2& p) { return p.y <= frame.hi.y; },
                     1, frame.hi.y);
  // Remove exact consecutive duplicates (clip through a vertex).
  std::vector<Point2> out;
  for (const auto& p : poly)
    if (out.empty() || !(p == out.back())) out.push_back(p);
  while (out.size() > 1 && out.front() == out.back()) out.pop_back();
  return out;
}

inline double polygon_area(const std::vector<Point2>& poly) {
  double s = 0.0;
  for (size_t i = 0; i < poly.size(); i++) {
    const Point2& p = poly[i];
    const Point2& q = poly[(i + 1) % poly.size()];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

// Ordered walk of real triangles around each site.  For hull sites the walk
// is an open fan from the clockwise-most to the counterclockwise-most
// triangle, and the bracketing hull neighbors are reported.
struct SiteFan {
  std::vector<int> tris;  // CCW order
  bool on_hull = false;
  int cw_neighbor = -1;   // a1: hull edge (site -> a1) bounds the fan start
  int ccw_neighbor = -1;  // bm: hull edge (bm -> site) bounds the fan end
};

inline std::vector<SiteFan> site_fans(const Triangulation& T) {
  std::unordered_map<std::uint64_t, int> owner;
  auto key = [](int u, int w) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u)) << 32) |
           static_cast<std::uint32_t>(w);
  };
  for (size_t t = 0; t < T.tris.size(); t++)
    for (int e = 0; e < 3; e++)
      owner[key(T.tris[t][e], T.tris[t][(e + 1) % 3])] = static_cast<int>(t);

  std::vector<int> seed_tri(T.sites.size(), -1);
  for (size_t t = 0; t < T.tris.size(); t++)
    for (int e = 0; e < 3; e++)
      if (seed_tri[T.tris[t][e]] < 0) seed_tri[T.tris[t][e]] =
          static_cast<int>(t);

  auto corner = [&](int t, int v) {
    for (int e = 0; e < 3; e++)
      if (T.tris[t][e] == v) return e;
    return -1;
  };

  std::vector<SiteFan> fans(T.sites.size());
  for (size_t v = 0; v < T.sites.size(); v++) {
    int t0 = seed_tri[v];
    if (t0 < 0) continue;  // isolated site cannot happen post-delaunay
    // Walk clockwise to find the start (or all the way around).
    int t = t0;
    int guard = 0;
    while (true) {
      int e = corner(t, static_cast<int>(v));
      int a = T.tris[t][(e + 1) % 3];
      auto it = owner.find(key(a, static_cast<int>(v)));
      if (it == owner.end()) {
        fans[v].on_hull = true;
        fans[v].cw_neighbor = a;
        break;
      }
      t = it->second;
      if (t == t0) break;  // interior vertex: full cycle
      if (++guard > static_cast<int>(T.tris.size()) + 2)
        throw TopologyError("voronoi", "broken rotation around site " +
                                           std::to_string(v));
    }
    // Walk counterclockwise collecting the fan.
    int start = t;
    t = start;
    guard = 0;
    while (true) {
      fans[v].tris.push_back(t);
      int e = corner(t, static_cast<int>(v));
      int b = T.tris[t][(e + 2) % 3];
      auto it = owner.find(key(static_cast<int>(v), b));
      if (it == owner.end()) {
        fans[v].ccw_neighbor = b;
        break;
      }
      t = it->second;
      if (t == start) break;  // interior: cycle closed
      if (++guard > static_cast<int>(T.tris.size()) + 2)
        throw TopologyError("voronoi", "broken rotation around site " +
                                           std::to_string(v));
    }
    if (fans[v].on_hull && fans[v].ccw_neighbor < 0)
      throw TopologyError("voronoi", "hull walk failed at site " +
                                         std::to_string(v));
  }
  return fans;
}

}  // namespace detail

inline VoronoiTess voronoi_dual(const Triangulation& T, double frame_scale) {
  if (!(frame_scale >= 1.5))
    throw std::invalid_argument("voronoi_dual: frame_scale must be >= 1.5");

  VoronoiTess out;
  Box2 sites_bb;
  for (const auto& p : T.sites) sites_bb.expand(p);
  out.frame = sites_bb.scaled_about_center(frame_scale);
  const Box2& frame = out.frame;

  // Circumcenters, computed once so every cell shares identical bits.
  std::vector<Point2> cc(T.tris.size());
  double cc_reach = 0.0;
  Point2 center = frame.center();
  for (size_t t = 0; t < T.tris.size(); t++) {
    cc[t] = detail::circumcenter(T.sites[T.tris[t][0]], T.sites[T.tris[t][1]],
                                 T.sites[T.tris[t][2]]);
    if (!std::isfinite(cc[t].x) || !std::isfinite(cc[t].y))
      throw TopologyError("voronoi", "non-finite circumcenter of triangle " +
                                         std::to_string(t));
    cc_reach = std::max(cc_reach, dist(cc[t], center));
  }
  double L = 8.0 * (cc_reach + frame.diag() + 1.0);

  auto fans = detail::site_fans(T);

  std::map<std::pair<double, double>, int> vert_id;
  auto intern = [&](const Point2& p) {
    auto [it, fresh] = vert_id.try_emplace({p.x, p.y},
                                           static_cast<int>(out.verts.size()));
    if (fresh) out.verts.push_back(p);
    return it->second;
  };

  std::map<std::pair<int, int>, int> edge_idx;

  out.cells.resize(T.sites.size());
  double cell_area_sum = 0.0;

  for (size_t v = 0; v < T.sites.size(); v++) {
    const detail::SiteFan& fan = fans[v];
    std::vector<Point2> poly;
    poly.reserve(fan.tris.size() + 8);
    for (int t : fan.tris) poly.push_back(cc[t]);
    if (fan.on_hull) {
      // Outward ray directions dual to the bounding hull edges.
      Vec2 dA = perp_right(T.sites[fan.cw_neighbor] - T.sites[v]);
      Vec2 dB = perp_right(T.sites[v] - T.sites[fan.ccw_neighbor]);
      dA = normalized(dA);
      dB = normalized(dB);
      Point2 b_far = cc[fan.tris.back()] + dB * L;
      Point2 a_far = cc[fan.tris.front()] + dA * L;
      poly.push_back(b_far);
      // Far cap tracing the exterior cone from dB around to dA.  The cone
      // spans the hull turn angle at the site, always in [0, pi), so the
      // principal value is the right branch; straight hull chains give 0.
      double angB = std::atan2(dB.y, dB.x);
      double sweep = std::atan2(cross(dB, dA), dot(dB, dA));
      if (sweep < 0.0) {
        if (sweep < -1e-9)
          throw TopologyError("voronoi", "reflex exterior cone at hull site " +
                                             std::to_string(v));
        sweep = 0.0;
      }
      int steps = static_cast<int>(sweep / (std::numbers::pi / 3.0)) + 1;
      for (int k = 1; k < steps; k++) {
        double ang = angB + sweep * k / steps;
        poly.push_back(center + Vec2{std::cos(ang), std::sin(ang)} * L);
      }
      poly.push_back(a_far);
    }
    poly = detail::clip_to_frame(std::move(poly), frame);
    if (poly.size() < 3)
      throw TopologyError("voronoi", "cell of site " + std::to_string(v) +
                                         " degenerated under clipping");

    std::vector<int> loop;
    loop.reserve(poly.size());
    for (const auto& p : poly) {
      int id = intern(p);
      if (loop.empty() || loop.back() != id) loop.push_back(id);
    }
    while (loop.size() > 1 && loop.front() == loop.back()) loop.pop_back();
    if (loop.size() < 3)
      throw TopologyError("voronoi", "cell of site " + std::to_string(v) +
                                         " has fewer than 3 vertices");
    double area = detail::polygon_area(poly);
    if (!(area > 0.0))
      throw TopologyError("voronoi", "cell of site " + std::to_string(v) +
                                         " is not counterclockwise");
    cell_area_sum += area;

    for (size_t i = 0; i < loop.size(); i++) {
      int u = loop[i], w = loop[(i + 1) % loop.size()];
      auto key = std::minmax(u, w);
      auto it = edge_idx.find({key.first, key.second});
      if (it == edge_idx.end()) {
        VoronoiEdge e;
        e.a = u;
        e.b = w;
        e.cell_left = static_cast<int>(v);
        edge_idx.emplace(std::make_pair(key.first, key.second),
                         static_cast<int>(out.edges.size()));
        out.edges.push_back(e);
      } else {
        VoronoiEdge& e = out.edges[it->second];
        if (!(e.a == w && e.b == u) || e.cell_right != -1)
          throw TopologyError(
              "voronoi", "inconsistent edge orientation between cells " +
                             std::to_string(e.cell_left) + " and " +
                             std::to_string(v));
        e.cell_right = static_cast<int>(v);
      }
    }
    out.cells[v] = std::move(loop);
  }

  double frame_area = frame.area();
  if (std::fabs(cell_area_sum - frame_area) > 1e-6 * frame_area)
    throw TopologyError("voronoi",
                        "cells do not partition the frame: sum " +
                            std::to_string(cell_area_sum) + " vs " +
                            std::to_string(frame_area));
  return out;
}

// Independent sanity check of a tessellation against its generating sites:
// every Voronoi vertex strictly inside the frame must be equidistant to the
// sites whose cells meet there, with no other site closer.
struct VoronoiReport {
  bool pass = true;
  int checked = 0;
  double max_equidist_rel = 0.0;
  double max_encroach_rel = 0.0;
  std::string detail;
};

inline VoronoiReport verify_voronoi(const VoronoiTess& tess,
                                    const std::vector<Point2>& sites,
                                    double tol = 1e-9) {
  VoronoiReport rep;
  std::vector<std::vector<int>> vert_cells(tess.verts.size());
  for (size_t c = 0; c < tess.cells.size(); c++)
    for (int vid : tess.cells[c]) vert_cells[vid].push_back(static_cast<int>(c));

  for (size_t vid = 0; vid < tess.verts.size(); vid++) {
    const Point2& p = tess.verts[vid];
    if (!tess.frame.contains_strict(p)) continue;
    const auto& defs = vert_cells[vid];
    if (defs.size() < 3) continue;  // collapsed collinear corner, no claim
    rep.checked++;
    double dmin = std::numeric_limits<double>::infinity(), dmax = 0.0;
    for (int c : defs) {
      double d = dist(p, sites[c]);
      dmin = std::min(dmin, d);
      dmax = std::max(dmax, d);
    }
    double spread = (dmax - dmin) / std::max(dmax, 1e-300);
    rep.max_equidist_rel = std::max(rep.max_equidist_rel, spread);
    if (spread > tol && rep.pass) {
      rep.pass = false;
      rep.detail = "vertex " + std::to_string(vid) +
                   " is not equidistant to its defining sites";
    }
    double dall = std::numeric_limits<double>::infinity();
    for (const auto& s : sites) dall = std::min(dall, dist(p, s));
    double encroach = (dmin - dall) / std::max(dmin, 1e-300);
    rep.max_encroach_rel = std::max(rep.max_encroach_rel, encroach);
    if (encroach > tol && rep.pass) {
      rep.pass = false;
      rep.detail = "a foreign site encroaches on vertex " +
                   std::to_string(vid);
    }
  }
  return rep;
}

}  // namespace medial
