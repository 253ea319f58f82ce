#pragma once

// (curve, theta, r) coordinates over the remeshed structure: point location
// via a uniform grid over face boxes, bilinear maps per face, and the dipole
// implicit field.  theta is normalized arc length along the reconstructed
// boundary in [0,1); r runs from 0 on the spine to 1 on the boundary, so the
// disk reduces to polar coordinates with the pole as center.  Every query is
// a const read of immutable state, safe for concurrent callers.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "medialparam/dipole.hpp"
#include "medialparam/predicates.hpp"
#include "medialparam/remesh.hpp"

namespace medial {

struct ParamPoint {
  int curve_id = -1;
  double theta = 0.0;  // [0, 1)
  double r = 1.0;      // 1 on boundary, 0 on spine
};

// F(p) = nearest-outer-site distance minus nearest-inner-site distance:
// positive inside the domain, negative outside, zero on the reconstructed
// boundary between the rings.
inline double implicit_F(const Point2& p, const SiteSet& sites) {
  if (sites.size() == 0)
    throw std::invalid_argument("implicit_F: empty site set");
  double din = std::numeric_limits<double>::infinity();
  double dout = din;
  for (size_t i = 0; i < sites.size(); i++) {
    double d2 = dist2(p, sites.pos[i]);
    if (sites.is_inner[i])
      din = std::min(din, d2);
    else
      dout = std::min(dout, d2);
  }
  if (!std::isfinite(din) || !std::isfinite(dout))
    throw std::invalid_argument("implicit_F: need sites of both polarities");
  return std::sqrt(dout) - std::sqrt(din);
}

struct FieldSample {
  Point2 point;
  double value = 0.0;
};

struct FieldGrid {
  Box2 frame;
  int resolution = 0;                // points per side
  std::vector<FieldSample> samples;  // row-major, y varies slowest
};

inline FieldGrid sample_field(const SiteSet& sites, const Box2& frame,
                              int resolution) {
  if (resolution < 2)
    throw std::invalid_argument("sample_field: resolution must be >= 2");
  FieldGrid g;
  g.frame = frame;
  g.resolution = resolution;
  g.samples.reserve(static_cast<size_t>(resolution) * resolution);
  for (int j = 0; j < resolution; j++) {
    double y = frame.lo.y +
               (frame.hi.y - frame.lo.y) * (j / double(resolution - 1));
    for (int i = 0; i < resolution; i++) {
      double x = frame.lo.x +
                 (frame.hi.x - frame.lo.x) * (i / double(resolution - 1));
      g.samples.push_back({{x, y}, implicit_F({x, y}, sites)});
    }
  }
  return g;
}

// Forward bilinear map of a face.  Quads interpolate between the boundary
// edge (v=0) and the spine edge (v=1); triangles degenerate the spine edge
// to the apex.  u=0 and u=1 reproduce the shared limb points bit for bit, so
// neighboring faces agree exactly along limbs.
inline Point2 bilinear_point(const RemeshedMesh& m, int face, double u,
                             double v) {
  const MeshFace& f = m.faces[face];
  Point2 b0 = m.pos(f.v[0]), b1 = m.pos(f.v[1]);
  Point2 s1 = m.pos(f.v[2]);
  Point2 s0 = f.n == 4 ? m.pos(f.v[3]) : s1;
  Point2 bottom = b0 * (1.0 - u) + b1 * u;
  Point2 top = s0 * (1.0 - u) + s1 * u;
  return bottom * (1.0 - v) + top * v;
}

namespace detail {

inline double face_diameter(const RemeshedMesh& m, int face) {
  const MeshFace& f = m.faces[face];
  Box2 bb;
  for (int e = 0; e < f.n; e++) bb.expand(m.pos(f.v[e]));
  return bb.diag();
}

}  // namespace detail

// Invert the bilinear map: the u root of a quadratic (linear for
// parallelogram-like quads), then v from the better-conditioned component.
// The residual check is mandatory; a miss is an error, never a clamp.
inline std::pair<double, double> inverse_bilinear(const RemeshedMesh& m,
                                                  int face, const Point2& p) {
  const double range_tol = 1e-9;
  double scale = std::max(detail::face_diameter(m, face),
                          std::numeric_limits<double>::min());
  auto residual_ok = [&](double u, double v) {
    return dist(bilinear_point(m, face, u, v), p) <= 1e-9 * scale;
  };
  const MeshFace& f = m.faces[face];
  Point2 b0 = m.pos(f.v[0]), b1 = m.pos(f.v[1]);

  if (f.n == 3) {
    Point2 s = m.pos(f.v[2]);
    double denom = cross(b1 - b0, s - b0);  // 2x area, positive for CCW
    double v = cross(b1 - b0, p - b0) / denom;
    double w1 = cross(p - b0, s - b0) / denom;
    // u degrades as p approaches the apex, where every u maps to the same
    // point; settle on the center there.
    double u = std::fabs(1.0 - v) < 1e-9 ? 0.5 : w1 / (1.0 - v);
    if (u < -range_tol || u > 1.0 + range_tol || v < -range_tol ||
        v > 1.0 + range_tol || !residual_ok(u, v))
      throw InversionError("param", "triangle inversion missed face " +
                                        std::to_string(face));
    return {u, v};
  }

  Point2 s1 = m.pos(f.v[2]), s0 = m.pos(f.v[3]);
  Vec2 E = b1 - b0, F = s0 - b0, G = (s1 - s0) - (b1 - b0);
  Vec2 q = p - b0;
  double A = -cross(E, G);
  double B = cross(q, G) - cross(E, F);
  double C = cross(q, F);

  std::array<double, 2> roots{};
  int nroots = 0;
  if (A == 0.0) {
    if (B == 0.0)
      throw InversionError("param",
                           "degenerate quad " + std::to_string(face));
    roots[nroots++] = -C / B;
  } else {
    double disc = B * B - 4.0 * A * C;
    if (disc < 0.0) {
      if (disc < -1e-9 * (B * B + std::fabs(4.0 * A * C)))
        throw InversionError("param", "point outside the image of quad " +
                                          std::to_string(face));
      disc = 0.0;
    }
    double qq = -0.5 * (B + std::copysign(std::sqrt(disc), B));
    roots[nroots++] = qq / A;
    if (qq != 0.0) roots[nroots++] = C / qq;
  }

  bool have = false, have01 = false;
  double bu = 0.0, bv = 0.0;
  for (int k = 0; k < nroots; k++) {
    double u = roots[k];
    if (!std::isfinite(u) || u < -range_tol || u > 1.0 + range_tol) continue;
    Vec2 W = F + G * u;
    Vec2 q2 = q - E * u;
    double v = std::fabs(W.x) >= std::fabs(W.y) ? q2.x / W.x : q2.y / W.y;
    if (!std::isfinite(v) || !residual_ok(u, v)) continue;
    bool in01 = v >= -range_tol && v <= 1.0 + range_tol;
    if (have && in01 && have01 && std::fabs(u - bu) > 1e-9)
      throw InversionError("param", "ambiguous inversion in quad " +
                                        std::to_string(face));
    if (!have || (in01 && !have01)) {
      bu = u;
      bv = v;
      have01 = in01;
      have = true;
    }
  }
  if (!have || !have01)
    throw InversionError(
        "param", "no valid root inverting quad " + std::to_string(face));
  return {bu, bv};
}

// Immutable query object: grid-bucketed point location plus the coordinate
// maps in both directions and iso-r contour extraction.
class ParamMap {
 public:
  explicit ParamMap(const RemeshedMesh& mesh) : m_(&mesh) {
    size_t nf = mesh.faces.size();
    if (nf == 0) throw std::invalid_argument("ParamMap: empty mesh");
    std::vector<Box2> boxes(nf);
    for (size_t i = 0; i < nf; i++) {
      const MeshFace& f = mesh.faces[i];
      for (int e = 0; e < f.n; e++) boxes[i].expand(mesh.pos(f.v[e]));
      bounds_.expand(boxes[i]);
    }
    side_ = std::max(1, static_cast<int>(std::ceil(std::sqrt(double(nf)))));
    cw_ = std::max(bounds_.width() / side_,
                   std::numeric_limits<double>::min());
    ch_ = std::max(bounds_.height() / side_,
                   std::numeric_limits<double>::min());
    buckets_.resize(static_cast<size_t>(side_) * side_);
    for (size_t i = 0; i < nf; i++) {
      auto [ix0, iy0] = cell_of(boxes[i].lo);
      auto [ix1, iy1] = cell_of(boxes[i].hi);
      for (int iy = iy0; iy <= iy1; iy++)
        for (int ix = ix0; ix <= ix1; ix++)
          buckets_[static_cast<size_t>(iy) * side_ + ix].push_back(
              static_cast<int>(i));
    }
  }

  const RemeshedMesh& mesh() const { return *m_; }

  // Exact point-in-face test (winding with exact orientation); closed faces,
  // so edge and corner points count as inside.
  bool face_contains(int face, const Point2& p) const {
    const MeshFace& f = m_->faces[face];
    int wn = 0;
    for (int e = 0; e < f.n; e++) {
      Point2 a = m_->pos(f.v[e]);
      Point2 b = m_->pos(f.v[(e + 1) % f.n]);
      int o = orient2d(a, b, p);
      if (o == 0 && dot(p - a, p - b) <= 0.0) return true;
      if (a.y <= p.y) {
        if (b.y > p.y && o > 0) wn++;
      } else {
        if (b.y <= p.y && o < 0) wn--;
      }
    }
    return wn != 0;
  }

  // Lowest-indexed face containing p, or -1 when p is outside all faces.
  int locate_face(const Point2& p) const {
    if (!bounds_.contains(p)) return -1;
    auto [ix, iy] = cell_of(p);
    int best = -1;
    for (int fc : buckets_[static_cast<size_t>(iy) * side_ + ix])
      if (face_contains(fc, p)) {
        best = fc;
        break;  // bucket lists are ascending
      }
    return best;
  }

  ParamPoint to_param(const Point2& p) const {
    int face = locate_face(p);
    if (face < 0)
      throw InversionError("param", "point (" + std::to_string(p.x) + ", " +
                                        std::to_string(p.y) +
                                        ") lies outside every face");
    auto [u, v] = inverse_bilinear(*m_, face, p);
    const MeshFace& f = m_->faces[face];
    double t0 = m_->bverts[f.v[0]].theta;
    double t1 = m_->bverts[f.v[1]].theta;
    if (t1 <= t0) t1 += 1.0;  // interval crossing the loop seam
    double theta = t0 + u * (t1 - t0);
    if (theta >= 1.0) theta -= 1.0;
    if (theta < 0.0) theta = 0.0;
    return {f.loop, theta, 1.0 - v};
  }

  Point2 eval_param(const ParamPoint& q) const {
    if (q.curve_id < 0 ||
        q.curve_id >= static_cast<int>(m_->loop_range.size()))
      throw std::invalid_argument("eval_param: bad curve id");
    if (!(q.theta >= 0.0 && q.theta < 1.0))
      throw std::invalid_argument("eval_param: theta outside [0,1)");
    if (!(q.r >= 0.0 && q.r <= 1.0))
      throw std::invalid_argument("eval_param: r outside [0,1]");
    auto [lo, hi] = m_->loop_range[q.curve_id];
    // Last k with theta_k <= q.theta; intervals are half-open [t_k, t_{k+1}).
    int k = lo;
    {
      int a = lo, b = hi - 1;
      while (a <= b) {
        int mid = (a + b) / 2;
        if (m_->bverts[mid].theta <= q.theta) {
          k = mid;
          a = mid + 1;
        } else {
          b = mid - 1;
        }
      }
    }
    int face = m_->face_of_interval[q.curve_id][k - lo];
    double t0 = m_->bverts[k].theta;
    double t1 = k + 1 < hi ? m_->bverts[k + 1].theta : 1.0;
    double u = (q.theta - t0) / (t1 - t0);
    return bilinear_point(*m_, face, u, 1.0 - q.r);
  }

  // Iso-r curve of one loop's fan: per-face segments at v = 1-r, deduped as
  // undirected segments (two-sided fans trace the spine twice), then chained
  // into open polylines first and closed loops second.  Closed polylines
  // repeat their first point at the end.
  std::vector<std::vector<Point2>> iso_contour(double r, int curve_id) const {
    if (!(r >= 0.0 && r <= 1.0))
      throw std::invalid_argument("iso_contour: r outside [0,1]");
    if (curve_id < 0 || curve_id >= static_cast<int>(m_->loop_range.size()))
      throw std::invalid_argument("iso_contour: bad curve id");
    double v = 1.0 - r;

    using Key = std::pair<double, double>;
    auto key = [](const Point2& p) { return Key{p.x, p.y}; };
    std::vector<std::array<Point2, 2>> segs;
    std::map<std::pair<Key, Key>, int> seen;
    Point2 fallback;
    bool any_face = false;
    for (size_t fi = 0; fi < m_->faces.size(); fi++) {
      if (m_->faces[fi].loop != curve_id) continue;
      Point2 p0 = bilinear_point(*m_, static_cast<int>(fi), 0.0, v);
      Point2 p1 = bilinear_point(*m_, static_cast<int>(fi), 1.0, v);
      if (!any_face) {
        fallback = p0;
        any_face = true;
      }
      if (p0 == p1) continue;  // triangle apex row
      Key ka = key(p0), kb = key(p1);
      if (kb < ka) std::swap(ka, kb);
      if (seen.emplace(std::make_pair(ka, kb), static_cast<int>(segs.size()))
              .second)
        segs.push_back({p0, p1});
    }
    if (segs.empty())
      return any_face ? std::vector<std::vector<Point2>>{{fallback}}
                      : std::vector<std::vector<Point2>>{};

    std::map<Key, std::vector<int>> at;  // endpoint -> incident segments
    for (size_t i = 0; i < segs.size(); i++) {
      at[key(segs[i][0])].push_back(static_cast<int>(i));
      at[key(segs[i][1])].push_back(static_cast<int>(i));
    }
    std::vector<char> used(segs.size(), 0);
    auto walk = [&](Point2 start, int s0) {
      std::vector<Point2> line{start};
      Point2 cur = start;
      int s = s0;
      while (s >= 0) {
        used[s] = 1;
        cur = key(segs[s][0]) == key(cur) ? segs[s][1] : segs[s][0];
        line.push_back(cur);
        s = -1;
        for (int cand : at[key(cur)])
          if (!used[cand]) {
            s = cand;
            break;
          }
      }
      return line;
    };

    std::vector<std::vector<Point2>> out;
    for (size_t i = 0; i < segs.size(); i++) {  // open chains first
      if (used[i]) continue;
      for (int end = 0; end < 2; end++)
        if (!used[i] && at[key(segs[i][end])].size() == 1)
          out.push_back(walk(segs[i][end], static_cast<int>(i)));
    }
    for (size_t i = 0; i < segs.size(); i++)  // remaining cycles
      if (!used[i]) out.push_back(walk(segs[i][0], static_cast<int>(i)));
    return out;
  }

 private:
  std::pair<int, int> cell_of(const Point2& p) const {
    auto clampi = [](int x, int hi) { return std::min(std::max(x, 0), hi); };
    int ix = clampi(static_cast<int>((p.x - bounds_.lo.x) / cw_), side_ - 1);
    int iy = clampi(static_cast<int>((p.y - bounds_.lo.y) / ch_), side_ - 1);
    return {ix, iy};
  }

  const RemeshedMesh* m_;
  Box2 bounds_;
  int side_ = 1;
  double cw_ = 1.0, ch_ = 1.0;
  std::vector<std::vector<int>> buckets_;
};

}  // namespace medial
