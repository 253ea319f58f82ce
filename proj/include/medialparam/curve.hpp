#pragma once

// Cubic Bezier loops with arc-length machinery: G1-validated closed curves,
// arc-length sampling, signed area, winding numbers, and multi-loop domains.

#include <array>
#include <cmath>
#include <numbers>
#include <string>
#include <utility>
#include <vector>

#include "medialparam/geom.hpp"

namespace medial {

struct CubicBezier {
  std::array<Point2, 4> p;

  Point2 eval(double t) const {
    Point2 a = lerp(p[0], p[1], t);
    Point2 b = lerp(p[1], p[2], t);
    Point2 c = lerp(p[2], p[3], t);
    return lerp(lerp(a, b, t), lerp(b, c, t), t);
  }

  Vec2 deriv(double t) const {
    Vec2 d0 = (p[1] - p[0]) * 3.0;
    Vec2 d1 = (p[2] - p[1]) * 3.0;
    Vec2 d2 = (p[3] - p[2]) * 3.0;
    return lerp(lerp(d0, d1, t), lerp(d1, d2, t), t);
  }

  double speed(double t) const { return norm(deriv(t)); }

  std::pair<CubicBezier, CubicBezier> split(double t) const {
    Point2 q0 = lerp(p[0], p[1], t);
    Point2 q1 = lerp(p[1], p[2], t);
    Point2 q2 = lerp(p[2], p[3], t);
    Point2 r0 = lerp(q0, q1, t);
    Point2 r1 = lerp(q1, q2, t);
    Point2 s = lerp(r0, r1, t);
    return {CubicBezier{{p[0], q0, r0, s}}, CubicBezier{{s, r1, q2, p[3]}}};
  }

  Box2 control_bbox() const {
    Box2 b;
    for (const auto& q : p) b.expand(q);
    return b;
  }

  CubicBezier reversed() const { return {{p[3], p[2], p[1], p[0]}}; }
};

namespace detail {

// Gauss-Legendre nodes (positive half) and weights on [-1, 1].
inline constexpr double kGL7X[4] = {0.0, 0.4058451513773972,
                                    0.7415311855993945, 0.9491079123427585};
inline constexpr double kGL7W[4] = {0.4179591836734694, 0.3818300505051189,
                                    0.2797053914892766, 0.1294849661688697};
inline constexpr double kGL15X[8] = {0.0,
                                     0.2011940939974345,
                                     0.3941513470775634,
                                     0.5709721726085388,
                                     0.7244177313601701,
                                     0.8482065834104272,
                                     0.9372733924007060,
                                     0.9879925180204854};
inline constexpr double kGL15W[8] = {0.2025782419255613, 0.1984314853271116,
                                     0.1861610000155622, 0.1662692058169939,
                                     0.1395706779261543, 0.1071592204671719,
                                     0.0703660474881081, 0.0307532419961173};

template <int N, const double* X, const double* W>
double gauss_speed(const CubicBezier& bz, double t0, double t1) {
  double mid = 0.5 * (t0 + t1);
  double half = 0.5 * (t1 - t0);
  double acc = W[0] * bz.speed(mid);
  for (int i = 1; i < N; i++) {
    double d = half * X[i];
    acc += W[i] * (bz.speed(mid - d) + bz.speed(mid + d));
  }
  return acc * half;
}

inline double gl7_speed(const CubicBezier& bz, double t0, double t1) {
  return gauss_speed<4, kGL7X, kGL7W>(bz, t0, t1);
}
inline double gl15_speed(const CubicBezier& bz, double t0, double t1) {
  return gauss_speed<8, kGL15X, kGL15W>(bz, t0, t1);
}

inline double dist_point_segment(const Point2& p, const Point2& a,
                                 const Point2& b) {
  Vec2 ab = b - a;
  double len2 = norm2(ab);
  if (len2 == 0.0) return dist(p, a);
  double t = std::clamp(dot(p - a, ab) / len2, 0.0, 1.0);
  return dist(p, a + ab * t);
}

}  // namespace detail

// A closed G1 chain of cubic Bezier segments.  Consecutive segments must
// share endpoints (snapped on construction) and have parallel, same-signed
// tangents at the joins.  Arc-length tables are built once; all arc queries
// resolve through adaptive Gauss-Legendre panels (relative tolerance 1e-9)
// plus Newton inversion.
class CurveLoop {
 public:
  explicit CurveLoop(std::vector<CubicBezier> segments)
      : segs_(std::move(segments)) {
    validate_and_snap();
    build_tables();
  }

  const std::vector<CubicBezier>& segments() const { return segs_; }
  double perimeter() const { return perim_; }
  const Box2& bbox() const { return bbox_; }

  // Exact for polynomial boundaries: the Green's-theorem integrand of a
  // cubic loop has degree 5, which 3-point Gauss integrates exactly.
  double signed_area() const {
    constexpr double x1 = 0.7745966692414834;  // sqrt(3/5)
    constexpr double w0 = 8.0 / 9.0, w1 = 5.0 / 9.0;
    double area = 0.0;
    for (const auto& bz : segs_) {
      auto f = [&bz](double t) {
        Point2 q = bz.eval(t);
        Vec2 d = bz.deriv(t);
        return q.x * d.y - q.y * d.x;
      };
      area += 0.5 * 0.5 * (w1 * f(0.5 * (1.0 - x1)) + w0 * f(0.5) +
                           w1 * f(0.5 * (1.0 + x1)));
    }
    return area;
  }

  bool ccw() const { return signed_area() > 0.0; }

  CurveLoop reversed() const {
    std::vector<CubicBezier> rev;
    rev.reserve(segs_.size());
    for (auto it = segs_.rbegin(); it != segs_.rend(); ++it)
      rev.push_back(it->reversed());
    return CurveLoop(std::move(rev));
  }

  // u is normalized arc length in [0, 1); values outside wrap around.
  Point2 point_at(double u) const { return point_at_arc(wrap_arc(u * perim_)); }
  Vec2 tangent_at(double u) const {
    return tangent_at_arc(wrap_arc(u * perim_));
  }

  Point2 point_at_arc(double s) const {
    auto [seg, t] = locate_arc(s);
    return segs_[seg].eval(t);
  }

  Vec2 tangent_at_arc(double s) const {
    auto [seg, t] = locate_arc(s);
    Vec2 d = segs_[seg].deriv(t);
    double n = norm(d);
    if (n < 1e-300)
      throw ValidationError("curve", "vanishing tangent on segment " +
                                         std::to_string(seg));
    return d / n;
  }

  // (segment index, local parameter) for arc length s in [0, perimeter).
  std::pair<int, double> locate_arc(double s) const {
    s = wrap_arc(s);
    size_t lo = 0, hi = panels_.size() - 1;
    while (lo < hi) {
      size_t mid = (lo + hi) / 2;
      if (panels_[mid].cum1 <= s)
        lo = mid + 1;
      else
        hi = mid;
    }
    const Panel& pn = panels_[lo];
    return {pn.seg, invert_panel(pn, s - pn.cum0)};
  }

  // Closed polyline approximating the loop within tol (first point not
  // repeated at the end).
  std::vector<Point2> flatten(double tol) const {
    std::vector<Point2> pts;
    for (const auto& bz : segs_) {
      pts.push_back(bz.p[0]);
      flatten_rec(bz, tol, 0, pts);
      pts.pop_back();  // segment end == next segment start
    }
    // Guard against coincident points (degenerate short segments).
    std::vector<Point2> out;
    for (const auto& p : pts)
      if (out.empty() || !(p == out.back())) out.push_back(p);
    while (out.size() > 1 && out.front() == out.back()) out.pop_back();
    return out;
  }

 private:
  struct Panel {
    int seg;
    double t0, t1;
    double cum0, cum1;
  };

  void validate_and_snap() {
    if (segs_.empty())
      throw ValidationError("curve", "loop has no segments");
    Box2 bb;
    for (const auto& bz : segs_)
      for (const auto& q : bz.p) bb.expand(q);
    double scale = std::max(bb.diag(), 1e-30);
    size_t n = segs_.size();
    for (size_t i = 0; i < n; i++) {
      size_t j = (i + 1) % n;
      if (dist(segs_[i].p[3], segs_[j].p[0]) > 1e-9 * scale)
        throw ValidationError(
            "curve", "segments " + std::to_string(i) + " and " +
                         std::to_string(j) + " do not share an endpoint");
      segs_[j].p[0] = segs_[i].p[3];
    }
    for (size_t i = 0; i < n; i++) {
      size_t j = (i + 1) % n;
      Vec2 out = segs_[i].deriv(1.0);
      Vec2 in = segs_[j].deriv(0.0);
      double no = norm(out), ni = norm(in);
      if (no < 1e-12 * scale || ni < 1e-12 * scale)
        throw ValidationError("curve", "vanishing tangent at join " +
                                           std::to_string(j));
      if (std::fabs(cross(out, in)) > 1e-9 * no * ni || dot(out, in) <= 0.0)
        throw ValidationError("curve", "tangent break at join " +
                                           std::to_string(j) +
                                           " (loop is not G1)");
    }
    bbox_ = bb;
  }

  void build_tables() {
    double cum = 0.0;
    for (size_t i = 0; i < segs_.size(); i++) {
      // Rough scale for the absolute part of the panel tolerance.
      double poly = dist(segs_[i].p[0], segs_[i].p[1]) +
                    dist(segs_[i].p[1], segs_[i].p[2]) +
                    dist(segs_[i].p[2], segs_[i].p[3]);
      build_panels(static_cast<int>(i), 0.0, 1.0,
                   1e-9 * std::max(poly, 1e-30), 0, cum);
    }
    perim_ = cum;
    if (!(perim_ > 0.0))
      throw ValidationError("curve", "loop has zero perimeter");
  }

  void build_panels(int seg, double t0, double t1, double tol, int depth,
                    double& cum) {
    const CubicBezier& bz = segs_[seg];
    double g7 = detail::gl7_speed(bz, t0, t1);
    double g15 = detail::gl15_speed(bz, t0, t1);
    if (std::fabs(g15 - g7) <= tol || depth >= 30) {
      panels_.push_back({seg, t0, t1, cum, cum + g15});
      cum += g15;
      return;
    }
    double mid = 0.5 * (t0 + t1);
    build_panels(seg, t0, mid, 0.5 * tol, depth + 1, cum);
    build_panels(seg, mid, t1, 0.5 * tol, depth + 1, cum);
  }

  double wrap_arc(double s) const {
    s = std::fmod(s, perim_);
    if (s < 0.0) s += perim_;
    return s;
  }

  // Newton with a bisection bracket on F(t) = arclen(panel.t0 .. t) - target.
  double invert_panel(const Panel& pn, double target) const {
    const CubicBezier& bz = segs_[pn.seg];
    double span = pn.cum1 - pn.cum0;
    if (span <= 0.0) return pn.t0;
    double lo = pn.t0, hi = pn.t1;
    double t = pn.t0 + (pn.t1 - pn.t0) * (target / span);
    for (int iter = 0; iter < 80; iter++) {
      double f = detail::gl15_speed(bz, pn.t0, t) - target;
      if (f > 0.0)
        hi = t;
      else
        lo = t;
      double sp = bz.speed(t);
      double tn = (sp > 0.0) ? t - f / sp : 0.5 * (lo + hi);
      if (!(tn > lo && tn < hi)) tn = 0.5 * (lo + hi);
      if (std::fabs(tn - t) <= 1e-12 * (pn.t1 - pn.t0)) return tn;
      t = tn;
    }
    return t;
  }

  void flatten_rec(const CubicBezier& bz, double tol, int depth,
                   std::vector<Point2>& out) const {
    double d = std::max(
        detail::dist_point_segment(bz.p[1], bz.p[0], bz.p[3]),
        detail::dist_point_segment(bz.p[2], bz.p[0], bz.p[3]));
    if (d <= tol || depth >= 24) {
      out.push_back(bz.p[3]);
      return;
    }
    auto [l, r] = bz.split(0.5);
    flatten_rec(l, tol, depth + 1, out);
    flatten_rec(r, tol, depth + 1, out);
  }

  std::vector<CubicBezier> segs_;
  std::vector<Panel> panels_;
  double perim_ = 0.0;
  Box2 bbox_;
};

// Winding number of loop around p by recursive angle summation: a Bezier
// piece whose control box excludes p subtends less than a half turn, so its
// contribution is the principal angle between the endpoint directions.
// Throws AmbiguousPointError when p is within ~1e-12 of the curve (relative
// to the loop's bounding-box diagonal), where the winding is not defined
// robustly.
inline int winding_number(const Point2& p, const CurveLoop& loop) {
  double margin = 1e-12 * std::max(loop.bbox().diag(), 1e-30);
  double total = 0.0;

  struct Frame {
    CubicBezier bz;
    int depth;
  };
  std::vector<Frame> stack;
  for (const auto& bz : loop.segments()) stack.push_back({bz, 0});

  while (!stack.empty()) {
    Frame fr = stack.back();
    stack.pop_back();
    Box2 bb = fr.bz.control_bbox();
    bool outside = p.x < bb.lo.x - margin || p.x > bb.hi.x + margin ||
                   p.y < bb.lo.y - margin || p.y > bb.hi.y + margin;
    if (outside) {
      Vec2 v0 = fr.bz.p[0] - p;
      Vec2 v1 = fr.bz.p[3] - p;
      total += std::atan2(cross(v0, v1), dot(v0, v1));
      continue;
    }
    if (bb.diag() < margin || fr.depth >= 64)
      throw AmbiguousPointError(
          "winding", "query point lies on or numerically near the curve");
    auto [l, r] = fr.bz.split(0.5);
    stack.push_back({r, fr.depth + 1});
    stack.push_back({l, fr.depth + 1});
  }

  double turns = total / (2.0 * std::numbers::pi);
  long w = std::lround(turns);
  if (std::fabs(turns - static_cast<double>(w)) > 0.25)
    throw AmbiguousPointError("winding",
                              "angle sum did not resolve to a whole turn");
  return static_cast<int>(w);
}

enum class CurveRole { Outer, Hole };

// A compact planar domain: outer loops counterclockwise, holes clockwise,
// all loops simple and pairwise disjoint, every hole inside exactly one
// outer loop.  Construct through make_domain, which normalizes orientation
// (recording a warning per reversed loop) and validates the rest.
struct DomainSpec {
  std::vector<CurveLoop> loops;
  std::vector<CurveRole> roles;
  std::vector<std::string> warnings;

  Box2 bbox() const {
    Box2 b;
    for (const auto& l : loops) b.expand(l.bbox());
    return b;
  }
};

// Sum of loop windings: 1 inside the domain, 0 outside (holes cancel).
inline int winding_number(const Point2& p, const DomainSpec& domain) {
  int w = 0;
  for (const auto& loop : domain.loops) w += winding_number(p, loop);
  return w;
}

inline bool domain_contains(const DomainSpec& domain, const Point2& p) {
  return winding_number(p, domain) == 1;
}

namespace detail {

// Proper or improper intersection of closed segments, exact up to rounding.
inline bool segments_intersect(const Point2& a, const Point2& b,
                               const Point2& c, const Point2& d);

inline bool polyline_self_intersects(const std::vector<Point2>& pts);
inline bool polylines_intersect(const std::vector<Point2>& a,
                                const std::vector<Point2>& b);

}  // namespace detail

inline DomainSpec make_domain(std::vector<CurveLoop> loops,
                              std::vector<CurveRole> roles) {
  if (loops.size() != roles.size())
    throw std::invalid_argument("make_domain: loops/roles size mismatch");
  if (loops.empty())
    throw ValidationError("domain", "domain has no curves");

  DomainSpec d;
  d.roles = std::move(roles);

  // Normalize orientation: outer loops CCW, holes CW.
  for (size_t i = 0; i < loops.size(); i++) {
    bool want_ccw = d.roles[i] == CurveRole::Outer;
    if (loops[i].ccw() != want_ccw) {
      d.warnings.push_back("curve " + std::to_string(i) + " (" +
                           (want_ccw ? "outer" : "hole") +
                           ") was reversed to match orientation convention");
      d.loops.push_back(loops[i].reversed());
    } else {
      d.loops.push_back(std::move(loops[i]));
    }
  }

  // Simplicity and pairwise disjointness, checked on flattened polylines.
  // The tolerance is a compromise: fine enough to catch genuine crossings,
  // coarse enough to keep the quadratic segment test cheap.  Near-tangent
  // curves closer than ~1e-4 of the bbox may slip through.
  double tol = 1e-4 * std::max(d.bbox().diag(), 1e-30);
  std::vector<std::vector<Point2>> flat;
  flat.reserve(d.loops.size());
  for (const auto& l : d.loops) flat.push_back(l.flatten(tol));
  for (size_t i = 0; i < flat.size(); i++) {
    if (detail::polyline_self_intersects(flat[i]))
      throw ValidationError("domain", "curve " + std::to_string(i) +
                                          " is self-intersecting");
    for (size_t j = i + 1; j < flat.size(); j++)
      if (detail::polylines_intersect(flat[i], flat[j]))
        throw ValidationError("domain", "curves " + std::to_string(i) +
                                            " and " + std::to_string(j) +
                                            " intersect");
  }

  // Containment: probe one point per loop against all other loops.
  size_t n = d.loops.size();
  for (size_t i = 0; i < n; i++) {
    Point2 q = d.loops[i].point_at(0.1234567);
    int outer_hits = 0;
    for (size_t j = 0; j < n; j++) {
      if (i == j) continue;
      int w = winding_number(q, d.loops[j]);
      if (d.roles[j] == CurveRole::Outer && w == 1) outer_hits++;
      if (d.roles[j] == CurveRole::Hole && w != 0)
        throw ValidationError("domain", "curve " + std::to_string(i) +
                                            " lies inside hole " +
                                            std::to_string(j));
    }
    if (d.roles[i] == CurveRole::Outer && outer_hits != 0)
      throw ValidationError("domain", "outer curve " + std::to_string(i) +
                                          " is nested inside another outer");
    if (d.roles[i] == CurveRole::Hole && outer_hits != 1)
      throw ValidationError(
          "domain", "hole " + std::to_string(i) +
                        " must lie inside exactly one outer curve");
  }
  return d;
}

// One boundary sample: position, unit tangent, owning curve, and normalized
// arc-length parameter in [0, 1).
struct Sample {
  Point2 position;
  Vec2 tangent;
  int curve_id = 0;
  double param = 0.0;
};

enum class SamplingStrategy { EqualCount, LengthDependent };

// n equally spaced (by arc length) samples starting at the loop origin.
inline std::vector<Sample> sample_loop(const CurveLoop& loop, int curve_id,
                                       int n) {
  if (n < 8)
    throw std::invalid_argument("sample_loop: need at least 8 samples");
  std::vector<Sample> out;
  out.reserve(n);
  double L = loop.perimeter();
  for (int k = 0; k < n; k++) {
    double s = L * (static_cast<double>(k) / n);
    Sample smp;
    smp.position = loop.point_at_arc(s);
    smp.tangent = loop.tangent_at_arc(s);
    smp.curve_id = curve_id;
    smp.param = static_cast<double>(k) / n;
    out.push_back(smp);
  }
  return out;
}

// Samples every loop of the domain.  EqualCount puts n on each loop;
// LengthDependent spaces samples ~h apart with h = longest perimeter / n,
// never fewer than 8 per loop.
inline std::vector<Sample> sample_domain(const DomainSpec& domain,
                                         SamplingStrategy strategy, int n) {
  if (n < 8)
    throw std::invalid_argument("sample_domain: need at least 8 samples");
  std::vector<Sample> out;
  if (strategy == SamplingStrategy::EqualCount) {
    for (size_t i = 0; i < domain.loops.size(); i++) {
      auto s = sample_loop(domain.loops[i], static_cast<int>(i), n);
      out.insert(out.end(), s.begin(), s.end());
    }
    return out;
  }
  double pmax = 0.0;
  for (const auto& l : domain.loops) pmax = std::max(pmax, l.perimeter());
  double h_ref = pmax / n;
  for (size_t i = 0; i < domain.loops.size(); i++) {
    int ni = static_cast<int>(
        std::max<long>(8, std::lround(domain.loops[i].perimeter() / h_ref)));
    auto s = sample_loop(domain.loops[i], static_cast<int>(i), ni);
    out.insert(out.end(), s.begin(), s.end());
  }
  return out;
}

namespace detail {

inline bool segments_intersect(const Point2& a, const Point2& b,
                               const Point2& c, const Point2& d) {
  auto orient = [](const Point2& p, const Point2& q, const Point2& r) {
    double v = (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
    return (v > 0.0) ? 1 : (v < 0.0 ? -1 : 0);
  };
  int o1 = orient(a, b, c), o2 = orient(a, b, d);
  int o3 = orient(c, d, a), o4 = orient(c, d, b);
  if (o1 != o2 && o3 != o4) return true;
  auto on_seg = [](const Point2& p, const Point2& q, const Point2& r) {
    return std::min(p.x, r.x) <= q.x && q.x <= std::max(p.x, r.x) &&
           std::min(p.y, r.y) <= q.y && q.y <= std::max(p.y, r.y);
  };
  if (o1 == 0 && on_seg(a, c, b)) return true;
  if (o2 == 0 && on_seg(a, d, b)) return true;
  if (o3 == 0 && on_seg(c, a, d)) return true;
  if (o4 == 0 && on_seg(c, b, d)) return true;
  return false;
}

inline bool polyline_self_intersects(const std::vector<Point2>& pts) {
  size_t n = pts.size();
  for (size_t i = 0; i < n; i++) {
    size_t i1 = (i + 1) % n;
    for (size_t j = i + 1; j < n; j++) {
      size_t j1 = (j + 1) % n;
      // Skip pairs sharing a vertex.
      if (i == j || i1 == j || j1 == i) continue;
      if (segments_intersect(pts[i], pts[i1], pts[j], pts[j1])) return true;
    }
  }
  return false;
}

inline bool polylines_intersect(const std::vector<Point2>& a,
                                const std::vector<Point2>& b) {
  for (size_t i = 0; i < a.size(); i++) {
    size_t i1 = (i + 1) % a.size();
    for (size_t j = 0; j < b.size(); j++) {
      size_t j1 = (j + 1) % b.size();
      if (segments_intersect(a[i], a[i1], b[j], b[j1])) return true;
    }
  }
  return false;
}

}  // namespace detail

}  // namespace medial
