#include <algorithm>
#include <cmath>
#include <random>
#include <set>
#include <vector>

#include "catch_amalgamated.hpp"
#include "medialparam/param.hpp"
#include "medialparam/shapes.hpp"

using namespace medial;

namespace {

struct Built {
  DomainSpec domain;
  std::vector<Sample> samples;
  std::vector<Dipole> dipoles;
  SiteSet sites;
  RemeshedMesh mesh;
};

Built build(std::vector<CurveLoop> loops, std::vector<CurveRole> roles,
            int n, SamplingStrategy strat = SamplingStrategy::EqualCount,
            double alpha = 0.1) {
  Built b;
  b.domain = make_domain(std::move(loops), std::move(roles));
  b.samples = sample_domain(b.domain, strat, n);
  b.dipoles = make_dipoles(b.samples, b.domain, alpha);
  b.sites = collect_sites(b.dipoles);
  auto T = delaunay(b.sites, 42);
  auto vor = voronoi_dual(T, 2.0);
  auto raw = classify_edges(vor, b.sites, b.samples);
  b.mesh = interpolative_remesh(type_spine_vertices(
      collapse_short_edges(raw, limb_median_epsilon(raw, 0.01))));
  return b;
}

// Distance from p to the sampled boundary polylines (cyclic per loop).
double dist_to_sampled_curve(const Point2& p, const std::vector<Sample>& ss) {
  double best = std::numeric_limits<double>::infinity();
  size_t start = 0;
  while (start < ss.size()) {
    size_t end = start;
    while (end < ss.size() && ss[end].curve_id == ss[start].curve_id) end++;
    for (size_t i = start; i < end; i++) {
      size_t j = i + 1 == end ? start : i + 1;
      best = std::min(best, medial::detail::dist_point_segment(
                                p, ss[i].position, ss[j].position));
    }
    start = end;
  }
  return best;
}

// Even-odd containment; accepts closed polylines with or without the
// repeated end point.
bool inside_poly(const std::vector<Point2>& poly, const Point2& p) {
  size_t n = poly.size();
  if (n > 1 && poly.front() == poly.back()) n--;
  bool in = false;
  for (size_t i = 0; i < n; i++) {
    const Point2& a = poly[i];
    const Point2& b = poly[(i + 1) % n];
    if ((a.y > p.y) != (b.y > p.y)) {
      double xs = a.x + (p.y - a.y) * (b.x - a.x) / (b.y - a.y);
      if (xs > p.x) in = !in;
    }
  }
  return in;
}

double min_dist_to_polyline(const Point2& p, const std::vector<Point2>& poly,
                            bool closed) {
  double best = std::numeric_limits<double>::infinity();
  size_t n = poly.size();
  size_t m = closed && poly.front() != poly.back() ? n : n - 1;
  for (size_t i = 0; i < m; i++)
    best = std::min(best, medial::detail::dist_point_segment(
                              p, poly[i], poly[(i + 1) % n]));
  return best;
}

RemeshedMesh hand_quad(Point2 b0, Point2 b1, Point2 s1, Point2 s0) {
  RemeshedMesh m;
  m.bverts = {{b0, 0, 0.0}, {b1, 0, 0.5}};
  m.sverts = {s0, s1};
  m.loop_range = {{0, 2}};
  MeshFace f;
  f.v = {0, 1, 3, 2};
  f.n = 4;
  f.loop = 0;
  m.faces = {f};
  m.face_of_interval = {{0, 0}};
  return m;
}

std::vector<Point2> random_interior_points(const ParamMap& pm, int count,
                                           unsigned seed) {
  Box2 bb;
  for (const auto& b : pm.mesh().bverts) bb.expand(b.pos);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> ux(bb.lo.x, bb.hi.x);
  std::uniform_real_distribution<double> uy(bb.lo.y, bb.hi.y);
  std::vector<Point2> pts;
  while (static_cast<int>(pts.size()) < count) {
    Point2 p{ux(rng), uy(rng)};
    if (pm.locate_face(p) >= 0) pts.push_back(p);
  }
  return pts;
}

}  // namespace

TEST_CASE("implicit field vanishes on samples and doubles at dipoles",
          "[param]") {
  auto b = build({shapes::stadium(1.0, 1.0)}, {CurveRole::Outer}, 100);
  for (const auto& s : b.samples)
    REQUIRE(std::fabs(implicit_F(s.position, b.sites)) <= 1e-12);
  for (size_t i = 0; i < b.dipoles.size(); i += 7) {
    const Dipole& d = b.dipoles[i];
    REQUIRE(implicit_F(d.inner, b.sites) ==
            Catch::Approx(2.0 * d.offset).margin(1e-12));
    REQUIRE(implicit_F(d.outer, b.sites) ==
            Catch::Approx(-2.0 * d.offset).margin(1e-12));
  }
  REQUIRE_THROWS_AS(implicit_F({0, 0}, SiteSet{}), std::invalid_argument);
}

TEST_CASE("field sign agrees with the winding oracle", "[param]") {
  auto b = build({shapes::star({0, 0}, 1.0, 0.35, 5)}, {CurveRole::Outer},
                 300);
  double dmax = 0.0;
  for (const auto& d : b.dipoles) dmax = std::max(dmax, d.offset);
  Box2 bb;
  for (const auto& s : b.samples) bb.expand(s.position);
  Box2 wide = bb.scaled_about_center(1.6);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> ux(wide.lo.x, wide.hi.x);
  std::uniform_real_distribution<double> uy(wide.lo.y, wide.hi.y);
  int tested = 0;
  for (int k = 0; k < 30000 && tested < 10000; k++) {
    Point2 p{ux(rng), uy(rng)};
    if (dist_to_sampled_curve(p, b.samples) <= 2.0 * dmax) continue;
    tested++;
    bool in = winding_number(p, b.domain) == 1;
    double F = implicit_F(p, b.sites);
    if (in)
      REQUIRE(F > 0.0);
    else
      REQUIRE(F < 0.0);
  }
  REQUIRE(tested == 10000);
}

TEST_CASE("field grid approaches the circle's saturated distance", "[param]") {
  // Away from the curve F saturates at +-2*delta (both rings recede
  // together), so the convergent statement is against the band-limited
  // profile 2*sign(sd)*min(|sd|, delta); the residual is the ring-polygon
  // sagitta, O(chord^2).
  Box2 frame{{-1.3, -1.3}, {1.3, 1.3}};
  auto max_err = [&](int n) {
    auto b = build({shapes::circle({0, 0}, 1.0)}, {CurveRole::Outer}, n);
    double delta = b.dipoles[0].offset;
    for (const auto& d : b.dipoles)
      REQUIRE(d.offset == Catch::Approx(delta).margin(1e-9));
    auto grid = sample_field(b.sites, frame, 41);
    REQUIRE(grid.samples.size() == 41u * 41u);
    double worst = 0.0;
    for (const auto& fs : grid.samples) {
      double sd = 1.0 - norm(fs.point);
      double pred =
          2.0 * std::copysign(std::min(std::fabs(sd), delta), sd);
      worst = std::max(worst, std::fabs(fs.value - pred));
    }
    return worst;
  };
  double e64 = max_err(64), e128 = max_err(128);
  REQUIRE(e128 < 0.5 * e64);

  // A grid point placed exactly on a boundary sample evaluates to zero.
  auto b = build({shapes::circle({0, 0}, 1.0)}, {CurveRole::Outer}, 64);
  auto g3 = sample_field(b.sites, Box2{{-1, -1}, {1, 1}}, 3);
  const FieldSample& corner = g3.samples[5];  // (1, 0), row-major center row
  REQUIRE(corner.point == Point2{1, 0});
  REQUIRE(std::fabs(corner.value) <= 1e-12);
  REQUIRE_THROWS_AS(sample_field(b.sites, frame, 1), std::invalid_argument);
}

TEST_CASE("locate_face agrees with a linear scan and flags exterior points",
          "[param]") {
  auto cap = build({shapes::stadium(1.0, 1.0)}, {CurveRole::Outer}, 100);
  auto ann = build({shapes::circle({0, 0}, 2.0), shapes::circle({0, 0}, 1.0)},
                   {CurveRole::Outer, CurveRole::Hole},
                   64, SamplingStrategy::LengthDependent);
  for (const auto* bp : {&cap, &ann}) {
    ParamMap pm(bp->mesh);
    for (size_t fi = 0; fi < bp->mesh.faces.size(); fi++) {
      const MeshFace& f = bp->mesh.faces[fi];
      Point2 c{0, 0};
      for (int e = 0; e < f.n; e++) c += bp->mesh.pos(f.v[e]);
      c = c / f.n;
      REQUIRE(pm.locate_face(c) == static_cast<int>(fi));
    }
    Box2 bb;
    for (const auto& b : bp->mesh.bverts) bb.expand(b.pos);
    Box2 wide = bb.scaled_about_center(1.2);
    std::mt19937 rng(11);
    std::uniform_real_distribution<double> ux(wide.lo.x, wide.hi.x);
    std::uniform_real_distribution<double> uy(wide.lo.y, wide.hi.y);
    for (int k = 0; k < 10000; k++) {
      Point2 p{ux(rng), uy(rng)};
      int scan = -1;
      for (size_t fi = 0; fi < bp->mesh.faces.size() && scan < 0; fi++)
        if (pm.face_contains(static_cast<int>(fi), p))
          scan = static_cast<int>(fi);
      REQUIRE(pm.locate_face(p) == scan);
    }
    REQUIRE(pm.locate_face(bb.hi + Point2{1, 1}) == -1);
  }
}

TEST_CASE("inverse bilinear matches corners, centers, and forward points",
          "[param]") {
  auto unit = hand_quad({0, 0}, {1, 0}, {1, 1}, {0, 1});
  auto [uc, vc] = inverse_bilinear(unit, 0, {0.5, 0.5});
  REQUIRE(uc == Catch::Approx(0.5).margin(1e-12));
  REQUIRE(vc == Catch::Approx(0.5).margin(1e-12));
  auto [u0, v0] = inverse_bilinear(unit, 0, {0, 0});
  REQUIRE(u0 == Catch::Approx(0.0).margin(1e-12));
  REQUIRE(v0 == Catch::Approx(0.0).margin(1e-12));

  auto skew = hand_quad({0, 0}, {2, 0}, {1.5, 1.2}, {-0.3, 0.9});
  for (int i = 0; i <= 4; i++)
    for (int j = 0; j <= 4; j++) {
      double u = i / 4.0, v = j / 4.0;
      Point2 p = bilinear_point(skew, 0, u, v);
      auto [ui, vi] = inverse_bilinear(skew, 0, p);
      REQUIRE(ui == Catch::Approx(u).margin(1e-10));
      REQUIRE(vi == Catch::Approx(v).margin(1e-10));
    }
  REQUIRE_THROWS_AS(inverse_bilinear(skew, 0, {100, 100}), InversionError);

  auto cap = build({shapes::stadium(1.0, 1.0)}, {CurveRole::Outer}, 100);
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> uu(0.02, 0.98);
  for (size_t fi = 0; fi < cap.mesh.faces.size(); fi++)
    for (int k = 0; k < 5; k++) {
      double u = uu(rng), v = uu(rng);
      Point2 p = bilinear_point(cap.mesh, static_cast<int>(fi), u, v);
      auto [ui, vi] = inverse_bilinear(cap.mesh, static_cast<int>(fi), p);
      Point2 back = bilinear_point(cap.mesh, static_cast<int>(fi), ui, vi);
      REQUIRE(dist(back, p) <= 1e-9);
      REQUIRE(vi == Catch::Approx(v).margin(1e-7));
    }
}

TEST_CASE("to_param and eval_param roundtrip", "[param]") {
  auto cap = build({shapes::stadium(1.0, 1.0)}, {CurveRole::Outer}, 200);
  auto hole = build(
      {shapes::star({0, 0}, 1.0, 0.35, 5), shapes::circle({0, 0}, 0.25)},
      {CurveRole::Outer, CurveRole::Hole}, 300,
      SamplingStrategy::LengthDependent);
  for (const auto* bp : {&cap, &hole}) {
    ParamMap pm(bp->mesh);
    std::set<int> curves_seen;
    for (const Point2& p : random_interior_points(pm, 1000, 23)) {
      ParamPoint q = pm.to_param(p);
      REQUIRE(q.theta >= 0.0);
      REQUIRE(q.theta < 1.0);
      REQUIRE(q.r >= -1e-9);
      REQUIRE(q.r <= 1.0 + 1e-9);
      curves_seen.insert(q.curve_id);
      ParamPoint clamped{q.curve_id, q.theta,
                         std::min(1.0, std::max(0.0, q.r))};
      REQUIRE(dist(pm.eval_param(clamped), p) <= 1e-9);
    }
    REQUIRE(curves_seen.size() == bp->mesh.loop_range.size());
  }

  // Boundary edge interior maps to r = 1; spine vertices map to r = 0.
  ParamMap pm(cap.mesh);
  Point2 onb = lerp(cap.mesh.bverts[3].pos, cap.mesh.bverts[4].pos, 0.4);
  REQUIRE(pm.to_param(onb).r == Catch::Approx(1.0).margin(1e-9));
  Point2 ons = cap.mesh.sverts[cap.mesh.sverts.size() / 2];
  REQUIRE(pm.to_param(ons).r == Catch::Approx(0.0).margin(1e-9));

  auto disk = build({shapes::circle({0, 0}, 1.0)}, {CurveRole::Outer}, 36);
  ParamMap pmd(disk.mesh);
  REQUIRE(disk.mesh.sverts.size() == 1);
  ParamPoint pole = pmd.to_param(disk.mesh.sverts[0]);
  REQUIRE(pole.r == Catch::Approx(0.0).margin(1e-12));

  REQUIRE_THROWS_AS(pm.to_param({50, 50}), InversionError);
  REQUIRE_THROWS_AS(pm.eval_param({0, 1.5, 0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(pm.eval_param({0, 0.5, -0.5}), std::invalid_argument);
  REQUIRE_THROWS_AS(pm.eval_param({9, 0.5, 0.5}), std::invalid_argument);
}

TEST_CASE("eval_param pins the boundary and spine rows", "[param]") {
  auto cap = build({shapes::stadium(1.0, 1.0)}, {CurveRole::Outer}, 200);
  ParamMap pm(cap.mesh);
  std::vector<Point2> bpoly;
  for (const auto& b : cap.mesh.bverts) bpoly.push_back(b.pos);
  for (int k = 0; k < 50; k++) {
    double theta = k / 50.0;
    Point2 p = pm.eval_param({0, theta, 1.0});
    REQUIRE(min_dist_to_polyline(p, bpoly, true) <= 1e-9);
  }
  // r = 0 sweeps a quad's spine segment.
  int k = 0;
  auto [lo, hi] = cap.mesh.loop_range[0];
  while (cap.mesh.faces[cap.mesh.face_of_interval[0][k]].n != 4) k++;
  const MeshFace& f = cap.mesh.faces[cap.mesh.face_of_interval[0][k]];
  double t0 = cap.mesh.bverts[lo + k].theta;
  double t1 = lo + k + 1 < hi ? cap.mesh.bverts[lo + k + 1].theta : 1.0;
  Point2 s1 = cap.mesh.pos(f.v[2]), s0 = cap.mesh.pos(f.v[3]);
  for (int j = 1; j < 8; j++) {
    double theta = t0 + (t1 - t0) * j / 8.0;
    Point2 p = pm.eval_param({0, theta, 0.0});
    REQUIRE(medial::detail::dist_point_segment(p, s0, s1) <= 1e-9);
  }
}

TEST_CASE("iso contours trace boundary, spine, and nested rings", "[param]") {
  auto cap = build({shapes::stadium(1.0, 1.0)}, {CurveRole::Outer}, 200);
  ParamMap pm(cap.mesh);

  auto r1 = pm.iso_contour(1.0, 0);
  REQUIRE(r1.size() == 1);
  const auto& ring = r1[0];
  REQUIRE(ring.front() == ring.back());
  REQUIRE(ring.size() == cap.mesh.bverts.size() + 1);
  // Cyclic forward match against the bvert order.
  size_t off = 0;
  while (off < ring.size() - 1 && !(ring[off] == cap.mesh.bverts[0].pos))
    off++;
  REQUIRE(off < ring.size() - 1);
  size_t nb = cap.mesh.bverts.size();
  bool fwd = true, bwd = true;
  for (size_t i = 0; i < nb; i++) {
    if (!(ring[(off + i) % nb] == cap.mesh.bverts[i].pos)) fwd = false;
    if (!(ring[(off + nb - i) % nb] == cap.mesh.bverts[i].pos)) bwd = false;
  }
  REQUIRE((fwd || bwd));

  auto r0 = pm.iso_contour(0.0, 0);
  REQUIRE(r0.size() == 1);
  const auto& spine = r0[0];
  REQUIRE(spine.size() == cap.mesh.sverts.size());
  REQUIRE(spine.front() != spine.back());
  std::set<std::pair<double, double>> seen;
  for (const auto& p : spine) seen.insert({p.x, p.y});
  REQUIRE(seen.size() == cap.mesh.sverts.size());

  auto disk = build({shapes::circle({0, 0}, 1.0)}, {CurveRole::Outer}, 36);
  ParamMap pmd(disk.mesh);
  Point2 pole = disk.mesh.sverts[0];
  auto mid = pmd.iso_contour(0.5, 0);
  REQUIRE(mid.size() == 1);
  REQUIRE(mid[0].front() == mid[0].back());
  REQUIRE(inside_poly(mid[0], pole));
  for (size_t i = 0; i + 1 < mid[0].size(); i++) {
    REQUIRE(winding_number(mid[0][i], disk.domain) == 1);
    REQUIRE(dist(mid[0][i], pole) > 0.1);
  }
  auto inner = pmd.iso_contour(0.3, 0);
  auto outer = pmd.iso_contour(0.7, 0);
  REQUIRE(inner.size() == 1);
  REQUIRE(outer.size() == 1);
  for (size_t i = 0; i + 1 < inner[0].size(); i++)
    REQUIRE(inside_poly(outer[0], inner[0][i]));
  auto center = pmd.iso_contour(0.0, 0);
  REQUIRE(center.size() == 1);
  REQUIRE(center[0].size() == 1);
  REQUIRE(center[0][0] == pole);

  auto ann = build({shapes::circle({0, 0}, 2.0), shapes::circle({0, 0}, 1.0)},
                   {CurveRole::Outer, CurveRole::Hole},
                   64, SamplingStrategy::LengthDependent);
  ParamMap pma(ann.mesh);
  auto ring0 = pma.iso_contour(0.0, 0);
  auto ring1 = pma.iso_contour(0.0, 1);
  REQUIRE(ring0.size() == 1);
  REQUIRE(ring1.size() == 1);
  REQUIRE(ring0[0].front() == ring0[0].back());
  REQUIRE(ring1[0].front() == ring1[0].back());
  std::set<std::pair<double, double>> s0set, s1set;
  for (const auto& p : ring0[0]) s0set.insert({p.x, p.y});
  for (const auto& p : ring1[0]) s1set.insert({p.x, p.y});
  REQUIRE(s0set == s1set);
}

TEST_CASE("disk parametrization matches polar coordinates", "[param]") {
  auto disk = build({shapes::circle({0, 0}, 1.0)}, {CurveRole::Outer}, 36);
  ParamMap pm(disk.mesh);
  Point2 pole = disk.mesh.sverts[0];
  double reff = 0.0;
  for (const auto& b : disk.mesh.bverts) reff += dist(b.pos, pole);
  reff /= disk.mesh.bverts.size();
  for (const Point2& p : random_interior_points(pm, 1000, 31)) {
    double rc = pm.to_param(p).r;
    REQUIRE(std::fabs(rc - dist(p, pole) / reff) <= 0.05);
  }
}
