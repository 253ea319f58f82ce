#include <algorithm>
#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "medialparam/curve.hpp"
#include "medialparam/dipole.hpp"
#include "medialparam/shapes.hpp"
#include "medialparam/voronoi.hpp"

using namespace medial;

namespace {

int find_vertex(const VoronoiTess& t, Point2 p, double tol = 1e-12) {
  for (size_t i = 0; i < t.verts.size(); i++)
    if (dist(t.verts[i], p) <= tol) return static_cast<int>(i);
  return -1;
}

double cell_area(const VoronoiTess& t, int c) {
  const auto& loop = t.cells[c];
  double s = 0.0;
  for (size_t i = 0; i < loop.size(); i++) {
    const Point2& p = t.verts[loop[i]];
    const Point2& q = t.verts[loop[(i + 1) % loop.size()]];
    s += p.x * q.y - q.x * p.y;
  }
  return 0.5 * s;
}

std::set<std::pair<int, int>> delaunay_edge_set(const Triangulation& T) {
  std::set<std::pair<int, int>> es;
  for (const auto& t : T.tris)
    for (int e = 0; e < 3; e++)
      es.insert(std::minmax(t[e], t[(e + 1) % 3]));
  return es;
}

// Liang-Barsky: does segment (a,b) cross the box with positive length?
bool segment_visible(Point2 a, Point2 b, const Box2& f) {
  double t0 = 0.0, t1 = 1.0;
  double dx = b.x - a.x, dy = b.y - a.y;
  auto clip = [&](double p, double q) {
    if (p == 0.0) return q >= 0.0;
    double r = q / p;
    if (p < 0.0) {
      if (r > t1) return false;
      if (r > t0) t0 = r;
    } else {
      if (r < t0) return false;
      if (r < t1) t1 = r;
    }
    return true;
  };
  if (!clip(-dx, a.x - f.lo.x)) return false;
  if (!clip(dx, f.hi.x - a.x)) return false;
  if (!clip(-dy, a.y - f.lo.y)) return false;
  if (!clip(dy, f.hi.y - a.y)) return false;
  return t1 - t0 > 1e-12;
}

}  // namespace

TEST_CASE("three sites expose the circumcenter", "[voronoi]") {
  std::vector<Point2> sites = {{0, 0}, {1, 0}, {0, 1}};
  auto T = delaunay(sites, 7);
  auto vor = voronoi_dual(T, 2.0);

  REQUIRE(vor.cells.size() == 3);
  int cc = find_vertex(vor, {0.5, 0.5});
  REQUIRE(cc >= 0);

  // The circumcenter belongs to all three cells.
  for (int c = 0; c < 3; c++) {
    const auto& loop = vor.cells[c];
    REQUIRE(std::find(loop.begin(), loop.end(), cc) != loop.end());
  }
  auto rep = verify_voronoi(vor, sites);
  CAPTURE(rep.detail);
  REQUIRE(rep.pass);
}

TEST_CASE("unit square splits its frame into four equal quadrants",
          "[voronoi]") {
  std::vector<Point2> sites = {{0, 0}, {1, 0}, {1, 1}, {0, 1}};
  auto T = delaunay(sites, 3);
  auto vor = voronoi_dual(T, 2.0);

  REQUIRE(vor.frame.lo == Point2{-0.5, -0.5});
  REQUIRE(vor.frame.hi == Point2{1.5, 1.5});
  REQUIRE(find_vertex(vor, {0.5, 0.5}) >= 0);
  REQUIRE(vor.verts.size() == 9);  // 4 corners, 4 side midpoints, 1 center

  for (int c = 0; c < 4; c++) {
    REQUIRE(vor.cells[c].size() == 4);
    REQUIRE(cell_area(vor, c) == Catch::Approx(1.0).margin(1e-12));
  }

  int interior = 0, rim = 0;
  for (const auto& e : vor.edges) {
    if (e.cell_right >= 0)
      interior++;
    else
      rim++;
  }
  REQUIRE(interior == 4);
  REQUIRE(rim == 8);

  auto rep = verify_voronoi(vor, sites);
  REQUIRE(rep.pass);
}

TEST_CASE("interior edges are dual to delaunay edges", "[voronoi]") {
  // Perturbed grid: a Delaunay edge appears as a Voronoi edge between the
  // two cells exactly when its dual segment or ray crosses the frame.
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> jit(-0.2, 0.2);
  std::vector<Point2> sites;
  for (int i = 0; i < 8; i++)
    for (int j = 0; j < 8; j++)
      sites.push_back({i + jit(rng), j + jit(rng)});

  auto T = delaunay(sites, 5);
  auto vor = voronoi_dual(T, 3.0);
  auto dedges = delaunay_edge_set(T);

  std::set<std::pair<int, int>> pairs;
  for (const auto& e : vor.edges) {
    if (e.cell_right < 0) continue;
    auto key = std::minmax(e.cell_left, e.cell_right);
    REQUIRE(dedges.count(key) == 1);
    REQUIRE(pairs.insert(key).second);  // no duplicated dual pair
  }

  // Recover each Delaunay edge's dual geometry from the triangulation.
  std::map<std::pair<int, int>, int> owner;
  for (size_t t = 0; t < T.tris.size(); t++)
    for (int e = 0; e < 3; e++)
      owner[{T.tris[t][e], T.tris[t][(e + 1) % 3]}] = static_cast<int>(t);
  auto cc_of = [&](int t) {
    return medial::detail::circumcenter(T.sites[T.tris[t][0]],
                                        T.sites[T.tris[t][1]],
                                        T.sites[T.tris[t][2]]);
  };
  int invisible = 0;
  for (const auto& de : dedges) {
    auto [u, w] = de;
    auto fwd = owner.find({u, w});
    auto rev = owner.find({w, u});
    Point2 a, b;
    if (fwd != owner.end() && rev != owner.end()) {
      a = cc_of(fwd->second);
      b = cc_of(rev->second);
    } else {
      // Hull edge: ray outward from the lone adjacent circumcenter.
      int t = fwd != owner.end() ? fwd->second : rev->second;
      int from = fwd != owner.end() ? u : w;
      int to = fwd != owner.end() ? w : u;
      a = cc_of(t);
      Vec2 d = normalized(perp_right(T.sites[to] - T.sites[from]));
      b = a + d * (100.0 * vor.frame.diag());
    }
    bool visible = segment_visible(a, b, vor.frame);
    CAPTURE(u, w, visible);
    REQUIRE(pairs.count(de) == (visible ? 1u : 0u));
    if (!visible) invisible++;
  }
  REQUIRE(pairs.size() + invisible == dedges.size());

  auto rep = verify_voronoi(vor, sites);
  CAPTURE(rep.detail, rep.max_equidist_rel, rep.max_encroach_rel);
  REQUIRE(rep.pass);
}

TEST_CASE("random site sets verify across seeds", "[voronoi]") {
  for (unsigned seed : {11u, 22u, 33u}) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(-3.0, 3.0);
    std::vector<Point2> sites;
    for (int i = 0; i < 120; i++) sites.push_back({uni(rng), uni(rng)});

    auto T = delaunay(sites, seed);
    auto vor = voronoi_dual(T, 2.0);
    REQUIRE(vor.cells.size() == sites.size());

    auto rep = verify_voronoi(vor, sites);
    CAPTURE(seed, rep.detail);
    REQUIRE(rep.pass);
    REQUIRE(rep.checked > 0);
  }
}

TEST_CASE("verification catches an injected fault", "[voronoi]") {
  std::vector<Point2> sites = {{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0.4, 0.6}};
  auto T = delaunay(sites, 1);
  auto vor = voronoi_dual(T, 2.0);
  REQUIRE(verify_voronoi(vor, sites).pass);

  // Nudge one interior vertex off its circumcenter.
  for (size_t i = 0; i < vor.verts.size(); i++) {
    if (vor.frame.contains_strict(vor.verts[i])) {
      vor.verts[i].x += 1e-5;
      break;
    }
  }
  REQUIRE_FALSE(verify_voronoi(vor, sites).pass);
}

TEST_CASE("collinear hull chains clip cleanly", "[voronoi]") {
  // Bottom row is exactly collinear, so hull sites there have parallel dual
  // rays and an empty far cap.
  std::vector<Point2> sites;
  for (int i = 0; i <= 6; i++) sites.push_back({double(i), 0.0});
  for (int i = 0; i <= 6; i++) sites.push_back({double(i), 1.0 + 0.05 * i});
  sites.push_back({3.0, 2.5});

  auto T = delaunay(sites, 17);
  auto vor = voronoi_dual(T, 2.0);
  auto rep = verify_voronoi(vor, sites);
  CAPTURE(rep.detail);
  REQUIRE(rep.pass);
}

TEST_CASE("dipole ring tessellation verifies", "[voronoi]") {
  auto domain =
      make_domain({shapes::circle({0, 0}, 1.0)}, {CurveRole::Outer});
  auto samples = sample_domain(domain, SamplingStrategy::EqualCount, 36);
  auto dip = make_dipoles(samples, domain, 0.1);
  auto sset = collect_sites(dip);

  auto T = delaunay(sset, 42);
  auto vor = voronoi_dual(T, 2.0);
  REQUIRE(vor.cells.size() == 72);

  auto rep = verify_voronoi(vor, sset.pos);
  CAPTURE(rep.detail, rep.max_equidist_rel);
  REQUIRE(rep.pass);

  // Bitwise determinism across a full rebuild.
  auto T2 = delaunay(sset, 42);
  auto vor2 = voronoi_dual(T2, 2.0);
  REQUIRE(vor2.verts.size() == vor.verts.size());
  for (size_t i = 0; i < vor.verts.size(); i++)
    REQUIRE((vor2.verts[i] == vor.verts[i]));
  REQUIRE(vor2.cells == vor.cells);
}

TEST_CASE("frame scale is validated", "[voronoi]") {
  std::vector<Point2> sites = {{0, 0}, {1, 0}, {0, 1}};
  auto T = delaunay(sites, 7);
  REQUIRE_THROWS_AS(voronoi_dual(T, 1.0), std::invalid_argument);
}
