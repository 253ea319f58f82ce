#pragma once

// Delaunay triangulation by incremental insertion (Bowyer-Watson) with
// ghost triangles standing in for the unbounded face.  All point-vs-disk
// decisions go through the exact predicates, so the combinatorics are exact;
// the insertion order is shuffled by a caller-supplied seed and the result
// canonicalized, making the output a pure function of (sites, seed).
//
// Ghost convention: a ghost triangle (u, w, GHOST) stores the hull edge
// directed so the exterior is on the LEFT of u->w.  Its "circumdisk" is the
// open half plane strictly left of (u, w) plus the open segment (u, w),
// which is the limit of the circumdisk of (u, w, far point).

#include <algorithm>
#include <array>
#include <cstdint>
#include <numeric>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "medialparam/dipole.hpp"
#include "medialparam/geom.hpp"
#include "medialparam/predicates.hpp"

namespace medial {

struct Triangulation {
  std::vector<Point2> sites;
  std::vector<std::array<int, 3>> tris;  // CCW, canonical order
  std::vector<std::array<int, 3>> adj;   // adj[t][k]: across edge opposite
                                         // vertex k; -1 past the hull
  std::vector<std::array<int, 2>> hull;  // directed hull edges, interior left
  std::uint64_t seed = 0;
};

namespace detail {

class BowyerWatson {
 public:
  static constexpr int kGhost = -1;

  explicit BowyerWatson(const std::vector<Point2>& pts) : pts_(pts) {}

  void run(std::uint64_t seed) {
    size_t n = pts_.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    // Seed triangle: first non-collinear triple in shuffled order.
    size_t k = 2;
    while (k < n &&
           orient2d(pts_[order[0]], pts_[order[1]], pts_[order[k]]) == 0)
      k++;
    if (k >= n)
      throw DegenerateSitesError("delaunay", "all sites are collinear");
    int a = order[0], b = order[1], c = order[k];
    if (orient2d(pts_[a], pts_[b], pts_[c]) < 0) std::swap(b, c);
    add_tri(a, b, c);
    add_tri(b, a, kGhost);
    add_tri(c, b, kGhost);
    add_tri(a, c, kGhost);
    order.erase(order.begin() + k);
    order.erase(order.begin(), order.begin() + 2);
    for (int idx : order) insert(idx);
  }

  Triangulation finalize(std::uint64_t seed) {
    Triangulation T;
    T.sites = pts_;
    T.seed = seed;
    for (const auto& t : tris_)
      if (t.alive && t.v[2] != kGhost) {
        std::array<int, 3> tri = {t.v[0], t.v[1], t.v[2]};
        int mi = static_cast<int>(
            std::min_element(tri.begin(), tri.end()) - tri.begin());
        std::rotate(tri.begin(), tri.begin() + mi, tri.end());
        T.tris.push_back(tri);
      }
    std::sort(T.tris.begin(), T.tris.end());

    std::unordered_map<std::uint64_t, int> owner;
    for (size_t t = 0; t < T.tris.size(); t++)
      for (int e = 0; e < 3; e++)
        owner[ekey(T.tris[t][e], T.tris[t][(e + 1) % 3])] =
            static_cast<int>(t);
    T.adj.resize(T.tris.size());
    for (size_t t = 0; t < T.tris.size(); t++)
      for (int e = 0; e < 3; e++) {
        int u = T.tris[t][(e + 1) % 3], w = T.tris[t][(e + 2) % 3];
        auto it = owner.find(ekey(w, u));
        T.adj[t][e] = (it == owner.end()) ? -1 : it->second;
        if (it == owner.end()) T.hull.push_back({u, w});
      }
    std::sort(T.hull.begin(), T.hull.end());
    return T;
  }

 private:
  struct Tri {
    std::array<int, 3> v;
    bool alive;
  };

  static std::uint64_t ekey(int u, int w) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(u + 1))
            << 32) |
           static_cast<std::uint32_t>(w + 1);
  }

  void add_tri(int a, int b, int c) {
    int id = static_cast<int>(tris_.size());
    tris_.push_back({{a, b, c}, true});
    edge_owner_[ekey(a, b)] = id;
    edge_owner_[ekey(b, c)] = id;
    edge_owner_[ekey(c, a)] = id;
  }

  void kill_tri(int id) {
    Tri& t = tris_[id];
    t.alive = false;
    edge_owner_.erase(ekey(t.v[0], t.v[1]));
    edge_owner_.erase(ekey(t.v[1], t.v[2]));
    edge_owner_.erase(ekey(t.v[2], t.v[0]));
  }

  static bool strictly_between(const Point2& a, const Point2& b,
                               const Point2& p) {
    if (std::fabs(b.x - a.x) >= std::fabs(b.y - a.y)) {
      return (a.x < p.x && p.x < b.x) || (b.x < p.x && p.x < a.x);
    }
    return (a.y < p.y && p.y < b.y) || (b.y < p.y && p.y < a.y);
  }

  bool in_disk(const Tri& t, const Point2& p) const {
    if (t.v[2] == kGhost) {
      const Point2& u = pts_[t.v[0]];
      const Point2& w = pts_[t.v[1]];
      int o = orient2d(u, w, p);
      if (o != 0) return o > 0;
      return strictly_between(u, w, p);
    }
    return incircle(pts_[t.v[0]], pts_[t.v[1]], pts_[t.v[2]], p) > 0;
  }

  void insert(int pi) {
    const Point2& p = pts_[pi];
    std::vector<int> cavity;
    std::vector<char> in_cavity(tris_.size(), 0);
    for (size_t t = 0; t < tris_.size(); t++)
      if (tris_[t].alive && in_disk(tris_[t], p)) {
        cavity.push_back(static_cast<int>(t));
        in_cavity[t] = 1;
      }
    if (cavity.empty())
      throw TopologyError("delaunay",
                          "no cavity for site " + std::to_string(pi) +
                              " (internal error)");

    // Directed boundary edges, cavity on the left; (x, y, new point) is the
    // correctly oriented replacement for each.
    std::vector<std::array<int, 2>> boundary;
    for (int t : cavity)
      for (int e = 0; e < 3; e++) {
        int u = tris_[t].v[e], w = tris_[t].v[(e + 1) % 3];
        auto it = edge_owner_.find(ekey(w, u));
        if (it == edge_owner_.end() || !in_cavity[it->second])
          boundary.push_back({u, w});
      }
    for (int t : cavity) kill_tri(t);
    for (const auto& [u, w] : boundary) {
      if (u == kGhost) {
        add_tri(w, pi, kGhost);
      } else if (w == kGhost) {
        add_tri(pi, u, kGhost);
      } else {
        if (orient2d(pts_[u], pts_[w], p) != 1)
          throw TopologyError("delaunay",
                              "degenerate replacement triangle at site " +
                                  std::to_string(pi) + " (internal error)");
        add_tri(u, w, pi);
      }
    }
  }

  const std::vector<Point2>& pts_;
  std::vector<Tri> tris_;
  std::unordered_map<std::uint64_t, int> edge_owner_;
};

}  // namespace detail

inline Triangulation delaunay(const std::vector<Point2>& sites,
                              std::uint64_t seed) {
  if (sites.size() < 3)
    throw DegenerateSitesError("delaunay", "need at least 3 sites");
  {
    std::vector<int> order(sites.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (sites[a].x != sites[b].x) return sites[a].x < sites[b].x;
      return sites[a].y < sites[b].y;
    });
    for (size_t k = 1; k < order.size(); k++)
      if (sites[order[k]] == sites[order[k - 1]])
        throw DegenerateSitesError(
            "delaunay", "sites " + std::to_string(order[k - 1]) + " and " +
                            std::to_string(order[k]) + " coincide");
  }
  detail::BowyerWatson bw(sites);
  bw.run(seed);
  return bw.finalize(seed);
}

inline Triangulation delaunay(const SiteSet& sites, std::uint64_t seed) {
  return delaunay(sites.pos, seed);
}

}  // namespace medial
