#pragma once

// Dipole construction: every boundary sample spawns a site pair straddling
// the curve at offset delta_i = alpha * min(adjacent chord lengths), placed
// along the sample normal so the sample's tangent line bisects the pair.

#include <algorithm>
#include <numeric>
#include <string>
#include <vector>

#include "medialparam/curve.hpp"

namespace medial {

struct Dipole {
  Point2 inner;   // inside the domain
  Point2 outer;   // outside the domain
  double offset = 0.0;
  int sample_idx = -1;
};

inline std::vector<Dipole> make_dipoles(const std::vector<Sample>& samples,
                                        const DomainSpec& domain,
                                        double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.25))
    throw std::invalid_argument("make_dipoles: alpha must be in (0, 0.25]");
  if (samples.empty())
    throw std::invalid_argument("make_dipoles: no samples");

  // Cyclic neighbor indices within each curve's contiguous sample block.
  size_t n = samples.size();
  std::vector<int> prev(n), next(n);
  size_t start = 0;
  while (start < n) {
    size_t end = start;
    while (end < n && samples[end].curve_id == samples[start].curve_id) end++;
    size_t m = end - start;
    if (m < 3)
      throw ClearanceError("dipole",
                           "curve " + std::to_string(samples[start].curve_id) +
                               " has fewer than 3 samples");
    for (size_t k = start; k < end; k++) {
      prev[k] = static_cast<int>(start + (k - start + m - 1) % m);
      next[k] = static_cast<int>(start + (k - start + 1) % m);
    }
    start = end;
  }

  std::vector<Dipole> out;
  out.reserve(n);
  for (size_t i = 0; i < n; i++) {
    const Point2& p = samples[i].position;
    const Point2& pp = samples[prev[i]].position;
    const Point2& pn = samples[next[i]].position;
    double c1 = dist(p, pp), c2 = dist(pn, p);
    double delta = alpha * std::min(c1, c2);
    if (!(delta > 0.0))
      throw DegenerateSitesError(
          "dipole", "coincident samples around sample " + std::to_string(i));
    // Separation condition: the pair must be well inside the gap between the
    // neighboring samples ("<<" pinned as a factor of 4 safety margin).
    double span = dist(pn, pp);
    if (!(2.0 * delta <= 0.25 * span))
      throw ClearanceError("dipole",
                           "samples around " + std::to_string(i) +
                               " turn too sharply for offset " +
                               std::to_string(delta));
    Vec2 nrm = perp_left(samples[i].tangent);  // interior is left of travel
    Dipole d;
    d.inner = p + nrm * delta;
    d.outer = p - nrm * delta;
    d.offset = delta;
    d.sample_idx = static_cast<int>(i);
    if (winding_number(d.inner, domain) != 1)
      throw ClearanceError("dipole", "inner site of sample " +
                                         std::to_string(i) +
                                         " fell outside the domain");
    if (winding_number(d.outer, domain) != 0)
      throw ClearanceError("dipole", "outer site of sample " +
                                         std::to_string(i) +
                                         " fell inside the domain");
    out.push_back(d);
  }
  return out;
}

// Flat site list for the tessellation: sites 2i / 2i+1 are the inner / outer
// points of dipole i.
struct SiteSet {
  std::vector<Point2> pos;
  std::vector<int> sample_idx;   // per site
  std::vector<char> is_inner;    // per site

  size_t size() const { return pos.size(); }
};

inline SiteSet collect_sites(const std::vector<Dipole>& dipoles) {
  SiteSet s;
  s.pos.reserve(dipoles.size() * 2);
  for (const auto& d : dipoles) {
    s.pos.push_back(d.inner);
    s.sample_idx.push_back(d.sample_idx);
    s.is_inner.push_back(1);
    s.pos.push_back(d.outer);
    s.sample_idx.push_back(d.sample_idx);
    s.is_inner.push_back(0);
  }
  std::vector<int> order(s.pos.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (s.pos[a].x != s.pos[b].x) return s.pos[a].x < s.pos[b].x;
    return s.pos[a].y < s.pos[b].y;
  });
  for (size_t k = 1; k < order.size(); k++) {
    if (s.pos[order[k]] == s.pos[order[k - 1]])
      throw DegenerateSitesError(
          "sites", "sites " + std::to_string(order[k - 1]) + " and " +
                       std::to_string(order[k]) + " coincide");
  }
  return s;
}

}  // namespace medial
