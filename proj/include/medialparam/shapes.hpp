#pragma once

// Ready-made G1 Bezier loops: circles, ellipses, stadiums, star blobs and
// filleted polygons.  Arcs use the standard (4/3)tan(sweep/4) control
// distance; analytic curves are fit by Hermite interpolation of position and
// derivative at regular parameter knots.

#include <cmath>
#include <functional>
#include <numbers>
#include <vector>

#include "medialparam/curve.hpp"

namespace medial::shapes {

inline CubicBezier line(const Point2& a, const Point2& b) {
  return {{a, lerp(a, b, 1.0 / 3.0), lerp(a, b, 2.0 / 3.0), b}};
}

// Circular arc around `center`, signed sweep, |sweep| <= pi/2 per piece.
inline CubicBezier arc_piece(const Point2& center, double radius, double phi0,
                             double sweep) {
  double phi1 = phi0 + sweep;
  double k = (4.0 / 3.0) * std::tan(sweep / 4.0) * radius;
  Point2 p0{center.x + radius * std::cos(phi0),
            center.y + radius * std::sin(phi0)};
  Point2 p3{center.x + radius * std::cos(phi1),
            center.y + radius * std::sin(phi1)};
  Vec2 t0{-std::sin(phi0), std::cos(phi0)};
  Vec2 t1{-std::sin(phi1), std::cos(phi1)};
  return {{p0, p0 + t0 * k, p3 - t1 * k, p3}};
}

// Pieces of at most 30 degrees keep the radial error below 1e-6 of the
// radius; quarter-circle pieces would be ~700x worse, which is enough to
// distort the medial structure of arc-bounded domains.
inline std::vector<CubicBezier> arc(const Point2& center, double radius,
                                    double phi0, double sweep) {
  int pieces = std::max(1, static_cast<int>(
                               std::ceil(std::fabs(sweep) / (std::numbers::pi / 6.0) -
                                         1e-12)));
  std::vector<CubicBezier> out;
  double step = sweep / pieces;
  for (int i = 0; i < pieces; i++)
    out.push_back(arc_piece(center, radius, phi0 + i * step, step));
  return out;
}

inline CurveLoop circle(const Point2& center, double radius) {
  return CurveLoop(arc(center, radius, 0.0, 2.0 * std::numbers::pi));
}

inline CurveLoop ellipse(const Point2& center, double rx, double ry,
                         double rotation = 0.0) {
  auto segs = arc({0, 0}, 1.0, 0.0, 2.0 * std::numbers::pi);
  double c = std::cos(rotation), s = std::sin(rotation);
  for (auto& bz : segs)
    for (auto& q : bz.p) {
      double ex = q.x * rx, ey = q.y * ry;
      q = {center.x + c * ex - s * ey, center.y + s * ex + c * ey};
    }
  return CurveLoop(std::move(segs));
}

// Stadium: straight sides y = +-radius for |x| <= half_length, semicircular
// caps centered at (+-half_length, 0).  Counterclockwise.
inline CurveLoop stadium(double half_length, double radius) {
  std::vector<CubicBezier> segs;
  segs.push_back(line({-half_length, -radius}, {half_length, -radius}));
  auto cap1 = arc({half_length, 0.0}, radius, -0.5 * std::numbers::pi,
                  std::numbers::pi);
  segs.insert(segs.end(), cap1.begin(), cap1.end());
  segs.push_back(line({half_length, radius}, {-half_length, radius}));
  auto cap2 = arc({-half_length, 0.0}, radius, 0.5 * std::numbers::pi,
                  std::numbers::pi);
  segs.insert(segs.end(), cap2.begin(), cap2.end());
  return CurveLoop(std::move(segs));
}

// Hermite fit of an analytic closed curve sampled at `knots` parameter
// values over [0, 2*pi).  point(u) and deriv(u) must be 2*pi periodic.
inline CurveLoop analytic_loop(const std::function<Point2(double)>& point,
                               const std::function<Vec2(double)>& deriv,
                               int knots) {
  std::vector<Point2> p(knots);
  std::vector<Vec2> d(knots);
  double step = 2.0 * std::numbers::pi / knots;
  for (int i = 0; i < knots; i++) {
    p[i] = point(i * step);
    d[i] = deriv(i * step);
  }
  std::vector<CubicBezier> segs;
  segs.reserve(knots);
  for (int i = 0; i < knots; i++) {
    int j = (i + 1) % knots;
    segs.push_back(CubicBezier{{p[i], p[i] + d[i] * (step / 3.0),
                                p[j] - d[j] * (step / 3.0), p[j]}});
  }
  return CurveLoop(std::move(segs));
}

// Star-shaped blob r(u) = r0 (1 + amp cos(lobes u)).
inline CurveLoop star(const Point2& center, double r0, double amp, int lobes) {
  auto point = [=](double u) {
    double r = r0 * (1.0 + amp * std::cos(lobes * u));
    return Point2{center.x + r * std::cos(u), center.y + r * std::sin(u)};
  };
  auto deriv = [=](double u) {
    double r = r0 * (1.0 + amp * std::cos(lobes * u));
    double dr = -r0 * amp * lobes * std::sin(lobes * u);
    return Vec2{dr * std::cos(u) - r * std::sin(u),
                dr * std::sin(u) + r * std::cos(u)};
  };
  return analytic_loop(point, deriv, std::max(8, 4 * lobes));
}

// Polygon with circular fillets of radius r at every corner.  Works for
// convex and reflex corners; the polygon must be simple and the fillets must
// fit on their edges.
inline CurveLoop rounded_polygon(const std::vector<Point2>& poly, double r) {
  size_t n = poly.size();
  // Per corner: signed turn angle, fillet tangent points before/after.
  std::vector<double> turn(n);
  std::vector<Point2> fillet_in(n), fillet_out(n);
  for (size_t i = 0; i < n; i++) {
    const Point2& prev = poly[(i + n - 1) % n];
    const Point2& cur = poly[i];
    const Point2& next = poly[(i + 1) % n];
    Vec2 u = normalized(cur - prev);
    Vec2 w = normalized(next - cur);
    turn[i] = std::atan2(cross(u, w), dot(u, w));
    double d = r * std::tan(std::fabs(turn[i]) / 2.0);
    fillet_in[i] = cur - u * d;
    fillet_out[i] = cur + w * d;
  }
  std::vector<CubicBezier> out;
  for (size_t i = 0; i < n; i++) {
    const Point2& prev = poly[(i + n - 1) % n];
    const Point2& cur = poly[i];
    Vec2 u = normalized(cur - prev);
    Point2 o =
        fillet_in[i] + (turn[i] > 0 ? perp_left(u) : perp_right(u)) * r;
    double phi0 = std::atan2(fillet_in[i].y - o.y, fillet_in[i].x - o.x);
    auto fillet = arc(o, r, phi0, turn[i]);
    out.insert(out.end(), fillet.begin(), fillet.end());
    out.push_back(line(fillet_out[i], fillet_in[(i + 1) % n]));
  }
  return CurveLoop(std::move(out));
}

}  // namespace medial::shapes
