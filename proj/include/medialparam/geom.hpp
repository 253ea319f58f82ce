#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace medial {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  Point2() = default;
  Point2(double px, double py) : x(px), y(py) {}

  Point2 operator+(const Point2& o) const { return {x + o.x, y + o.y}; }
  Point2 operator-(const Point2& o) const { return {x - o.x, y - o.y}; }
  Point2 operator*(double s) const { return {x * s, y * s}; }
  Point2 operator/(double s) const { return {x / s, y / s}; }
  Point2 operator-() const { return {-x, -y}; }
  Point2& operator+=(const Point2& o) { x += o.x; y += o.y; return *this; }
  Point2& operator-=(const Point2& o) { x -= o.x; y -= o.y; return *this; }
  bool operator==(const Point2& o) const { return x == o.x && y == o.y; }
  bool operator!=(const Point2& o) const { return !(*this == o); }
};

using Vec2 = Point2;

inline Point2 operator*(double s, const Point2& p) { return {s * p.x, s * p.y}; }

inline double dot(const Vec2& a, const Vec2& b) { return a.x * b.x + a.y * b.y; }
inline double cross(const Vec2& a, const Vec2& b) { return a.x * b.y - a.y * b.x; }
inline double norm2(const Vec2& a) { return a.x * a.x + a.y * a.y; }
inline double norm(const Vec2& a) { return std::hypot(a.x, a.y); }
inline double dist(const Point2& a, const Point2& b) { return norm(a - b); }
inline double dist2(const Point2& a, const Point2& b) { return norm2(a - b); }

// Counterclockwise quarter turn.
inline Vec2 perp_left(const Vec2& a) { return {-a.y, a.x}; }
// Clockwise quarter turn.
inline Vec2 perp_right(const Vec2& a) { return {a.y, -a.x}; }

inline Vec2 normalized(const Vec2& a) {
  double n = norm(a);
  return {a.x / n, a.y / n};
}

inline Point2 lerp(const Point2& a, const Point2& b, double t) {
  return {a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)};
}

struct Box2 {
  Point2 lo{std::numeric_limits<double>::infinity(),
            std::numeric_limits<double>::infinity()};
  Point2 hi{-std::numeric_limits<double>::infinity(),
            -std::numeric_limits<double>::infinity()};

  void expand(const Point2& p) {
    lo.x = std::min(lo.x, p.x);
    lo.y = std::min(lo.y, p.y);
    hi.x = std::max(hi.x, p.x);
    hi.y = std::max(hi.y, p.y);
  }
  void expand(const Box2& b) {
    expand(b.lo);
    expand(b.hi);
  }
  bool valid() const { return lo.x <= hi.x && lo.y <= hi.y; }
  Point2 center() const { return {(lo.x + hi.x) * 0.5, (lo.y + hi.y) * 0.5}; }
  double width() const { return hi.x - lo.x; }
  double height() const { return hi.y - lo.y; }
  double diag() const { return norm(hi - lo); }
  bool contains(const Point2& p) const {
    return p.x >= lo.x && p.x <= hi.x && p.y >= lo.y && p.y <= hi.y;
  }
  bool contains_strict(const Point2& p) const {
    return p.x > lo.x && p.x < hi.x && p.y > lo.y && p.y < hi.y;
  }
  bool overlaps(const Box2& b) const {
    return lo.x <= b.hi.x && b.lo.x <= hi.x && lo.y <= b.hi.y && b.lo.y <= hi.y;
  }
  Box2 scaled_about_center(double f) const {
    Point2 c = center();
    Vec2 half = (hi - lo) * (0.5 * f);
    return {c - half, c + half};
  }
  double area() const { return width() * height(); }
};

// All pipeline failures derive from this; `stage` names the step that gave up
// so the CLI can report where a bad input died.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(std::string stage, const std::string& msg)
      : std::runtime_error(stage + ": " + msg), stage_(std::move(stage)) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

class ValidationError : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class ClearanceError : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class DegenerateSitesError : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class TopologyError : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class FaceStructureError : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class InversionError : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

class AmbiguousPointError : public PipelineError {
 public:
  using PipelineError::PipelineError;
};

}  // namespace medial
