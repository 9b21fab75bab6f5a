// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstddef>
#include <vector>

namespace tagplan::geom {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  Vec2() = default;
  Vec2(double x_, double y_) : x(x_), y(y_) {}

  Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  Vec2 operator*(double s) const { return {x * s, y * s}; }
  bool operator==(const Vec2& o) const { return x == o.x && y == o.y; }

  double dot(const Vec2& o) const { return x * o.x + y * o.y; }
  double cross(const Vec2& o) const { return x * o.y - y * o.x; }
  double norm() const;
  Vec2 normalized() const;
};

/// Simple polygon, vertices in counter-clockwise order, no repeated closing
/// vertex.
struct Polygon {
  std::vector<Vec2> pts;

  Polygon() = default;
  explicit Polygon(std::vector<Vec2> p) : pts(std::move(p)) {}

  std::size_t size() const { return pts.size(); }
};

/// Signed area (positive for CCW vertex order).
double signed_area(const Polygon& poly);
double area(const Polygon& poly);
double perimeter(const Polygon& poly);
Vec2 centroid(const Polygon& poly);

/// Reverses vertex order if needed so the polygon is CCW.
void normalize_ccw(Polygon& poly);

/// True if the polygon has >= 3 vertices and no two non-adjacent edges
/// intersect or touch.
bool is_simple(const Polygon& poly);

/// Uniform scaling about the area centroid.
Polygon scale_about_centroid(const Polygon& poly, double factor);

struct Bbox {
  double min_x = 0, min_y = 0, max_x = 0, max_y = 0;
};
Bbox bbox(const Polygon& poly);

/// Sign of the orientation of (a, b, c): +1 counter-clockwise, -1 clockwise,
/// 0 collinear. A floating-point filter maps results within rounding noise
/// of zero to 0, so near-degenerate inputs are treated as degenerate.
int orientation(const Vec2& a, const Vec2& b, const Vec2& c);

/// True if c lies on the closed segment [a, b] (assumes collinearity).
bool on_segment(const Vec2& a, const Vec2& b, const Vec2& c);

/// True if closed segments [p, q] and [a, b] share any point, including
/// endpoint touches and collinear overlap.
bool segments_touch(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b);

enum class PointLocation { Inside, Boundary, Outside };
PointLocation locate_point(const Vec2& pt, const Polygon& poly);

inline bool strictly_inside(const Vec2& pt, const Polygon& poly) {
  return locate_point(pt, poly) == PointLocation::Inside;
}

}  // namespace tagplan::geom
