// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/geometry.hpp"

#include <algorithm>
#include <cmath>

namespace tagplan::geom {

double Vec2::norm() const { return std::hypot(x, y); }

Vec2 Vec2::normalized() const {
  const double n = norm();
  return n > 0.0 ? Vec2{x / n, y / n} : Vec2{0.0, 0.0};
}

double signed_area(const Polygon& poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly.pts[i];
    const Vec2& b = poly.pts[(i + 1) % n];
    acc += a.cross(b);
  }
  return 0.5 * acc;
}

double area(const Polygon& poly) { return std::abs(signed_area(poly)); }

double perimeter(const Polygon& poly) {
  double acc = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) acc += (poly.pts[(i + 1) % n] - poly.pts[i]).norm();
  return acc;
}

Vec2 centroid(const Polygon& poly) {
  // Area centroid via the shoelace decomposition.
  double a2 = 0.0, cx = 0.0, cy = 0.0;
  const std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& p = poly.pts[i];
    const Vec2& q = poly.pts[(i + 1) % n];
    const double w = p.cross(q);
    a2 += w;
    cx += (p.x + q.x) * w;
    cy += (p.y + q.y) * w;
  }
  if (std::abs(a2) < 1e-30) {
    // Degenerate: fall back to vertex mean.
    Vec2 m{0, 0};
    for (const Vec2& p : poly.pts) m = m + p;
    return m * (1.0 / static_cast<double>(n));
  }
  return {cx / (3.0 * a2), cy / (3.0 * a2)};
}

void normalize_ccw(Polygon& poly) {
  if (signed_area(poly) < 0.0) std::reverse(poly.pts.begin(), poly.pts.end());
}

int orientation(const Vec2& a, const Vec2& b, const Vec2& c) {
  const double l = (b.x - a.x) * (c.y - a.y);
  const double r = (b.y - a.y) * (c.x - a.x);
  const double det = l - r;
  const double mag = std::abs(l) + std::abs(r);
  // 2^-50 absorbs the rounding of the four subtractions and two products;
  // anything inside the band counts as collinear (conservative for the
  // occlusion tests built on top).
  if (std::abs(det) <= mag * 8.8817841970012523e-16) return 0;
  return det > 0.0 ? 1 : -1;
}

bool on_segment(const Vec2& a, const Vec2& b, const Vec2& c) {
  return std::min(a.x, b.x) <= c.x && c.x <= std::max(a.x, b.x) &&
         std::min(a.y, b.y) <= c.y && c.y <= std::max(a.y, b.y);
}

bool segments_touch(const Vec2& p, const Vec2& q, const Vec2& a, const Vec2& b) {
  const int d1 = orientation(a, b, p);
  const int d2 = orientation(a, b, q);
  const int d3 = orientation(p, q, a);
  const int d4 = orientation(p, q, b);
  if (d1 * d2 < 0 && d3 * d4 < 0) return true;  // proper crossing
  if (d1 == 0 && on_segment(a, b, p)) return true;
  if (d2 == 0 && on_segment(a, b, q)) return true;
  if (d3 == 0 && on_segment(p, q, a)) return true;
  if (d4 == 0 && on_segment(p, q, b)) return true;
  return false;
}

bool is_simple(const Polygon& poly) {
  const std::size_t n = poly.size();
  if (n < 3) return false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a0 = poly.pts[i];
    const Vec2& a1 = poly.pts[(i + 1) % n];
    if (a0 == a1) return false;  // zero-length edge
    for (std::size_t j = i + 1; j < n; ++j) {
      const bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
      if (adjacent) continue;
      const Vec2& b0 = poly.pts[j];
      const Vec2& b1 = poly.pts[(j + 1) % n];
      if (segments_touch(a0, a1, b0, b1)) return false;
    }
  }
  return true;
}

Polygon scale_about_centroid(const Polygon& poly, double factor) {
  const Vec2 c = centroid(poly);
  Polygon out = poly;
  for (Vec2& p : out.pts) p = c + (p - c) * factor;
  return out;
}

Bbox bbox(const Polygon& poly) {
  Bbox b{poly.pts[0].x, poly.pts[0].y, poly.pts[0].x, poly.pts[0].y};
  for (const Vec2& p : poly.pts) {
    b.min_x = std::min(b.min_x, p.x);
    b.min_y = std::min(b.min_y, p.y);
    b.max_x = std::max(b.max_x, p.x);
    b.max_y = std::max(b.max_y, p.y);
  }
  return b;
}

PointLocation locate_point(const Vec2& pt, const Polygon& poly) {
  const std::size_t n = poly.size();
  bool inside = false;
  for (std::size_t i = 0; i < n; ++i) {
    const Vec2& a = poly.pts[i];
    const Vec2& b = poly.pts[(i + 1) % n];
    if (orientation(a, b, pt) == 0 && on_segment(a, b, pt)) return PointLocation::Boundary;
    // Half-open crossing rule; each vertex counts for exactly one edge.
    if ((a.y > pt.y) != (b.y > pt.y)) {
      const double x_cross = a.x + (pt.y - a.y) / (b.y - a.y) * (b.x - a.x);
      if (pt.x < x_cross) inside = !inside;
    }
  }
  return inside ? PointLocation::Inside : PointLocation::Outside;
}

}  // namespace tagplan::geom
