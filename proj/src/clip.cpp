// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/clip.hpp"

#include <boost/geometry.hpp>
#include <boost/geometry/geometries/box.hpp>
#include <boost/geometry/geometries/point_xy.hpp>
#include <boost/geometry/geometries/polygon.hpp>

#include <limits>

namespace tagplan::geom {

namespace bg = boost::geometry;
using BPoint = bg::model::d2::point_xy<double>;
using BPoly = bg::model::polygon<BPoint, /*ClockWise=*/false, /*Closed=*/true>;
using BMulti = bg::model::multi_polygon<BPoly>;
using BBoxT = bg::model::box<BPoint>;

namespace {

BPoly to_boost(const Polygon& p) {
  BPoly out;
  for (const Vec2& v : p.pts) bg::append(out.outer(), BPoint(v.x, v.y));
  bg::correct(out);
  return out;
}

Polygon ring_to_polygon(const BPoly::ring_type& ring) {
  Polygon p;
  p.pts.reserve(ring.size());
  for (std::size_t i = 0; i + 1 < ring.size(); ++i)  // drop the closing vertex
    p.pts.emplace_back(bg::get<0>(ring[i]), bg::get<1>(ring[i]));
  normalize_ccw(p);
  return p;
}

// Splits a polygon that may carry interior rings into hole-free pieces by
// cutting along a vertical line through its first hole. Every cut removes at
// least that hole, so recursion depth is bounded by the hole count.
void split_holes(const BPoly& poly, double min_area, std::vector<Polygon>& out) {
  if (poly.inners().empty()) {
    Polygon p = ring_to_polygon(poly.outer());
    if (p.size() >= 3 && area(p) > min_area) out.push_back(std::move(p));
    return;
  }

  const auto& hole = poly.inners().front();
  double hx_min = std::numeric_limits<double>::max();
  double hx_max = std::numeric_limits<double>::lowest();
  for (const BPoint& pt : hole) {
    hx_min = std::min(hx_min, bg::get<0>(pt));
    hx_max = std::max(hx_max, bg::get<0>(pt));
  }
  const double x_cut = 0.5 * (hx_min + hx_max);

  BBoxT outer_box;
  bg::envelope(poly, outer_box);
  const double pad = 1.0;
  const BBoxT left(BPoint(bg::get<bg::min_corner, 0>(outer_box) - pad,
                          bg::get<bg::min_corner, 1>(outer_box) - pad),
                   BPoint(x_cut, bg::get<bg::max_corner, 1>(outer_box) + pad));
  const BBoxT right(BPoint(x_cut, bg::get<bg::min_corner, 1>(outer_box) - pad),
                    BPoint(bg::get<bg::max_corner, 0>(outer_box) + pad,
                           bg::get<bg::max_corner, 1>(outer_box) + pad));

  for (const BBoxT& half : {left, right}) {
    BMulti clipped;
    bg::intersection(poly, half, clipped);
    for (const BPoly& piece : clipped) split_holes(piece, min_area, out);
  }
}

}  // namespace

std::vector<Polygon> polygon_difference(const Polygon& base,
                                        const std::vector<Polygon>& subtrahends,
                                        double min_area) {
  BMulti current;
  current.push_back(to_boost(base));
  for (const Polygon& s : subtrahends) {
    BMulti next;
    bg::difference(current, to_boost(s), next);
    current = std::move(next);
    if (current.empty()) break;
  }
  std::vector<Polygon> out;
  for (const BPoly& piece : current) split_holes(piece, min_area, out);
  return out;
}

double intersection_area(const Polygon& a, const Polygon& b) {
  BMulti overlap;
  bg::intersection(to_boost(a), to_boost(b), overlap);
  return bg::area(overlap);
}

}  // namespace tagplan::geom
