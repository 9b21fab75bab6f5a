// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tagplan/clip.hpp"
#include "tagplan/geometry.hpp"
#include "tagplan/rng.hpp"

using namespace tagplan;
using namespace tagplan::geom;

namespace {

Polygon square(double x0, double y0, double side) {
  return Polygon{{{x0, y0}, {x0 + side, y0}, {x0 + side, y0 + side}, {x0, y0 + side}}};
}

}  // namespace

TEST_CASE("area, perimeter, centroid") {
  const Polygon sq = square(0, 0, 4);
  CHECK(signed_area(sq) == doctest::Approx(16.0));
  CHECK(perimeter(sq) == doctest::Approx(16.0));
  const Vec2 c = centroid(sq);
  CHECK(c.x == doctest::Approx(2.0));
  CHECK(c.y == doctest::Approx(2.0));

  Polygon cw = sq;
  std::reverse(cw.pts.begin(), cw.pts.end());
  CHECK(signed_area(cw) == doctest::Approx(-16.0));
  normalize_ccw(cw);
  CHECK(signed_area(cw) == doctest::Approx(16.0));
}

TEST_CASE("is_simple") {
  CHECK(is_simple(square(0, 0, 1)));
  const Polygon bowtie{{{0, 0}, {1, 1}, {1, 0}, {0, 1}}};
  CHECK_FALSE(is_simple(bowtie));
  const Polygon degenerate{{{0, 0}, {1, 0}}};
  CHECK_FALSE(is_simple(degenerate));
}

TEST_CASE("orientation filter treats near-collinear as degenerate") {
  CHECK(orientation({0, 0}, {1, 0}, {2, 1e-3}) == 1);
  CHECK(orientation({0, 0}, {1, 0}, {2, -1e-3}) == -1);
  CHECK(orientation({0, 0}, {1, 0}, {2, 0}) == 0);
  // Rounding-scale deviation collapses to collinear.
  CHECK(orientation({0, 0}, {1e8, 1e8}, {2e8, 2e8 + 1e-7}) == 0);
}

TEST_CASE("segments_touch covers crossing, touching, collinear") {
  CHECK(segments_touch({0, 0}, {2, 2}, {0, 2}, {2, 0}));       // proper cross
  CHECK(segments_touch({0, 0}, {1, 0}, {1, 0}, {2, 5}));       // endpoint touch
  CHECK(segments_touch({0, 0}, {2, 0}, {1, 0}, {1, 3}));       // T contact
  CHECK(segments_touch({0, 0}, {3, 0}, {1, 0}, {2, 0}));       // collinear overlap
  CHECK_FALSE(segments_touch({0, 0}, {1, 0}, {0, 1}, {1, 1}));
}

TEST_CASE("locate_point") {
  const Polygon sq = square(0, 0, 2);
  CHECK(locate_point({1, 1}, sq) == PointLocation::Inside);
  CHECK(locate_point({3, 1}, sq) == PointLocation::Outside);
  CHECK(locate_point({0, 1}, sq) == PointLocation::Boundary);
  CHECK(locate_point({0, 0}, sq) == PointLocation::Boundary);
  CHECK_FALSE(strictly_inside({2, 2}, sq));
}

TEST_CASE("scale about centroid") {
  const Polygon sq = square(1, 1, 2);
  const Polygon big = scale_about_centroid(sq, 1.5);
  CHECK(area(big) == doctest::Approx(4.0 * 2.25));
  const Vec2 c0 = centroid(sq), c1 = centroid(big);
  CHECK((c1 - c0).norm() < 1e-12);
}

TEST_CASE("polygon difference: empty subtrahend") {
  const Polygon roi = square(0, 0, 4);
  const auto out = polygon_difference(roi, {});
  REQUIRE(out.size() == 1);
  CHECK(area(out[0]) == doctest::Approx(16.0));
}

TEST_CASE("polygon difference: corner bite leaves L of area 12") {
  const Polygon roi = square(0, 0, 4);
  const auto out = polygon_difference(roi, {square(0, 0, 2)});
  double total = 0.0;
  for (const Polygon& p : out) {
    CHECK(is_simple(p));
    total += area(p);
  }
  CHECK(total == doctest::Approx(12.0));
}

TEST_CASE("polygon difference: total subtraction yields nothing") {
  const Polygon roi = square(1, 1, 2);
  const auto out = polygon_difference(roi, {square(0, 0, 4)});
  CHECK(out.empty());
}

TEST_CASE("polygon difference: interior hole split into simple pieces") {
  const Polygon roi = square(0, 0, 6);
  const auto out = polygon_difference(roi, {square(2, 2, 2)});
  REQUIRE(out.size() >= 2);  // the donut must be split
  double total = 0.0;
  for (const Polygon& p : out) {
    CHECK(is_simple(p));
    CHECK(signed_area(p) > 0.0);
    total += area(p);
    // No piece may contain the hole center.
    CHECK_FALSE(strictly_inside({3, 3}, p));
  }
  CHECK(total == doctest::Approx(32.0));
}

TEST_CASE("polygon difference: two holes") {
  const Polygon roi = square(0, 0, 10);
  const auto out = polygon_difference(roi, {square(1, 4, 1), square(7, 4, 2)});
  double total = 0.0;
  for (const Polygon& p : out) {
    CHECK(is_simple(p));
    total += area(p);
  }
  CHECK(total == doctest::Approx(100.0 - 1.0 - 4.0));
}

TEST_CASE("intersection area") {
  CHECK(intersection_area(square(0, 0, 2), square(1, 1, 2)) == doctest::Approx(1.0));
  CHECK(intersection_area(square(0, 0, 1), square(1, 0, 1)) == doctest::Approx(0.0));
  CHECK(intersection_area(square(0, 0, 1), square(5, 5, 1)) == doctest::Approx(0.0));
}
