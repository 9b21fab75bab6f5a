// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <vector>

#include "tagplan/geometry.hpp"

namespace tagplan::geom {

/// Boolean difference base \ (union of subtrahends). The result is returned
/// as hole-free simple CCW polygons: any donut piece is split along vertical
/// cut lines until no interior rings remain. Slivers below `min_area` are
/// dropped.
std::vector<Polygon> polygon_difference(const Polygon& base,
                                        const std::vector<Polygon>& subtrahends,
                                        double min_area = 1e-9);

/// Area of the overlap of two polygons (0 when disjoint or merely touching).
double intersection_area(const Polygon& a, const Polygon& b);

}  // namespace tagplan::geom
