// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <array>
#include <set>
#include <string>
#include <vector>

#include "tagplan/geometry.hpp"
#include "tagplan/spatial.hpp"

namespace tagplan::scene {

using geom::Polygon;
using geom::Vec2;

/// Region of interest with its relative importance weight.
struct Roi {
  Polygon polygon;
  double importance = 1.0;
};

/// Marks one edge of one obstacle polygon as eligible for tag installation.
struct InstallableEdge {
  int polygon_index = 0;
  int edge_index = 0;
};

/// One phase x flight-altitude slice of the site: 2D obstacle polygons, ROIs,
/// no-fly zones, and the surfaces tags may go on. Immutable after load.
struct Scene {
  int phase_id = 0;
  double altitude = 1.5;
  std::vector<Polygon> obstacles;
  std::vector<Roi> rois;
  std::vector<Polygon> no_fly;
  std::vector<InstallableEdge> installable;
};

struct GridCell {
  Vec2 center;
  double size = 0.5;
  int roi_index = 0;
};

/// Discrete candidate tag location: 2D anchor on a wall face, outward unit
/// normal, installable heights, and the phases where the wall exists.
struct TagOption {
  int id = 0;
  Vec2 anchor;
  Vec2 normal;
  std::vector<double> heights;
  std::set<int> feasible_phases;
};

struct TaggedPolygon {
  Polygon polygon;
  int roi_index = 0;
};

/// ROI \ (no-fly ∪ obstacles) per ROI, as hole-free simple polygons. ROIs
/// whose remaining area is below one grid cell yield nothing and append a
/// warning.
std::vector<TaggedPolygon> modified_rois(const Scene& scene, double cell_size,
                                         std::vector<std::string>* warnings = nullptr);

/// Axis-aligned lattice anchored at `origin`; a cell is kept iff its center
/// is strictly inside one of the polygons (first containing polygon wins).
std::vector<GridCell> discretize_rois(const std::vector<TaggedPolygon>& polys,
                                      double cell_size, Vec2 origin = {0.0, 0.0});

/// Spacing between neighbouring options: the coarser of the user resolution
/// and the largest tag plus 2 cm clearance, so tags never overlap.
double find_minimum_tag_distance(double d_res, const std::vector<double>& tag_sizes);

/// Tag option identification over the installable edges of one scene.
/// Edges are taken from the obstacle polygon scaled by (1 + 5e-5) about its
/// centroid; sample points step `find_minimum_tag_distance` along each edge
/// and keep a half-tag margin to both endpoints.
std::vector<TagOption> identify_tag_options(const Scene& scene, double d_res,
                                            const std::vector<double>& tag_sizes);

/// (option, height) slots: the Cartesian product that genes select over.
struct Slot {
  int option_id = 0;
  double height = 0.0;
};
std::vector<Slot> expand_to_heights(const std::vector<TagOption>& options,
                                    const std::vector<double>& heights);

/// World corners of the vertical square tag at (anchor, height), facing
/// along the outward normal. Order: bottom +t, bottom -t, top -t, top +t
/// with tangent t = (-v, u).
std::array<spatial::HomPoint, 4> tag_corners_world(const TagOption& option, double height,
                                                   double size);

/// True iff the open segment (p, q) meets no obstacle edge. Grazing a vertex
/// or running along an edge counts as blocked.
bool line_of_sight(const Vec2& p, const Vec2& q, const Scene& scene);

}  // namespace tagplan::scene
