// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/scene.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "tagplan/clip.hpp"

namespace tagplan::scene {

std::vector<TaggedPolygon> modified_rois(const Scene& scene, double cell_size,
                                         std::vector<std::string>* warnings) {
  std::vector<Polygon> subtrahends = scene.no_fly;
  subtrahends.insert(subtrahends.end(), scene.obstacles.begin(), scene.obstacles.end());

  std::vector<TaggedPolygon> out;
  for (std::size_t i = 0; i < scene.rois.size(); ++i) {
    std::vector<Polygon> pieces = geom::polygon_difference(scene.rois[i].polygon, subtrahends);
    double total = 0.0;
    for (const Polygon& p : pieces) total += geom::area(p);
    if (total < cell_size * cell_size) {
      if (warnings) {
        warnings->push_back("phase " + std::to_string(scene.phase_id) + ": ROI " +
                            std::to_string(i) + " degenerate after subtraction (area " +
                            std::to_string(total) + " below one cell), skipped");
      }
      continue;
    }
    for (Polygon& p : pieces) out.push_back({std::move(p), static_cast<int>(i)});
  }
  return out;
}

std::vector<GridCell> discretize_rois(const std::vector<TaggedPolygon>& polys,
                                      double cell_size, Vec2 origin) {
  std::vector<GridCell> cells;
  if (polys.empty() || cell_size <= 0.0) return cells;

  geom::Bbox total = geom::bbox(polys.front().polygon);
  for (const TaggedPolygon& tp : polys) {
    const geom::Bbox b = geom::bbox(tp.polygon);
    total.min_x = std::min(total.min_x, b.min_x);
    total.min_y = std::min(total.min_y, b.min_y);
    total.max_x = std::max(total.max_x, b.max_x);
    total.max_y = std::max(total.max_y, b.max_y);
  }

  const auto first_index = [cell_size](double origin_c, double min_c) {
    return static_cast<long>(std::floor((min_c - origin_c) / cell_size)) - 1;
  };
  const long i0 = first_index(origin.x, total.min_x);
  const long j0 = first_index(origin.y, total.min_y);
  const long i1 = static_cast<long>(std::ceil((total.max_x - origin.x) / cell_size)) + 1;
  const long j1 = static_cast<long>(std::ceil((total.max_y - origin.y) / cell_size)) + 1;

  for (long j = j0; j <= j1; ++j) {
    for (long i = i0; i <= i1; ++i) {
      const Vec2 center{origin.x + (static_cast<double>(i) + 0.5) * cell_size,
                        origin.y + (static_cast<double>(j) + 0.5) * cell_size};
      for (const TaggedPolygon& tp : polys) {
        if (geom::strictly_inside(center, tp.polygon)) {
          cells.push_back({center, cell_size, tp.roi_index});
          break;
        }
      }
    }
  }
  return cells;
}

double find_minimum_tag_distance(double d_res, const std::vector<double>& tag_sizes) {
  double max_size = 0.0;
  for (double s : tag_sizes) max_size = std::max(max_size, s);
  return std::max(d_res, max_size + 0.02);
}

std::vector<TagOption> identify_tag_options(const Scene& scene, double d_res,
                                            const std::vector<double>& tag_sizes) {
  const double dist = find_minimum_tag_distance(d_res, tag_sizes);
  const double epsilon = 5e-5;  // scale factor offset keeping tags off the surface
  double max_size = 0.0;
  for (double s : tag_sizes) max_size = std::max(max_size, s);
  const double margin = max_size / 2.0;

  std::vector<TagOption> options;
  for (const InstallableEdge& ie : scene.installable) {
    const Polygon& host = scene.obstacles.at(static_cast<std::size_t>(ie.polygon_index));
    const Polygon scaled = geom::scale_about_centroid(host, 1.0 + epsilon);
    const std::size_t n = scaled.size();
    const Vec2& a = scaled.pts[static_cast<std::size_t>(ie.edge_index) % n];
    const Vec2& b = scaled.pts[(static_cast<std::size_t>(ie.edge_index) + 1) % n];

    const Vec2 d = b - a;
    const double len = d.norm();
    if (len < max_size) continue;  // edge too short for any tag
    const Vec2 dir = d * (1.0 / len);
    // CCW polygon: interior on the left of each directed edge, outward on the
    // right.
    const Vec2 normal{dir.y, -dir.x};

    for (double t = dist; t <= len + 1e-9; t += dist) {
      if (t < margin || t > len - margin) continue;
      TagOption opt;
      opt.id = static_cast<int>(options.size());
      opt.anchor = a + dir * t;
      opt.normal = normal;
      opt.feasible_phases.insert(scene.phase_id);
      options.push_back(opt);
    }
  }
  return options;
}

std::vector<Slot> expand_to_heights(const std::vector<TagOption>& options,
                                    const std::vector<double>& heights) {
  if (heights.empty()) throw std::invalid_argument("expand_to_heights: no install heights");
  std::vector<Slot> slots;
  slots.reserve(options.size() * heights.size());
  for (const TagOption& opt : options)
    for (double h : heights) slots.push_back({opt.id, h});
  return slots;
}

std::array<spatial::HomPoint, 4> tag_corners_world(const TagOption& option, double height,
                                                   double size) {
  const Vec2 t{-option.normal.y, option.normal.x};
  const double h = size / 2.0;
  const Vec2 lo = option.anchor - t * h;
  const Vec2 hi = option.anchor + t * h;
  std::array<spatial::HomPoint, 4> corners;
  corners[0] << hi.x, hi.y, height - h, 1.0;
  corners[1] << lo.x, lo.y, height - h, 1.0;
  corners[2] << lo.x, lo.y, height + h, 1.0;
  corners[3] << hi.x, hi.y, height + h, 1.0;
  return corners;
}

bool line_of_sight(const Vec2& p, const Vec2& q, const Scene& scene) {
  if (p == q) return true;
  for (const Polygon& poly : scene.obstacles) {
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
      if (geom::segments_touch(p, q, poly.pts[i], poly.pts[(i + 1) % n])) return false;
    }
  }
  return true;
}

}  // namespace tagplan::scene
