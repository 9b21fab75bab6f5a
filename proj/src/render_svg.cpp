// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/render_svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

namespace tagplan::render {

namespace {

constexpr double kScale = 100.0;  // px per meter
constexpr double kPad = 50.0;     // px border

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", v);
  // Avoid the two spellings of zero.
  if (std::strcmp(buf, "-0.00") == 0) return "0.00";
  return buf;
}

struct Frame {
  double min_x, max_y;
  double x(double wx) const { return kPad + (wx - min_x) * kScale; }
  double y(double wy) const { return kPad + (max_y - wy) * kScale; }
};

std::string polygon_points(const geom::Polygon& poly, const Frame& f) {
  std::ostringstream os;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    if (i) os << ' ';
    os << fmt(f.x(poly.pts[i].x)) << ',' << fmt(f.y(poly.pts[i].y));
  }
  return os.str();
}

}  // namespace

std::string ramp_color(double value) {
  const double v = std::clamp(value, 0.0, 1.0);
  // 0 -> #c80000 red, 0.5 -> #e6e600 yellow, 1 -> #00a000 green.
  int r, g, b = 0;
  if (v >= 0.5) {
    const double t = (v - 0.5) * 2.0;  // 0 at yellow, 1 at green
    r = static_cast<int>(std::lround(230.0 * (1.0 - t)));
    g = static_cast<int>(std::lround(230.0 + (160.0 - 230.0) * t));
  } else {
    const double t = v * 2.0;  // 0 at red, 1 at yellow
    r = static_cast<int>(std::lround(200.0 + (230.0 - 200.0) * t));
    g = static_cast<int>(std::lround(230.0 * t));
  }
  char buf[8];
  std::snprintf(buf, sizeof(buf), "#%02x%02x%02x", r, g, b);
  return buf;
}

std::string render_phase_svg(const model::ProjectModel& m, std::size_t phase,
                             const std::vector<double>& cell_values,
                             const ga::Chromosome& config) {
  const model::PhaseModel& pm = m.phases[phase];
  const scene::Scene& scn = pm.scenes.front();

  geom::Bbox bb{1e30, 1e30, -1e30, -1e30};
  const auto grow = [&bb](const geom::Polygon& p) {
    const geom::Bbox b = geom::bbox(p);
    bb.min_x = std::min(bb.min_x, b.min_x);
    bb.min_y = std::min(bb.min_y, b.min_y);
    bb.max_x = std::max(bb.max_x, b.max_x);
    bb.max_y = std::max(bb.max_y, b.max_y);
  };
  for (const geom::Polygon& p : scn.obstacles) grow(p);
  for (const scene::Roi& r : scn.rois) grow(r.polygon);
  for (const geom::Polygon& p : scn.no_fly) grow(p);

  const Frame f{bb.min_x, bb.max_y};
  const double width = (bb.max_x - bb.min_x) * kScale + 2.0 * kPad;
  const double height = (bb.max_y - bb.min_y) * kScale + 2.0 * kPad;

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" viewBox=\"0 0 "
      << fmt(width) << ' ' << fmt(height) << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << fmt(width) << "\" height=\"" << fmt(height)
      << "\" fill=\"#ffffff\"/>\n";

  // Heatmap cells.
  svg << "<g stroke=\"#ffffff\" stroke-width=\"0.5\">\n";
  for (std::size_t ci = 0; ci < pm.cells.size(); ++ci) {
    const scene::GridCell& cell = pm.cells[ci];
    const double half = cell.size / 2.0;
    svg << "<rect x=\"" << fmt(f.x(cell.center.x - half)) << "\" y=\""
        << fmt(f.y(cell.center.y + half)) << "\" width=\"" << fmt(cell.size * kScale)
        << "\" height=\"" << fmt(cell.size * kScale) << "\" fill=\""
        << ramp_color(ci < cell_values.size() ? cell_values[ci] : 0.0) << "\"/>\n";
  }
  svg << "</g>\n";

  // ROI outlines.
  for (const scene::Roi& r : scn.rois)
    svg << "<polygon points=\"" << polygon_points(r.polygon, f)
        << "\" fill=\"none\" stroke=\"#2060c0\" stroke-width=\"2\" stroke-dasharray=\"8,4\"/>\n";

  // No-fly zones.
  for (const geom::Polygon& p : scn.no_fly)
    svg << "<polygon points=\"" << polygon_points(p, f)
        << "\" fill=\"#c04040\" fill-opacity=\"0.25\" stroke=\"#c04040\" stroke-width=\"1\"/>\n";

  // Obstacles.
  for (const geom::Polygon& p : scn.obstacles)
    svg << "<polygon points=\"" << polygon_points(p, f)
        << "\" fill=\"#555555\" stroke=\"#333333\" stroke-width=\"1\"/>\n";

  // Placed tags: orange segment along the tag footprint plus a direction
  // arrow along the outward normal.
  svg << "<g stroke=\"#ff8c00\" stroke-width=\"3\" fill=\"#ff8c00\">\n";
  for (std::size_t si = 0; si < m.n_slots(); ++si) {
    const std::uint8_t v = config.genes.empty() ? 0 : config.genes[m.gene_index(phase, si)];
    if (v == 0 || !m.feasible(phase, si)) continue;
    const sensing::ActiveSlot as = m.active_slot(si, v);
    const geom::Vec2 t{-as.option.normal.y, as.option.normal.x};
    const geom::Vec2 a = as.option.anchor - t * (as.size / 2.0);
    const geom::Vec2 b = as.option.anchor + t * (as.size / 2.0);
    svg << "<line x1=\"" << fmt(f.x(a.x)) << "\" y1=\"" << fmt(f.y(a.y)) << "\" x2=\""
        << fmt(f.x(b.x)) << "\" y2=\"" << fmt(f.y(b.y)) << "\"/>\n";
    const geom::Vec2 tip = as.option.anchor + as.option.normal * 0.18;
    const geom::Vec2 base_l = as.option.anchor + t * 0.05;
    const geom::Vec2 base_r = as.option.anchor - t * 0.05;
    svg << "<polygon points=\"" << fmt(f.x(tip.x)) << ',' << fmt(f.y(tip.y)) << ' '
        << fmt(f.x(base_l.x)) << ',' << fmt(f.y(base_l.y)) << ' ' << fmt(f.x(base_r.x)) << ','
        << fmt(f.y(base_r.y)) << "\" stroke=\"none\"/>\n";
  }
  svg << "</g>\n";

  svg << "<text x=\"" << fmt(kPad) << "\" y=\"" << fmt(kPad - 14.0)
      << "\" font-family=\"monospace\" font-size=\"16\">" << pm.name << "</text>\n";
  svg << "</svg>\n";
  return svg.str();
}

}  // namespace tagplan::render
