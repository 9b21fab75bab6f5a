// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/project_model.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <tuple>

#include "tagplan/clip.hpp"

namespace tagplan::model {

namespace {

void validate_polygon(geom::Polygon& poly, const std::string& what) {
  if (poly.size() < 3) throw ProjectSchemaError(what + ": polygon needs at least 3 vertices");
  geom::normalize_ccw(poly);
  if (!geom::is_simple(poly)) throw ProjectSchemaError(what + ": polygon is not simple");
}

void validate_phase(PhaseSpec& phase, const std::string& where) {
  for (std::size_t i = 0; i < phase.obstacles.size(); ++i)
    validate_polygon(phase.obstacles[i], where + " obstacle " + std::to_string(i));
  for (std::size_t i = 0; i < phase.rois.size(); ++i) {
    validate_polygon(phase.rois[i].polygon, where + " roi " + std::to_string(i));
    if (phase.rois[i].importance < 0.0)
      throw ProjectSchemaError(where + " roi " + std::to_string(i) + ": negative importance");
  }
  for (std::size_t i = 0; i < phase.no_fly.size(); ++i)
    validate_polygon(phase.no_fly[i], where + " no_fly " + std::to_string(i));

  for (std::size_t i = 0; i < phase.obstacles.size(); ++i) {
    for (std::size_t j = i + 1; j < phase.obstacles.size(); ++j) {
      if (geom::intersection_area(phase.obstacles[i], phase.obstacles[j]) > 1e-9)
        throw ProjectSchemaError(where + ": obstacles " + std::to_string(i) + " and " +
                                 std::to_string(j) + " overlap");
    }
  }

  for (const scene::InstallableEdge& e : phase.installable) {
    if (e.polygon_index < 0 || static_cast<std::size_t>(e.polygon_index) >= phase.obstacles.size())
      throw ProjectSchemaError(where + ": installable edge references missing obstacle");
    const auto n = static_cast<int>(phase.obstacles[static_cast<std::size_t>(e.polygon_index)].size());
    if (e.edge_index < 0 || e.edge_index >= n)
      throw ProjectSchemaError(where + ": installable edge index out of range");
  }

  if (phase.flight_altitudes.empty())
    throw ProjectSchemaError(where + ": needs at least one flight altitude");
  for (double a : phase.flight_altitudes)
    if (a <= 0.0) throw ProjectSchemaError(where + ": flight altitude must be positive");
  if (phase.install_heights.empty())
    throw ProjectSchemaError(where + ": needs at least one install height");
}

// Options are merged across phases by quantized geometry: the same wall face
// yields the same location ID in every phase it exists in. 5 mm absorbs the
// centroid-scaling drift when a polygon changes shape between phases.
using OptionKey = std::tuple<long, long, long, long>;

OptionKey option_key(const scene::TagOption& opt) {
  return {std::lround(opt.anchor.x / 5e-3), std::lround(opt.anchor.y / 5e-3),
          std::lround(opt.normal.x / 1e-3), std::lround(opt.normal.y / 1e-3)};
}

}  // namespace

std::size_t ProjectModel::n_cells_total() const {
  std::size_t n = 0;
  for (const PhaseModel& p : phases) n += p.cells.size();
  return n;
}

ga::Chromosome ProjectModel::all_occupied() const {
  ga::Chromosome c;
  c.genes.assign(gene_count(), 0);
  const auto size_value = static_cast<std::uint8_t>(spec.planning.max_size_value());
  for (std::size_t g = 0; g < gene_count(); ++g)
    if (slot_feasible[g]) c.genes[g] = size_value;
  return c;
}

std::vector<sensing::ActiveSlot> ProjectModel::active_slots(const ga::Chromosome& c,
                                                            std::size_t phase) const {
  std::vector<sensing::ActiveSlot> out;
  for (std::size_t s = 0; s < n_slots(); ++s) {
    const std::uint8_t v = c.genes[gene_index(phase, s)];
    if (v > 0 && feasible(phase, s)) out.push_back(active_slot(s, v));
  }
  return out;
}

ProjectModel build_project_model(const ProjectSpec& spec) {
  ProjectModel m;
  m.spec = spec;
  m.spec.planning.validate();
  m.spec.camera.validate();
  if (m.spec.noise.sigma_px <= 0.0) throw ProjectSchemaError("noise: sigma_px must be positive");
  if (m.spec.cost_enabled) m.spec.cost.validate(m.spec.planning.tag_sizes.size());
  m.spec.ga.validate();
  if (m.spec.phases.empty()) throw ProjectSchemaError("project: needs at least one phase");

  const std::size_t n_phases = m.spec.phases.size();
  std::map<OptionKey, int> registry;
  std::vector<std::vector<int>> phase_option_ids(n_phases);

  for (std::size_t pi = 0; pi < n_phases; ++pi) {
    PhaseSpec& ps = m.spec.phases[pi];
    if (ps.name.empty()) ps.name = "T" + std::to_string(pi + 1);
    validate_phase(ps, "phase " + ps.name);

    PhaseModel pm;
    pm.name = ps.name;
    pm.install_heights = ps.install_heights;
    std::sort(pm.install_heights.begin(), pm.install_heights.end());

    for (double alt : ps.flight_altitudes) {
      scene::Scene s;
      s.phase_id = static_cast<int>(pi);
      s.altitude = alt;
      s.obstacles = ps.obstacles;
      s.rois = ps.rois;
      s.no_fly = ps.no_fly;
      s.installable = ps.installable;
      pm.scenes.push_back(std::move(s));
    }

    pm.modified = scene::modified_rois(pm.scenes.front(), m.spec.planning.cell_size, &m.warnings);
    pm.cells = scene::discretize_rois(pm.modified, m.spec.planning.cell_size, m.spec.origin);
    if (pm.cells.empty())
      throw InfeasibleProject("phase " + ps.name + ": no navigable grid cells remain");
    pm.poses = valuation::enumerate_query_poses(pm.cells, ps.flight_altitudes,
                                                m.spec.planning.delta_theta_deg);

    const std::vector<scene::TagOption> found = scene::identify_tag_options(
        pm.scenes.front(), m.spec.planning.d_res, m.spec.planning.tag_sizes);
    if (found.empty())
      throw InfeasibleProject("phase " + ps.name + ": no tag placement options");

    for (const scene::TagOption& opt : found) {
      const OptionKey key = option_key(opt);
      auto it = registry.find(key);
      if (it == registry.end()) {
        scene::TagOption global = opt;
        global.id = static_cast<int>(m.options.size());
        global.feasible_phases = {static_cast<int>(pi)};
        it = registry.emplace(key, global.id).first;
        m.options.push_back(std::move(global));
      } else {
        m.options[static_cast<std::size_t>(it->second)].feasible_phases.insert(
            static_cast<int>(pi));
      }
      phase_option_ids[pi].push_back(it->second);
    }

    m.phases.push_back(std::move(pm));
  }

  // Option heights: the union of install heights over the phases the option
  // exists in.
  for (scene::TagOption& opt : m.options) {
    std::vector<double> heights;
    for (int pi : opt.feasible_phases) {
      for (double h : m.phases[static_cast<std::size_t>(pi)].install_heights) {
        const bool seen = std::any_of(heights.begin(), heights.end(),
                                      [h](double x) { return std::abs(x - h) < 1e-9; });
        if (!seen) heights.push_back(h);
      }
    }
    std::sort(heights.begin(), heights.end());
    opt.heights = std::move(heights);
  }

  for (const scene::TagOption& opt : m.options)
    for (double h : opt.heights) m.slots.push_back({opt.id, h});

  m.slot_feasible.assign(n_phases * m.slots.size(), 0);
  for (std::size_t pi = 0; pi < n_phases; ++pi) {
    const auto& heights = m.phases[pi].install_heights;
    for (std::size_t si = 0; si < m.slots.size(); ++si) {
      const scene::Slot& slot = m.slots[si];
      const scene::TagOption& opt = m.options[static_cast<std::size_t>(slot.option_id)];
      const bool option_ok = opt.feasible_phases.count(static_cast<int>(pi)) > 0;
      const bool height_ok = std::any_of(heights.begin(), heights.end(), [&](double h) {
        return std::abs(h - slot.height) < 1e-9;
      });
      if (option_ok && height_ok) m.slot_feasible[pi * m.slots.size() + si] = 1;
    }
  }

  for (std::size_t pi = 0; pi < n_phases; ++pi) {
    bool any = false;
    for (std::size_t si = 0; si < m.slots.size() && !any; ++si) any = m.feasible(pi, si);
    if (!any)
      throw InfeasibleProject("phase " + m.spec.phases[pi].name +
                              ": no feasible tag placement slots");
  }

  return m;
}

}  // namespace tagplan::model
