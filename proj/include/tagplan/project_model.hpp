// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagplan/ga.hpp"
#include "tagplan/params.hpp"
#include "tagplan/scene.hpp"
#include "tagplan/sensing.hpp"

namespace tagplan::model {

/// Input failed schema or invariant validation (CLI exit code 2).
struct ProjectSchemaError : std::runtime_error {
  explicit ProjectSchemaError(const std::string& what) : std::runtime_error(what) {}
};

/// Structurally valid project that cannot be planned, e.g. a phase with no
/// navigable cells or no placement options (CLI exit code 3).
struct InfeasibleProject : std::runtime_error {
  explicit InfeasibleProject(const std::string& what) : std::runtime_error(what) {}
};

/// Raw per-phase input geometry, as written in the project file.
struct PhaseSpec {
  std::string name;
  std::vector<geom::Polygon> obstacles;
  std::vector<scene::Roi> rois;
  std::vector<geom::Polygon> no_fly;
  std::vector<scene::InstallableEdge> installable;
  std::vector<double> flight_altitudes{1.5};
  std::vector<double> install_heights{1.5};
};

/// Parsed project file: geometry per phase plus all parameter blocks.
struct ProjectSpec {
  std::string name;
  geom::Vec2 origin{0.0, 0.0};
  sensing::CameraModel camera;
  sensing::NoiseModel noise;
  valuation::PlanningParams planning;
  valuation::CostParams cost;
  bool cost_enabled = false;
  ga::GaParams ga;
  std::vector<PhaseSpec> phases;
  std::uint64_t content_hash = 0;
};

/// Derived per-phase artifacts, frozen after build.
struct PhaseModel {
  std::string name;
  std::vector<scene::Scene> scenes;  // one per flight altitude, shared 2D geometry
  std::vector<scene::TaggedPolygon> modified;
  std::vector<scene::GridCell> cells;
  std::vector<valuation::QueryPose> poses;  // cell-major blocks
  std::vector<double> install_heights;

  std::size_t poses_per_cell() const {
    return cells.empty() ? 0 : poses.size() / cells.size();
  }
  double roi_importance(int roi_index) const {
    return scenes.front().rois.at(static_cast<std::size_t>(roi_index)).importance;
  }
};

/// The whole planning instance: scenes, the global option/slot registries,
/// per-gene feasibility, and query poses. Immutable once built.
struct ProjectModel {
  ProjectSpec spec;
  std::vector<scene::TagOption> options;  // global ids; identical geometry merged across phases
  std::vector<scene::Slot> slots;         // (option, height) pairs genes select over
  std::vector<PhaseModel> phases;
  std::vector<std::uint8_t> slot_feasible;  // [phase * n_slots + slot]
  std::vector<std::string> warnings;

  std::size_t n_phases() const { return phases.size(); }
  std::size_t n_slots() const { return slots.size(); }
  int n_sizes() const { return static_cast<int>(spec.planning.tag_sizes.size()); }
  std::size_t gene_count() const { return n_phases() * n_slots(); }
  std::size_t gene_index(std::size_t phase, std::size_t slot) const {
    return phase * n_slots() + slot;
  }
  bool feasible(std::size_t phase, std::size_t slot) const {
    return slot_feasible[gene_index(phase, slot)] != 0;
  }

  /// Physical placement for (slot, gene value > 0).
  sensing::ActiveSlot active_slot(std::size_t slot, int size_value) const {
    const scene::Slot& s = slots[slot];
    return {options[static_cast<std::size_t>(s.option_id)], s.height,
            spec.planning.tag_sizes[static_cast<std::size_t>(size_value - 1)]};
  }

  std::size_t n_cells_total() const;

  /// Every feasible slot at the largest tag size (the normalization
  /// reference configuration; ignores the per-phase budget).
  ga::Chromosome all_occupied() const;

  /// Active slots of one phase for a chromosome, in slot order.
  std::vector<sensing::ActiveSlot> active_slots(const ga::Chromosome& c, std::size_t phase) const;
};

/// Validates geometry and parameters, slices scenes, identifies and merges
/// tag options across phases, discretizes ROIs, and enumerates query poses.
/// Throws ProjectSchemaError / InfeasibleProject.
ProjectModel build_project_model(const ProjectSpec& spec);

}  // namespace tagplan::model
