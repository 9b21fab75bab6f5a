// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <string>
#include <vector>

#include "tagplan/ga.hpp"
#include "tagplan/project_model.hpp"

namespace tagplan::render {

/// Fill color for a normalized utility in [0, 1]: a green-yellow-red ramp
/// with 1.0 pinned to #00a000.
std::string ramp_color(double value);

/// One phase heatmap: grid cells colored by normalized utility, obstacles
/// filled, ROIs outlined, no-fly zones shaded, placed tags as orange
/// directed segments. Byte-deterministic for fixed inputs.
std::string render_phase_svg(const model::ProjectModel& m, std::size_t phase,
                             const std::vector<double>& cell_values,
                             const ga::Chromosome& config);

}  // namespace tagplan::render
