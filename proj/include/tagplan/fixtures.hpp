// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include "tagplan/project_model.hpp"
#include "tagplan/validation.hpp"

namespace tagplan::validation {

/// Two wall-mounted tags straight ahead of a vehicle at the origin; the
/// standard well-conditioned estimation fixture.
struct CrlbFixture {
  spatial::Pose t_vw;
  std::vector<sensing::ActiveSlot> slots;
  scene::Scene scn;
  sensing::CameraModel cam;
  sensing::NoiseModel noise;
};
CrlbFixture make_crlb_fixture();

/// Single-phase project with one 1x1 m column in an 8x8 m room: 8 placement
/// slots, two tag sizes, budget 3. Small enough for the exhaustive oracle.
model::ProjectSpec make_tiny_spec();

/// Single-phase 8x8 m room with tags installable on all four inner wall
/// faces (the localizability fixture).
model::ProjectSpec make_room_spec();

}  // namespace tagplan::validation
