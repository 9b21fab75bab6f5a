// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/fixtures.hpp"

namespace tagplan::validation {

namespace {

geom::Polygon rect(double x0, double y0, double x1, double y1) {
  return geom::Polygon{{{x0, y0}, {x1, y0}, {x1, y1}, {x0, y1}}};
}

}  // namespace

CrlbFixture make_crlb_fixture() {
  CrlbFixture fx;
  fx.cam.t_cv = sensing::forward_camera_extrinsics();
  fx.t_vw = spatial::yaw_pose(0.0, spatial::Vec3(0.0, 0.0, 1.5));

  fx.scn.phase_id = 0;
  fx.scn.altitude = 1.5;

  for (const double y : {-0.7, 0.7}) {
    scene::TagOption opt;
    opt.id = static_cast<int>(fx.slots.size());
    opt.anchor = {2.5, y};
    opt.normal = {-1.0, 0.0};
    opt.heights = {1.5};
    opt.feasible_phases = {0};
    fx.slots.push_back({opt, 1.5, 0.23});
  }
  return fx;
}

model::ProjectSpec make_tiny_spec() {
  model::ProjectSpec spec;
  spec.name = "tiny";
  spec.camera.t_cv = sensing::forward_camera_extrinsics();

  spec.planning.tag_sizes = {0.165, 0.23};
  spec.planning.max_tags_per_phase = 3;

  spec.ga.max_iters = 500;

  model::PhaseSpec phase;
  phase.name = "T1";
  phase.obstacles = {rect(3.5, 3.5, 4.5, 4.5)};
  phase.installable = {{0, 0}, {0, 1}, {0, 2}, {0, 3}};
  phase.rois = {{rect(1.0, 1.0, 7.0, 7.0), 1.0}};
  phase.flight_altitudes = {1.5};
  phase.install_heights = {1.5};
  spec.phases.push_back(std::move(phase));
  return spec;
}

model::ProjectSpec make_room_spec() {
  model::ProjectSpec spec;
  spec.name = "room";
  spec.camera.t_cv = sensing::forward_camera_extrinsics();

  spec.planning.tag_sizes = {0.23};
  spec.planning.max_tags_per_phase = 6;

  model::PhaseSpec phase;
  phase.name = "T1";
  // Four wall slabs around an 8x8 m interior, inner faces installable.
  phase.obstacles = {
      rect(-0.2, -0.2, 8.2, 0.0),  // south, inner face = edge 2
      rect(-0.2, 8.0, 8.2, 8.2),   // north, inner face = edge 0
      rect(-0.2, 0.0, 0.0, 8.0),   // west, inner face = edge 1
      rect(8.0, 0.0, 8.2, 8.0),    // east, inner face = edge 3
  };
  phase.installable = {{0, 2}, {1, 0}, {2, 1}, {3, 3}};
  phase.rois = {{rect(0.7, 0.7, 7.7, 7.7), 1.0}};
  phase.flight_altitudes = {1.5};
  phase.install_heights = {1.5};
  spec.phases.push_back(std::move(phase));
  return spec;
}

}  // namespace tagplan::validation
