// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <vector>

#include "tagplan/scene.hpp"
#include "tagplan/sensing.hpp"
#include "tagplan/spatial.hpp"

namespace tagplan::valuation {

struct PlanningParams {
  double cell_size = 0.5;
  double delta_theta_deg = 20.0;
  double d_res = 0.3;
  std::vector<double> tag_sizes{0.23};
  sensing::MetricKind metric = sensing::MetricKind::Trace;
  int max_tags_per_phase = 0;  // 0 = no budget
  bool normalize = true;       // decoupled mode with per-cell capacity scaling

  void validate() const;

  /// Index (1-based gene value) of the largest tag size.
  int max_size_value() const;
};

struct CostParams {
  double s_min = 0.06;
  double p_c = 0.02;
  std::vector<double> alpha{1.0};  // accessibility per size, exactly one 1.0
  double lambda_rmv = 1.0;
  double lambda_rpl = 0.0;
  int k_wear = 1000;  // phases between forced wear replacements

  void validate(std::size_t n_sizes) const;
};

/// One discrete UAV pose: a grid-cell center at a flight altitude with a
/// quantized yaw; zero roll and pitch.
struct QueryPose {
  int cell_index = 0;
  double altitude = 0.0;
  double yaw_deg = 0.0;
  spatial::Pose t_vw;
};

/// cells x altitudes x (360/delta_theta) poses, yaws {0, dt, 2dt, ...},
/// ordered cell-major so each cell's poses form one contiguous block.
std::vector<QueryPose> enumerate_query_poses(const std::vector<scene::GridCell>& cells,
                                             const std::vector<double>& altitudes,
                                             double delta_theta_deg);

}  // namespace tagplan::valuation
