// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "tagplan/ga.hpp"
#include "tagplan/rng.hpp"
#include "tagplan/scene.hpp"
#include "tagplan/sensing.hpp"
#include "tagplan/spatial.hpp"

namespace tagplan::validation {

using sensing::ActiveSlot;
using sensing::CameraModel;
using sensing::NoiseModel;
using spatial::HomPoint;
using spatial::Mat6;
using spatial::Pose;
using spatial::Vec6;

struct SingularNormalEquations : std::runtime_error {
  SingularNormalEquations() : std::runtime_error("normal equations ill-conditioned") {}
};

struct InstanceTooLarge : std::runtime_error {
  explicit InstanceTooLarge(const std::string& what) : std::runtime_error(what) {}
};

/// Central-difference Jacobian of the corner projection over left pose
/// perturbations; the independent oracle for corner_jacobian.
Eigen::Matrix<double, 2, 6> fd_jacobian(const Pose& t_vw, const CameraModel& cam,
                                        const HomPoint& p_w, double step = 1e-6);

struct Measurement {
  std::size_t slot_index = 0;
  int corner = 0;
  sensing::Pixel pixel;
};

/// Noisy corner pixels of every detectable slot, in slot-then-corner order.
std::vector<Measurement> simulate_measurements(const Pose& t_true,
                                               const std::vector<ActiveSlot>& slots,
                                               const scene::Scene& scn, const CameraModel& cam,
                                               const NoiseModel& noise, Rng& rng);

/// Gauss-Newton maximum-likelihood pose from corner measurements, with left
/// perturbation updates. Stops at |xi| < 1e-10 or 50 iterations. Throws
/// SingularNormalEquations when the normal matrix condition exceeds 1e12.
Pose estimate_pose(const std::vector<Measurement>& measurements,
                   const std::vector<ActiveSlot>& slots, const CameraModel& cam,
                   const NoiseModel& noise, const Pose& t_init);

struct CrlbResult {
  double empirical_trace = 0.0;
  double crlb_trace = 0.0;
  double ratio = 0.0;
  int trials_used = 0;
  int failures = 0;
};

/// Monte Carlo consistency check of the estimator covariance against the
/// inverse Fisher information. Requires a full-rank pose FIM.
CrlbResult crlb_check(const Pose& t_true, const std::vector<ActiveSlot>& slots,
                      const scene::Scene& scn, const CameraModel& cam, const NoiseModel& noise,
                      int trials, std::uint64_t seed, unsigned threads = 0);

enum class TrajectoryKind { Cwk, Lsa, Spn };
TrajectoryKind trajectory_from_string(const std::string& s);
std::string to_string(TrajectoryKind kind);

struct TrajectoryParams {
  double spacing = 0.25;       // waypoint spacing [m]
  double spin_step_deg = 45.0; // yaw increment for the spinning pattern
  double margin = 0.5;         // inset of the path endpoints from the region bbox
};

struct Trajectory {
  TrajectoryKind kind = TrajectoryKind::Lsa;
  std::vector<Pose> poses;
  double step = 0.25;
};

/// Straight-line path across the region at the given altitude. CWK holds
/// yaw perpendicular to the motion, LSA along it; SPN sweeps a full yaw
/// circle at each waypoint. Throws std::invalid_argument if a waypoint
/// leaves the region.
Trajectory gen_trajectory(TrajectoryKind kind, const geom::Polygon& region, double altitude,
                          const TrajectoryParams& params = {});

struct EvalReport {
  struct PerPose {
    int detectable_tags = 0;
    bool estimated = false;
    double position_error = 0.0;
  };
  std::vector<PerPose> poses;
  double rmse = 0.0;          // over estimated poses
  std::size_t estimated = 0;
  std::size_t skipped = 0;    // poses with no detectable tag
  std::size_t failures = 0;   // estimator failures
};

/// Simulate + estimate along a trajectory; the estimator is initialized from
/// the truth perturbed by N(0, 0.05^2) per axis.
EvalReport rmse_eval(const Trajectory& traj, const std::vector<ActiveSlot>& slots,
                     const scene::Scene& scn, const CameraModel& cam, const NoiseModel& noise,
                     std::uint64_t seed);

struct OracleResult {
  double best_score = 0.0;
  ga::Chromosome best;
  std::uint64_t states = 0;
};

/// Exact optimum of the fitness function by exhaustive enumeration with
/// per-phase budget pruning. Throws InstanceTooLarge above 2^24 states.
OracleResult exhaustive_oracle(const ga::Problem& problem);

}  // namespace tagplan::validation
