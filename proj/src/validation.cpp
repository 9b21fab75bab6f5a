// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/validation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tagplan/thread_pool.hpp"

namespace tagplan::validation {

Eigen::Matrix<double, 2, 6> fd_jacobian(const Pose& t_vw, const CameraModel& cam,
                                        const HomPoint& p_w, double step) {
  Eigen::Matrix<double, 2, 6> J;
  for (int k = 0; k < 6; ++k) {
    Vec6 xi = Vec6::Zero();
    xi(k) = step;
    const sensing::Pixel hi =
        sensing::project(sensing::to_camera(spatial::perturb_left(t_vw, xi), cam, p_w), cam);
    xi(k) = -step;
    const sensing::Pixel lo =
        sensing::project(sensing::to_camera(spatial::perturb_left(t_vw, xi), cam, p_w), cam);
    J(0, k) = (hi.u - lo.u) / (2.0 * step);
    J(1, k) = (hi.v - lo.v) / (2.0 * step);
  }
  return J;
}

std::vector<Measurement> simulate_measurements(const Pose& t_true,
                                               const std::vector<ActiveSlot>& slots,
                                               const scene::Scene& scn, const CameraModel& cam,
                                               const NoiseModel& noise, Rng& rng) {
  std::vector<Measurement> out;
  for (std::size_t si = 0; si < slots.size(); ++si) {
    if (!sensing::detectable(t_true, slots[si], scn, cam)) continue;
    const auto corners = scene::tag_corners_world(slots[si].option, slots[si].height,
                                                  slots[si].size);
    for (int n = 0; n < 4; ++n) {
      const sensing::Pixel px =
          sensing::project(sensing::to_camera(t_true, cam, corners[static_cast<std::size_t>(n)]), cam);
      Measurement m;
      m.slot_index = si;
      m.corner = n;
      m.pixel = {px.u + noise.sigma_px * rng.normal(), px.v + noise.sigma_px * rng.normal()};
      out.push_back(m);
    }
  }
  return out;
}

Pose estimate_pose(const std::vector<Measurement>& measurements,
                   const std::vector<ActiveSlot>& slots, const CameraModel& cam,
                   const NoiseModel& noise, const Pose& t_init) {
  if (measurements.size() < 2)
    throw std::invalid_argument("estimate_pose: needs at least one tag (8 measurements)");

  // World corners referenced by the measurements.
  std::vector<std::array<HomPoint, 4>> corners(slots.size());
  for (std::size_t si = 0; si < slots.size(); ++si)
    corners[si] = scene::tag_corners_world(slots[si].option, slots[si].height, slots[si].size);

  const double w = noise.inv_sigma2();
  Pose T = t_init;
  for (int iter = 0; iter < 50; ++iter) {
    Mat6 H = Mat6::Zero();
    Vec6 b = Vec6::Zero();
    for (const Measurement& m : measurements) {
      const HomPoint& p_w = corners[m.slot_index][static_cast<std::size_t>(m.corner)];
      const sensing::Pixel pred = sensing::project(sensing::to_camera(T, cam, p_w), cam);
      const Eigen::Matrix<double, 2, 6> G = sensing::corner_jacobian(T, cam, p_w);
      Eigen::Vector2d r;
      r << m.pixel.u - pred.u, m.pixel.v - pred.v;
      H += w * G.transpose() * G;
      b += w * G.transpose() * r;
    }

    Eigen::SelfAdjointEigenSolver<Mat6> es(H, Eigen::EigenvaluesOnly);
    const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(5);
    if (!(lo > 0.0) || hi / lo > 1e12) throw SingularNormalEquations{};

    const Vec6 xi = H.ldlt().solve(b);
    T = spatial::perturb_left(T, xi);
    if (xi.norm() < 1e-10) break;
  }
  return T;
}

CrlbResult crlb_check(const Pose& t_true, const std::vector<ActiveSlot>& slots,
                      const scene::Scene& scn, const CameraModel& cam, const NoiseModel& noise,
                      int trials, std::uint64_t seed, unsigned threads) {
  const sensing::Fim fim = sensing::pose_fim(t_true, slots, scn, cam, noise);
  const Mat6 info = fim.matrix();
  Eigen::SelfAdjointEigenSolver<Mat6> es(info, Eigen::EigenvaluesOnly);
  if (!(es.eigenvalues()(0) > 1e-8 * es.eigenvalues()(5)))
    throw std::invalid_argument("crlb_check: pose FIM is rank-deficient");

  std::vector<Vec6> errors(static_cast<std::size_t>(trials), Vec6::Zero());
  std::vector<std::uint8_t> ok(static_cast<std::size_t>(trials), 0);

  parallel_for(
      static_cast<std::size_t>(trials),
      [&](std::size_t i) {
        Rng rng = Rng::derive(seed, i);
        std::vector<Measurement> ms = simulate_measurements(t_true, slots, scn, cam, noise, rng);
        Vec6 init_xi;
        for (int k = 0; k < 6; ++k) init_xi(k) = rng.normal(0.0, 0.02);
        try {
          const Pose est =
              estimate_pose(ms, slots, cam, noise, spatial::perturb_left(t_true, init_xi));
          errors[i] = spatial::log_se3(spatial::compose(est, spatial::invert(t_true)));
          ok[i] = 1;
        } catch (const std::exception&) {
          ok[i] = 0;
        }
      },
      threads);

  Vec6 mean = Vec6::Zero();
  int used = 0;
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!ok[i]) continue;
    mean += errors[i];
    ++used;
  }
  CrlbResult res;
  res.failures = trials - used;
  res.trials_used = used;
  if (used < 2) return res;
  mean /= static_cast<double>(used);

  Mat6 cov = Mat6::Zero();
  for (std::size_t i = 0; i < errors.size(); ++i) {
    if (!ok[i]) continue;
    const Vec6 d = errors[i] - mean;
    cov += d * d.transpose();
  }
  cov /= static_cast<double>(used - 1);

  res.empirical_trace = cov.trace();
  res.crlb_trace = info.inverse().trace();
  res.ratio = res.empirical_trace / res.crlb_trace;
  return res;
}

TrajectoryKind trajectory_from_string(const std::string& s) {
  if (s == "cwk") return TrajectoryKind::Cwk;
  if (s == "lsa") return TrajectoryKind::Lsa;
  if (s == "spn") return TrajectoryKind::Spn;
  throw std::invalid_argument("unknown trajectory kind: " + s);
}

std::string to_string(TrajectoryKind kind) {
  switch (kind) {
    case TrajectoryKind::Cwk: return "cwk";
    case TrajectoryKind::Lsa: return "lsa";
    case TrajectoryKind::Spn: return "spn";
  }
  return "lsa";
}

Trajectory gen_trajectory(TrajectoryKind kind, const geom::Polygon& region, double altitude,
                          const TrajectoryParams& params) {
  const geom::Bbox bb = geom::bbox(region);
  const geom::Vec2 start{bb.min_x + params.margin, 0.5 * (bb.min_y + bb.max_y)};
  const geom::Vec2 end{bb.max_x - params.margin, 0.5 * (bb.min_y + bb.max_y)};
  const double len = (end - start).norm();
  if (len <= 0.0) throw std::invalid_argument("gen_trajectory: region too small for the path");
  const geom::Vec2 dir = (end - start) * (1.0 / len);
  const double heading = std::atan2(dir.y, dir.x);

  Trajectory traj;
  traj.kind = kind;
  traj.step = params.spacing;

  const int n_steps = static_cast<int>(std::floor(len / params.spacing + 1e-9));
  for (int i = 0; i <= n_steps; ++i) {
    const geom::Vec2 p = start + dir * (params.spacing * static_cast<double>(i));
    if (!geom::strictly_inside(p, region))
      throw std::invalid_argument("gen_trajectory: waypoint leaves the region");
    const spatial::Vec3 pos(p.x, p.y, altitude);
    switch (kind) {
      case TrajectoryKind::Cwk:
        traj.poses.push_back(spatial::yaw_pose(heading + M_PI / 2.0, pos));
        break;
      case TrajectoryKind::Lsa:
        traj.poses.push_back(spatial::yaw_pose(heading, pos));
        break;
      case TrajectoryKind::Spn: {
        const int n_yaw = static_cast<int>(std::lround(360.0 / params.spin_step_deg));
        for (int k = 0; k < n_yaw; ++k)
          traj.poses.push_back(
              spatial::yaw_pose(params.spin_step_deg * k * M_PI / 180.0, pos));
        break;
      }
    }
  }
  return traj;
}

EvalReport rmse_eval(const Trajectory& traj, const std::vector<ActiveSlot>& slots,
                     const scene::Scene& scn, const CameraModel& cam, const NoiseModel& noise,
                     std::uint64_t seed) {
  EvalReport report;
  report.poses.resize(traj.poses.size());
  double sum_sq = 0.0;

  for (std::size_t i = 0; i < traj.poses.size(); ++i) {
    const Pose& truth = traj.poses[i];
    Rng rng = Rng::derive(seed, i);
    EvalReport::PerPose& pp = report.poses[i];

    for (const ActiveSlot& s : slots)
      if (sensing::detectable(truth, s, scn, cam)) ++pp.detectable_tags;
    if (pp.detectable_tags == 0) {
      ++report.skipped;
      continue;
    }

    const std::vector<Measurement> ms = simulate_measurements(truth, slots, scn, cam, noise, rng);
    Vec6 init_xi;
    for (int k = 0; k < 6; ++k) init_xi(k) = rng.normal(0.0, 0.05);
    try {
      const Pose est = estimate_pose(ms, slots, cam, noise, spatial::perturb_left(truth, init_xi));
      pp.position_error = (est.origin_in_world() - truth.origin_in_world()).norm();
      pp.estimated = true;
      ++report.estimated;
      sum_sq += pp.position_error * pp.position_error;
    } catch (const std::exception&) {
      ++report.failures;
    }
  }
  report.rmse = report.estimated > 0
                    ? std::sqrt(sum_sq / static_cast<double>(report.estimated))
                    : 0.0;
  return report;
}

OracleResult exhaustive_oracle(const ga::Problem& problem) {
  // State-count bound with budget pruning: product over phases of
  // sum_{k<=budget} C(f, k) * n_sizes^k.
  double states = 1.0;
  for (std::size_t p = 0; p < problem.n_phases; ++p) {
    std::size_t f = 0;
    for (std::size_t s = 0; s < problem.n_slots; ++s)
      if (problem.feasible[problem.gene_index(p, s)]) ++f;
    const std::size_t budget =
        problem.max_tags_per_phase > 0 ? static_cast<std::size_t>(problem.max_tags_per_phase) : f;
    double phase_states = 0.0;
    double choose = 1.0;  // C(f, k)
    double size_pow = 1.0;
    for (std::size_t k = 0; k <= std::min(budget, f); ++k) {
      phase_states += choose * size_pow;
      choose = choose * static_cast<double>(f - k) / static_cast<double>(k + 1);
      size_pow *= static_cast<double>(problem.n_sizes);
    }
    states *= phase_states;
  }
  if (states > static_cast<double>(1u << 24))
    throw InstanceTooLarge("exhaustive_oracle: " + std::to_string(states) + " states");

  OracleResult result;
  result.best.genes.assign(problem.n_genes(), 0);
  result.best_score = -std::numeric_limits<double>::infinity();
  result.states = 0;

  ga::Chromosome current;
  current.genes.assign(problem.n_genes(), 0);
  std::vector<int> active_in_phase(problem.n_phases, 0);

  // DFS over genes in index order, pruning on the per-phase budget; every
  // complete assignment is scored through the same fitness path the GA uses.
  const std::function<void(std::size_t)> dfs = [&](std::size_t gene) {
    if (gene == problem.n_genes()) {
      const double s = problem.fitness(current);
      ++result.states;
      if (s > result.best_score ||
          (s == result.best_score && current.genes < result.best.genes)) {
        result.best_score = s;
        result.best = current;
      }
      return;
    }
    const std::size_t phase = gene / problem.n_slots;
    dfs(gene + 1);  // leave inactive
    if (!problem.feasible[gene]) return;
    if (problem.max_tags_per_phase > 0 && active_in_phase[phase] >= problem.max_tags_per_phase)
      return;
    ++active_in_phase[phase];
    for (int v = 1; v <= problem.n_sizes; ++v) {
      current.genes[gene] = static_cast<std::uint8_t>(v);
      dfs(gene + 1);
    }
    current.genes[gene] = 0;
    --active_in_phase[phase];
  };
  dfs(0);
  return result;
}

}  // namespace tagplan::validation
