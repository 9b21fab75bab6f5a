// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

#include "tagplan/fim_kernel.hpp"
#include "tagplan/scene.hpp"
#include "tagplan/spatial.hpp"

namespace tagplan::sensing {

using spatial::HomPoint;
using spatial::Mat6;
using spatial::Pose;
using spatial::Vec3;

/// Signals a point at or behind the near plane; callers treat it as
/// "undetectable", never as a crash.
struct DepthBehindCamera : std::runtime_error {
  DepthBehindCamera() : std::runtime_error("point depth below near plane") {}
};

struct CameraModel {
  double fu = 600.0, fv = 600.0;  // focal lengths [px]
  double cu = 320.0, cv = 240.0;  // principal point [px]
  double width = 640.0, height = 480.0;
  double dov = 8.0;      // depth of view [m]
  double sl_min = 20.0;  // minimum projected tag side [px]
  double near_z = 0.01;  // minimum camera-frame depth [m]
  Pose t_cv;             // vehicle -> camera

  void validate() const;
};

/// Forward-looking camera: optical axis along vehicle +x, image x along
/// vehicle -y, image y along vehicle -z.
Pose forward_camera_extrinsics();

struct NoiseModel {
  double sigma_px = 1.0;

  double inv_sigma2() const { return 1.0 / (sigma_px * sigma_px); }
};

/// 6x6 symmetric information matrix, packed upper triangle.
class Fim {
 public:
  Fim() { data_.fill(0.0); }

  static Fim from_matrix(const Mat6& m);
  Mat6 matrix() const;

  double& at(int i, int j) { return data_[kernel::tri_index(order(i, j).first, order(i, j).second)]; }
  double at(int i, int j) const {
    return data_[kernel::tri_index(order(i, j).first, order(i, j).second)];
  }

  Fim& operator+=(const Fim& o) {
    for (std::size_t k = 0; k < kernel::kFimLen; ++k) data_[k] += o.data_[k];
    return *this;
  }

  double trace() const;
  bool is_zero() const;

  const std::array<double, kernel::kFimLen>& packed() const { return data_; }
  std::array<double, kernel::kFimLen>& packed() { return data_; }

 private:
  static std::pair<int, int> order(int i, int j) { return i <= j ? std::pair{i, j} : std::pair{j, i}; }
  std::array<double, kernel::kFimLen> data_;
};

/// Camera-frame coordinates of a world point, D^T T_cv T_vw p_w.
Vec3 to_camera(const Pose& t_vw, const CameraModel& cam, const HomPoint& p_w);

struct Pixel {
  double u = 0.0;
  double v = 0.0;
};

/// Pinhole projection; throws DepthBehindCamera when Z < near_z.
Pixel project(const Vec3& p_c, const CameraModel& cam);

/// Inside the image: 0 <= u < width and 0 <= v < height.
bool in_fov(const Pixel& px, const CameraModel& cam);

/// 2x6 Jacobian of the projected pixel with respect to a left perturbation
/// of t_vw (translation components first).
Eigen::Matrix<double, 2, 6> corner_jacobian(const Pose& t_vw, const CameraModel& cam,
                                            const HomPoint& p_w);

/// Information of the four corner measurements of one tag,
/// sum_n G_n^T Sigma^-1 G_n. All corners must be in front of the camera.
Fim tag_fim(const Pose& t_vw, const std::array<HomPoint, 4>& corners, const CameraModel& cam,
            const NoiseModel& noise);

/// One placed tag: a candidate location at a height, with a physical size.
struct ActiveSlot {
  scene::TagOption option;
  double height = 0.0;
  double size = 0.0;
};

/// Detectability gate: within depth of view, facing the vehicle, all four
/// corners unoccluded / in front of the near plane / inside the image, and
/// the shortest projected side at least sl_min pixels.
bool detectable(const Pose& t_vw, const ActiveSlot& slot, const scene::Scene& scn,
                const CameraModel& cam);

/// Sum of tag_fim over the detectable slots, accumulated in the given order;
/// zero matrix when nothing is visible.
Fim pose_fim(const Pose& t_vw, const std::vector<ActiveSlot>& slots, const scene::Scene& scn,
             const CameraModel& cam, const NoiseModel& noise);

enum class MetricKind { Trace, LogDet, MinEig };

MetricKind metric_from_string(const std::string& s);
std::string to_string(MetricKind kind);

/// Non-negative scalarization of a PSD information matrix: trace, ln(1+det),
/// or the smallest eigenvalue clamped at zero.
double metric(const Fim& f, MetricKind kind);
double metric(const Mat6& m, MetricKind kind);

}  // namespace tagplan::sensing
