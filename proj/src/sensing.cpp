// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/sensing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

namespace tagplan::sensing {

void CameraModel::validate() const {
  if (fu <= 0.0 || fv <= 0.0) throw std::invalid_argument("camera: focal lengths must be positive");
  if (!(cu > 0.0 && cu < width)) throw std::invalid_argument("camera: cu outside image");
  if (!(cv > 0.0 && cv < height)) throw std::invalid_argument("camera: cv outside image");
  if (sl_min < 4.0) throw std::invalid_argument("camera: sl_min below the detector floor of 4 px");
  if (near_z <= 0.0) throw std::invalid_argument("camera: near_z must be positive");
  if (dov <= 0.0) throw std::invalid_argument("camera: dov must be positive");
  if (!spatial::is_rotation(t_cv.C, 1e-6)) throw std::invalid_argument("camera: t_cv not a rotation");
}

Pose forward_camera_extrinsics() {
  Pose p;
  p.C << 0.0, -1.0, 0.0,
         0.0, 0.0, -1.0,
         1.0, 0.0, 0.0;
  p.r.setZero();
  return p;
}

Fim Fim::from_matrix(const Mat6& m) {
  Fim f;
  std::size_t k = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j, ++k) f.data_[k] = m(i, j);
  return f;
}

Mat6 Fim::matrix() const {
  Mat6 m;
  std::size_t k = 0;
  for (int i = 0; i < 6; ++i)
    for (int j = i; j < 6; ++j, ++k) m(i, j) = m(j, i) = data_[k];
  return m;
}

double Fim::trace() const {
  double acc = 0.0;
  for (int i = 0; i < 6; ++i) acc += data_[kernel::tri_index(i, i)];
  return acc;
}

bool Fim::is_zero() const {
  for (double v : data_)
    if (v != 0.0) return false;
  return true;
}

Vec3 to_camera(const Pose& t_vw, const CameraModel& cam, const HomPoint& p_w) {
  return spatial::apply(cam.t_cv, spatial::apply(t_vw, p_w)).head<3>();
}

Pixel project(const Vec3& p_c, const CameraModel& cam) {
  if (p_c.z() < cam.near_z) throw DepthBehindCamera{};
  return {cam.fu * p_c.x() / p_c.z() + cam.cu, cam.fv * p_c.y() / p_c.z() + cam.cv};
}

bool in_fov(const Pixel& px, const CameraModel& cam) {
  return px.u >= 0.0 && px.u < cam.width && px.v >= 0.0 && px.v < cam.height;
}

Eigen::Matrix<double, 2, 6> corner_jacobian(const Pose& t_vw, const CameraModel& cam,
                                            const HomPoint& p_w) {
  const HomPoint p_v = spatial::apply(t_vw, p_w);
  const Vec3 p_c = spatial::apply(cam.t_cv, p_v).head<3>();
  if (p_c.z() < cam.near_z) throw DepthBehindCamera{};

  const double X = p_c.x(), Y = p_c.y(), Z = p_c.z();
  Eigen::Matrix<double, 2, 3> S;
  S << cam.fu / Z, 0.0, -cam.fu * X / (Z * Z),
       0.0, cam.fv / Z, -cam.fv * Y / (Z * Z);

  Eigen::Matrix<double, 3, 6> zf;
  zf.leftCols<3>() = cam.t_cv.C;
  zf.rightCols<3>() = -cam.t_cv.C * spatial::skew(p_v.head<3>());
  return S * zf;
}

Fim tag_fim(const Pose& t_vw, const std::array<HomPoint, 4>& corners, const CameraModel& cam,
            const NoiseModel& noise) {
  for (const HomPoint& c : corners) {
    if (to_camera(t_vw, cam, c).z() < cam.near_z) throw DepthBehindCamera{};
  }

  kernel::FimBatch batch(1);
  const Eigen::Matrix<double, 3, 3, Eigen::RowMajor> rot = t_vw.C;
  batch.set_pose(0, rot.data(), t_vw.r.data());
  for (int n = 0; n < 4; ++n)
    batch.set_corner(0, n, corners[static_cast<std::size_t>(n)](0),
                     corners[static_cast<std::size_t>(n)](1),
                     corners[static_cast<std::size_t>(n)](2));

  kernel::KernelContext ctx;
  const Eigen::Matrix<double, 3, 3, Eigen::RowMajor> crot = cam.t_cv.C;
  for (int k = 0; k < 9; ++k) ctx.cam_rot[static_cast<std::size_t>(k)] = crot.data()[k];
  for (int k = 0; k < 3; ++k) ctx.cam_trans[static_cast<std::size_t>(k)] = cam.t_cv.r(k);
  ctx.fu = cam.fu;
  ctx.fv = cam.fv;
  ctx.inv_sigma2 = noise.inv_sigma2();

  kernel::active_kernel().fn(ctx, batch);

  Fim f;
  f.packed() = batch.result(0);
  return f;
}

bool detectable(const Pose& t_vw, const ActiveSlot& slot, const scene::Scene& scn,
                const CameraModel& cam) {
  const Vec3 vehicle = t_vw.origin_in_world();

  // Range gate: vehicle position to tag center.
  const Vec3 center(slot.option.anchor.x, slot.option.anchor.y, slot.height);
  if ((center - vehicle).norm() >= cam.dov) return false;

  // Front-face gate.
  const geom::Vec2 to_vehicle{vehicle.x() - slot.option.anchor.x,
                              vehicle.y() - slot.option.anchor.y};
  if (slot.option.normal.dot(to_vehicle) <= 0.0) return false;

  const auto corners = scene::tag_corners_world(slot.option, slot.height, slot.size);

  // Depth and image-bounds gates, then the projected side-length gate.
  Pixel px[4];
  for (int n = 0; n < 4; ++n) {
    const Vec3 p_c = to_camera(t_vw, cam, corners[static_cast<std::size_t>(n)]);
    if (p_c.z() < cam.near_z) return false;
    px[n] = {cam.fu * p_c.x() / p_c.z() + cam.cu, cam.fv * p_c.y() / p_c.z() + cam.cv};
    if (!in_fov(px[n], cam)) return false;
  }
  double min_side = std::numeric_limits<double>::max();
  for (int n = 0; n < 4; ++n) {
    const Pixel& a = px[n];
    const Pixel& b = px[(n + 1) % 4];
    min_side = std::min(min_side, std::hypot(b.u - a.u, b.v - a.v));
  }
  if (min_side < cam.sl_min) return false;

  // Occlusion gate, 2D at the flight layer, from the camera footprint.
  const Vec3 cam_world = spatial::compose(cam.t_cv, t_vw).origin_in_world();
  const geom::Vec2 cam_xy{cam_world.x(), cam_world.y()};
  for (int n = 0; n < 4; ++n) {
    const geom::Vec2 corner_xy{corners[static_cast<std::size_t>(n)](0),
                               corners[static_cast<std::size_t>(n)](1)};
    if (!scene::line_of_sight(cam_xy, corner_xy, scn)) return false;
  }
  return true;
}

Fim pose_fim(const Pose& t_vw, const std::vector<ActiveSlot>& slots, const scene::Scene& scn,
             const CameraModel& cam, const NoiseModel& noise) {
  // Accumulate in canonical (option id, height, size) order so the result
  // does not depend on the caller's list order, bit for bit.
  std::vector<std::size_t> order(slots.size());
  for (std::size_t i = 0; i < slots.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&slots](std::size_t a, std::size_t b) {
    const ActiveSlot& x = slots[a];
    const ActiveSlot& y = slots[b];
    return std::tie(x.option.id, x.height, x.size) < std::tie(y.option.id, y.height, y.size);
  });

  Fim total;
  for (const std::size_t i : order) {
    const ActiveSlot& slot = slots[i];
    if (!detectable(t_vw, slot, scn, cam)) continue;
    total += tag_fim(t_vw, scene::tag_corners_world(slot.option, slot.height, slot.size), cam,
                     noise);
  }
  return total;
}

MetricKind metric_from_string(const std::string& s) {
  if (s == "trace") return MetricKind::Trace;
  if (s == "logdet") return MetricKind::LogDet;
  if (s == "mineig") return MetricKind::MinEig;
  throw std::invalid_argument("unknown metric kind: " + s);
}

std::string to_string(MetricKind kind) {
  switch (kind) {
    case MetricKind::Trace: return "trace";
    case MetricKind::LogDet: return "logdet";
    case MetricKind::MinEig: return "mineig";
  }
  return "trace";
}

double metric(const Fim& f, MetricKind kind) {
  if (kind == MetricKind::Trace) return f.trace();
  return metric(f.matrix(), kind);
}

double metric(const Mat6& m, MetricKind kind) {
  switch (kind) {
    case MetricKind::Trace:
      return m.trace();
    case MetricKind::LogDet:
      return std::log1p(std::max(0.0, m.determinant()));
    case MetricKind::MinEig: {
      Eigen::SelfAdjointEigenSolver<Mat6> es(m, Eigen::EigenvaluesOnly);
      return std::max(0.0, es.eigenvalues()(0));
    }
  }
  return 0.0;
}

}  // namespace tagplan::sensing
