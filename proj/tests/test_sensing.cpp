// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "tagplan/rng.hpp"
#include "tagplan/sensing.hpp"
#include "tagplan/validation.hpp"

using namespace tagplan;
using namespace tagplan::sensing;
using spatial::HomPoint;
using spatial::Mat6;
using spatial::Pose;
using spatial::Vec3;
using spatial::Vec6;

namespace {

CameraModel test_camera() {
  CameraModel cam;
  cam.t_cv = forward_camera_extrinsics();
  return cam;
}

CameraModel identity_camera() {
  CameraModel cam;  // t_cv = identity: camera frame == vehicle frame
  return cam;
}

}  // namespace

TEST_CASE("to_camera basics") {
  const CameraModel cam = identity_camera();
  const Pose id;
  CHECK((to_camera(id, cam, HomPoint(0, 0, 5, 1)) - Vec3(0, 0, 5)).norm() == 0.0);

  // Two-path equality under a vehicle translation.
  Pose t;
  t.r << 0.5, -1.0, 0.25;
  const HomPoint p(1, 2, 3, 1);
  const Vec3 via_op = to_camera(t, cam, p);
  const Vec3 via_compose = spatial::apply(spatial::compose(cam.t_cv, t), p).head<3>();
  CHECK((via_op - via_compose).norm() < 1e-15);

  // Round trip through the inverse chain.
  const Pose chain = spatial::compose(cam.t_cv, t);
  const HomPoint back = spatial::apply(spatial::invert(chain), HomPoint(via_op(0), via_op(1), via_op(2), 1.0));
  CHECK((back - p).norm() < 1e-9);
}

TEST_CASE("project evaluates the pinhole equation") {
  CameraModel cam = identity_camera();
  cam.fu = cam.fv = 300.0;
  cam.cu = 320.0;
  cam.cv = 240.0;

  const Pixel center = project(Vec3(0, 0, 3.7), cam);
  CHECK(center.u == doctest::Approx(320.0));
  CHECK(center.v == doctest::Approx(240.0));

  const Pixel px = project(Vec3(1.0, 0.5, 2.0), cam);
  CHECK(px.u == doctest::Approx(470.0));
  CHECK(px.v == doctest::Approx(315.0));

  CHECK_THROWS_AS(project(Vec3(0, 0, 0.001), cam), DepthBehindCamera);
}

TEST_CASE("in_fov boundary rules") {
  const CameraModel cam = identity_camera();
  CHECK(in_fov({0.0, 0.0}, cam));
  CHECK_FALSE(in_fov({640.0, 100.0}, cam));
  CHECK_FALSE(in_fov({100.0, 480.0}, cam));
  CHECK_FALSE(in_fov({-0.001, 100.0}, cam));
  CHECK(in_fov({cam.cu, cam.cv}, cam));
}

TEST_CASE("camera validation rejects bad parameters") {
  CameraModel cam = identity_camera();
  cam.sl_min = 3.0;  // below the 4 px detector floor
  CHECK_THROWS_AS(cam.validate(), std::invalid_argument);
  cam = identity_camera();
  cam.cu = 700.0;
  CHECK_THROWS_AS(cam.validate(), std::invalid_argument);
  CHECK_NOTHROW(identity_camera().validate());
}

TEST_CASE("corner_jacobian against finite differences") {
  const CameraModel cam = test_camera();
  Rng rng(21);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const Pose t_vw = spatial::yaw_pose(
        rng.uniform01() * 2 * M_PI,
        Vec3(rng.uniform01() * 4 - 2, rng.uniform01() * 4 - 2, 1 + rng.uniform01()));
    const HomPoint p_c(rng.uniform01() * 2 - 1, rng.uniform01() * 2 - 1,
                       0.5 + rng.uniform01() * 4, 1.0);
    const HomPoint p_w = spatial::apply(spatial::invert(spatial::compose(cam.t_cv, t_vw)), p_c);
    const auto analytic = corner_jacobian(t_vw, cam, p_w);
    const auto fd = validation::fd_jacobian(t_vw, cam, p_w);
    worst = std::max(worst, (analytic - fd).cwiseAbs().maxCoeff() /
                                std::max(1.0, analytic.cwiseAbs().maxCoeff()));
  }
  CHECK(worst < 1e-5);
}

TEST_CASE("corner_jacobian structure for an on-axis point") {
  CameraModel cam = identity_camera();
  const Pose id;
  const double Z = 2.5;
  const auto G = corner_jacobian(id, cam, HomPoint(0, 0, Z, 1));

  // Translation-x column of the u row is fu/Z.
  CHECK(G(0, 0) == doctest::Approx(cam.fu / Z));
  CHECK(G(1, 0) == doctest::Approx(0.0));
  // Optical-axis rotation leaves the projection unchanged.
  CHECK(G(0, 5) == doctest::Approx(0.0));
  CHECK(G(1, 5) == doctest::Approx(0.0));
}

TEST_CASE("tag_fim scaling, rank, and FD cross-check") {
  const CameraModel cam = identity_camera();
  const Pose id;
  scene::TagOption opt;
  opt.anchor = {0.0, 0.0};
  opt.normal = {0.0, -1.0};
  // Square tag facing the camera, 2 m ahead on the optical axis. With the
  // identity extrinsics the optical axis is world +z, so build corners
  // directly in front.
  std::array<HomPoint, 4> corners;
  const double h = 0.1, Z = 2.0;
  corners[0] << -h, -h, Z, 1;
  corners[1] << h, -h, Z, 1;
  corners[2] << h, h, Z, 1;
  corners[3] << -h, h, Z, 1;

  NoiseModel n1;        // sigma 1
  NoiseModel n2;
  n2.sigma_px = 2.0;

  const Fim f1 = tag_fim(id, corners, cam, n1);
  const Fim f2 = tag_fim(id, corners, cam, n2);
  for (std::size_t k = 0; k < kernel::kFimLen; ++k)
    CHECK(f1.packed()[k] == 4.0 * f2.packed()[k]);  // exact: sigma doubling = /4

  Eigen::SelfAdjointEigenSolver<Mat6> es(f1.matrix(), Eigen::EigenvaluesOnly);
  const double lmax = es.eigenvalues()(5);
  int rank = 0;
  for (int i = 0; i < 6; ++i)
    if (es.eigenvalues()(i) > 1e-8 * lmax) ++rank;
  CHECK(rank == 6);
  CHECK(es.eigenvalues()(0) > -1e-9);

  // FD-built FIM agrees within relative 1e-4.
  Mat6 fd_fim = Mat6::Zero();
  for (const auto& c : corners) {
    const auto G = validation::fd_jacobian(id, cam, c);
    fd_fim += G.transpose() * G;
  }
  const double rel = (fd_fim - f1.matrix()).cwiseAbs().maxCoeff() /
                     f1.matrix().cwiseAbs().maxCoeff();
  CHECK(rel < 1e-4);

  // tag_fim equals the Jacobian-built FIM to near machine precision.
  Mat6 direct = Mat6::Zero();
  for (const auto& c : corners) {
    const auto G = corner_jacobian(id, cam, c);
    direct += G.transpose() * G;
  }
  CHECK((direct - f1.matrix()).cwiseAbs().maxCoeff() / direct.cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("tag_fim throws behind the near plane") {
  const CameraModel cam = identity_camera();
  std::array<HomPoint, 4> corners;
  corners.fill(HomPoint(0, 0, -1, 1));
  CHECK_THROWS_AS(tag_fim(Pose{}, corners, cam, NoiseModel{}), DepthBehindCamera);
}

TEST_CASE("detectable gates") {
  const CameraModel cam = test_camera();
  scene::Scene scn;
  scn.altitude = 1.5;

  ActiveSlot slot;
  slot.option.anchor = {3.0, 0.0};
  slot.option.normal = {-1.0, 0.0};
  slot.height = 1.5;
  slot.size = 0.23;

  const Pose facing = spatial::yaw_pose(0.0, Vec3(0, 0, 1.5));
  CHECK(detectable(facing, slot, scn, cam));

  // Behind the camera.
  const Pose away = spatial::yaw_pose(M_PI, Vec3(0, 0, 1.5));
  CHECK_FALSE(detectable(away, slot, scn, cam));

  // Beyond depth of view.
  ActiveSlot far_slot = slot;
  far_slot.option.anchor = {9.0, 0.0};
  CHECK_FALSE(detectable(facing, far_slot, scn, cam));

  // Back side of the tag.
  ActiveSlot flipped = slot;
  flipped.option.normal = {1.0, 0.0};
  CHECK_FALSE(detectable(facing, flipped, scn, cam));

  // Occluded by a wall between vehicle and tag.
  scn.obstacles.push_back(geom::Polygon{{{1.5, -1}, {1.6, -1}, {1.6, 1}, {1.5, 1}}});
  CHECK_FALSE(detectable(facing, slot, scn, cam));
}

TEST_CASE("detectable side-length threshold matches the closed form") {
  // Tag of size 0.165 on-axis at distance d: projected side ~ fu*size/d.
  // With fu = 600 and sl_min = 20 the cutoff sits at 4.95 m.
  const CameraModel cam = test_camera();
  scene::Scene scn;
  scn.altitude = 1.5;
  ActiveSlot slot;
  slot.option.normal = {-1.0, 0.0};
  slot.height = 1.5;
  slot.size = 0.165;
  const Pose pose = spatial::yaw_pose(0.0, Vec3(0, 0, 1.5));

  slot.option.anchor = {4.90, 0.0};
  CHECK(detectable(pose, slot, scn, cam));
  slot.option.anchor = {5.00, 0.0};
  CHECK_FALSE(detectable(pose, slot, scn, cam));
}

TEST_CASE("detectable monotone in depth of view") {
  CameraModel cam = test_camera();
  scene::Scene scn;
  Rng rng(77);
  for (int i = 0; i < 200; ++i) {
    ActiveSlot slot;
    slot.option.anchor = {rng.uniform01() * 8 - 1, rng.uniform01() * 8 - 1};
    const double a = rng.uniform01() * 2 * M_PI;
    slot.option.normal = {std::cos(a), std::sin(a)};
    slot.height = 1.0 + rng.uniform01();
    slot.size = 0.23;
    const Pose pose = spatial::yaw_pose(rng.uniform01() * 2 * M_PI,
                                        Vec3(rng.uniform01() * 4, rng.uniform01() * 4, 1.5));
    cam.dov = 4.0;
    const bool narrow = detectable(pose, slot, scn, cam);
    cam.dov = 9.0;
    const bool wide = detectable(pose, slot, scn, cam);
    if (narrow) CHECK(wide);
  }
}

TEST_CASE("pose_fim additivity and gating") {
  const CameraModel cam = test_camera();
  scene::Scene scn;
  scn.altitude = 1.5;
  const Pose pose = spatial::yaw_pose(0.0, Vec3(0, 0, 1.5));
  const NoiseModel noise;

  CHECK(pose_fim(pose, {}, scn, cam, noise).is_zero());

  ActiveSlot a;
  a.option.anchor = {2.5, -0.5};
  a.option.normal = {-1, 0};
  a.height = 1.5;
  a.size = 0.23;
  ActiveSlot b = a;
  b.option.anchor = {2.5, 0.5};
  ActiveSlot occluded = a;
  occluded.option.anchor = {9.5, 0.0};  // out of depth of view

  const Fim fa = pose_fim(pose, {a}, scn, cam, noise);
  const Fim fb = pose_fim(pose, {b}, scn, cam, noise);
  const Fim fab = pose_fim(pose, {a, b}, scn, cam, noise);
  const Fim fa_occ = pose_fim(pose, {a, occluded}, scn, cam, noise);

  for (std::size_t k = 0; k < kernel::kFimLen; ++k) {
    CHECK(fab.packed()[k] == doctest::Approx(fa.packed()[k] + fb.packed()[k]));
    CHECK(fa_occ.packed()[k] == fa.packed()[k]);
  }
}

TEST_CASE("pose_fim is order-invariant (canonical accumulation)") {
  const CameraModel cam = test_camera();
  scene::Scene scn;
  scn.altitude = 1.5;
  const Pose pose = spatial::yaw_pose(0.0, Vec3(0, 0, 1.5));
  const NoiseModel noise;

  std::vector<ActiveSlot> slots;
  for (int i = 0; i < 5; ++i) {
    ActiveSlot s;
    s.option.id = i;
    s.option.anchor = {2.0 + 0.4 * i, -0.8 + 0.4 * i};
    s.option.normal = {-1.0, 0.0};
    s.height = 1.5;
    s.size = 0.23;
    slots.push_back(s);
  }
  const Fim forward = pose_fim(pose, slots, scn, cam, noise);
  std::vector<ActiveSlot> reversed(slots.rbegin(), slots.rend());
  const Fim backward = pose_fim(pose, reversed, scn, cam, noise);
  for (std::size_t k = 0; k < kernel::kFimLen; ++k)
    CHECK(forward.packed()[k] == backward.packed()[k]);
}

TEST_CASE("metric values and monotonicity") {
  Fim zero;
  CHECK(metric(zero, MetricKind::Trace) == 0.0);
  CHECK(metric(zero, MetricKind::LogDet) == 0.0);
  CHECK(metric(zero, MetricKind::MinEig) == 0.0);

  const Mat6 eye = Mat6::Identity();
  CHECK(metric(eye, MetricKind::Trace) == doctest::Approx(6.0));
  CHECK(metric(eye, MetricKind::MinEig) == doctest::Approx(1.0));
  CHECK(metric(eye, MetricKind::LogDet) == doctest::Approx(std::log(2.0)));

  Rng rng(31);
  const auto random_psd = [&rng]() {
    Mat6 r;
    for (int i = 0; i < 6; ++i)
      for (int j = 0; j < 6; ++j) r(i, j) = rng.uniform01() * 2 - 1;
    return Mat6(r.transpose() * r);
  };
  for (int i = 0; i < 1000; ++i) {
    const Mat6 a = random_psd(), b = random_psd();
    for (const auto kind : {MetricKind::Trace, MetricKind::LogDet, MetricKind::MinEig})
      CHECK(metric(Mat6(a + b), kind) >= metric(a, kind));
  }
}

TEST_CASE("metric kind parsing round trip") {
  for (const auto kind : {MetricKind::Trace, MetricKind::LogDet, MetricKind::MinEig})
    CHECK(metric_from_string(to_string(kind)) == kind);
  CHECK_THROWS_AS(metric_from_string("det"), std::invalid_argument);
}
