// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>

#include "tagplan/fim_kernel.hpp"
#include "tagplan/rng.hpp"
#include "tagplan/sensing.hpp"
#include "tagplan/spatial.hpp"

using namespace tagplan;
using namespace tagplan::kernel;

namespace {

KernelContext random_context(Rng& rng) {
  KernelContext ctx;
  const spatial::Pose t_cv =
      spatial::exp_se3((spatial::Vec6() << rng.uniform01(), rng.uniform01(), rng.uniform01(),
                        rng.uniform01(), rng.uniform01(), rng.uniform01())
                           .finished());
  const Eigen::Matrix<double, 3, 3, Eigen::RowMajor> rot = t_cv.C;
  for (int k = 0; k < 9; ++k) ctx.cam_rot[static_cast<std::size_t>(k)] = rot.data()[k];
  for (int k = 0; k < 3; ++k) ctx.cam_trans[static_cast<std::size_t>(k)] = t_cv.r(k);
  ctx.fu = 400.0 + rng.uniform01() * 400.0;
  ctx.fv = 400.0 + rng.uniform01() * 400.0;
  ctx.inv_sigma2 = 0.25 + rng.uniform01();
  return ctx;
}

void fill_random(FimBatch& batch, Rng& rng) {
  for (std::size_t i = 0; i < batch.count(); ++i) {
    const spatial::Pose pose = spatial::yaw_pose(
        rng.uniform01() * 2 * M_PI,
        spatial::Vec3(rng.uniform01() * 4, rng.uniform01() * 4, 1 + rng.uniform01()));
    const Eigen::Matrix<double, 3, 3, Eigen::RowMajor> rot = pose.C;
    batch.set_pose(i, rot.data(), pose.r.data());
    for (int c = 0; c < 4; ++c) {
      // Keep corners in front of every plausible camera: place them far
      // from the vehicle positions used above.
      batch.set_corner(i, c, 20.0 + rng.uniform01(), 20.0 + rng.uniform01(),
                       1.0 + rng.uniform01());
    }
  }
}

}  // namespace

TEST_CASE("tri_index covers the packed upper triangle") {
  std::size_t k = 0;
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = i; j < 6; ++j, ++k) CHECK(tri_index(i, j) == k);
  CHECK(k == kFimLen);
}

TEST_CASE("batch padding is benign") {
  FimBatch batch(1);
  CHECK(batch.padded() % 4 == 0);
  const double rot[9] = {1, 0, 0, 0, 1, 0, 0, 0, 1};
  const double trans[3] = {0, 0, 0};
  batch.set_pose(0, rot, trans);
  for (int c = 0; c < 4; ++c) batch.set_corner(0, c, 0.1 * c, -0.1 * c, 2.0 + c);
  const KernelContext ctx;  // identity camera
  for (const auto& variant : available_kernels()) {
    FimBatch copy = batch;
    variant.fn(ctx, copy);  // pad lanes must not poison anything
    for (double v : copy.result(0)) {
      CHECK(std::isfinite(v));
    }
  }
}

TEST_CASE("wide kernels are bit-identical to the scalar reference") {
  const auto& kernels = available_kernels();
  REQUIRE(!kernels.empty());
  CHECK(kernels.front().name == "scalar");
  // Report which variants this host runs.
  for (const auto& k : kernels) MESSAGE("kernel available: ", k.name);

  Rng rng(123);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng.index(13);  // odd sizes exercise the tail
    const KernelContext ctx = random_context(rng);

    FimBatch reference(n);
    fill_random(reference, rng);

    for (const auto& variant : kernels) {
      if (variant.name == "scalar") continue;
      FimBatch other = reference;  // identical inputs
      variant.fn(ctx, other);
      FimBatch scalar = reference;
      fim_batch_scalar(ctx, scalar);
      for (std::size_t i = 0; i < n; ++i) {
        const auto a = scalar.result(i);
        const auto b = other.result(i);
        CHECK(std::memcmp(a.data(), b.data(), sizeof(a)) == 0);
      }
    }
  }
}

TEST_CASE("kernel agrees with the Eigen-path Jacobian assembly") {
  Rng rng(9);
  sensing::CameraModel cam;
  cam.t_cv = sensing::forward_camera_extrinsics();
  const sensing::NoiseModel noise;

  for (int i = 0; i < 25; ++i) {
    const spatial::Pose t_vw = spatial::yaw_pose(
        rng.uniform01() * 2 * M_PI,
        spatial::Vec3(rng.uniform01() * 2, rng.uniform01() * 2, 1 + rng.uniform01()));
    scene::TagOption opt;
    opt.anchor = {4.0 + rng.uniform01() * 2.0, rng.uniform01() * 2.0};
    opt.normal = {-1.0, 0.0};
    const auto corners = scene::tag_corners_world(opt, 1.2 + rng.uniform01(), 0.23);

    bool in_front = true;
    for (const auto& c : corners)
      in_front = in_front && sensing::to_camera(t_vw, cam, c).z() >= cam.near_z;
    if (!in_front) continue;

    const sensing::Fim from_kernel = sensing::tag_fim(t_vw, corners, cam, noise);
    spatial::Mat6 direct = spatial::Mat6::Zero();
    for (const auto& c : corners) {
      const auto G = sensing::corner_jacobian(t_vw, cam, c);
      direct += noise.inv_sigma2() * G.transpose() * G;
    }
    const double rel = (direct - from_kernel.matrix()).cwiseAbs().maxCoeff() /
                       direct.cwiseAbs().maxCoeff();
    CHECK(rel < 1e-12);
  }
}

TEST_CASE("active kernel honours TAGPLAN_SIMD") {
  // The dispatcher reads the environment once; just assert the selected
  // kernel is one of the available ones.
  const auto& active = active_kernel();
  bool found = false;
  for (const auto& k : available_kernels()) found = found || k.name == active.name;
  CHECK(found);
}
