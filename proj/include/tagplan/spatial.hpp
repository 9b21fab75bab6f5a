// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <Eigen/Dense>

namespace tagplan::spatial {

using Vec3 = Eigen::Vector3d;
using Vec6 = Eigen::Matrix<double, 6, 1>;
using Mat3 = Eigen::Matrix3d;
using Mat4 = Eigen::Matrix4d;
using Mat6 = Eigen::Matrix<double, 6, 6>;
using HomPoint = Eigen::Vector4d;  // [x, y, z, 1] for points

/// Rigid transform mapping world coordinates into a body frame:
/// p_body = C * p_world + r.
struct Pose {
  Mat3 C = Mat3::Identity();
  Vec3 r = Vec3::Zero();

  static Pose identity() { return {}; }

  Mat4 matrix() const {
    Mat4 T = Mat4::Identity();
    T.topLeftCorner<3, 3>() = C;
    T.topRightCorner<3, 1>() = r;
    return T;
  }

  /// Body origin expressed in the world frame, -C^T r.
  Vec3 origin_in_world() const { return -C.transpose() * r; }
};

Mat3 skew(const Vec3& v);

/// The 4x6 operator on homogeneous points: [[eta*I, -skew(eps)], [0, 0]].
/// Perturbation order is translation first, rotation last.
Eigen::Matrix<double, 4, 6> odot(const HomPoint& p);

/// 4x4 se(3) matrix of xi = [rho; phi]: [[skew(phi), rho], [0, 0]].
Mat4 hat(const Vec6& xi);

Pose compose(const Pose& a, const Pose& b);
Pose invert(const Pose& a);
HomPoint apply(const Pose& a, const HomPoint& p);

/// Closed-form SE(3) exponential; series expansion below angle 1e-8.
Pose exp_se3(const Vec6& xi);

/// Inverse of exp_se3 for rotation angles away from pi.
Vec6 log_se3(const Pose& T);

/// Left perturbation exp_se3(xi) ∘ T.
Pose perturb_left(const Pose& T, const Vec6& xi);

/// Rotation about world z by yaw (radians), as a world->body map.
Pose yaw_pose(double yaw_rad, const Vec3& position_world);

/// Projects C back onto SO(3) (nearest rotation by SVD).
Mat3 reorthonormalize(const Mat3& C);

bool is_rotation(const Mat3& C, double tol = 1e-9);

}  // namespace tagplan::spatial
