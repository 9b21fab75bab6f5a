// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/spatial.hpp"

#include <cmath>

namespace tagplan::spatial {

Mat3 skew(const Vec3& v) {
  Mat3 m;
  m << 0.0, -v.z(), v.y(),
       v.z(), 0.0, -v.x(),
      -v.y(), v.x(), 0.0;
  return m;
}

Eigen::Matrix<double, 4, 6> odot(const HomPoint& p) {
  Eigen::Matrix<double, 4, 6> m = Eigen::Matrix<double, 4, 6>::Zero();
  const double eta = p(3);
  m.topLeftCorner<3, 3>() = eta * Mat3::Identity();
  m.block<3, 3>(0, 3) = -skew(p.head<3>());
  return m;
}

Mat4 hat(const Vec6& xi) {
  Mat4 m = Mat4::Zero();
  m.topLeftCorner<3, 3>() = skew(xi.tail<3>());
  m.topRightCorner<3, 1>() = xi.head<3>();
  return m;
}

Pose compose(const Pose& a, const Pose& b) {
  // (a ∘ b) p = a.C (b.C p + b.r) + a.r
  return {a.C * b.C, a.C * b.r + a.r};
}

Pose invert(const Pose& a) {
  const Mat3 Ct = a.C.transpose();
  return {Ct, -(Ct * a.r)};
}

HomPoint apply(const Pose& a, const HomPoint& p) {
  HomPoint q;
  q.head<3>() = a.C * p.head<3>() + a.r * p(3);
  q(3) = p(3);
  return q;
}

namespace {

constexpr double kSmallAngle = 1e-8;

// Rotation and left Jacobian of so(3) for one angle, sharing the series
// switch so exp stays smooth through zero.
void rotation_and_left_jacobian(const Vec3& phi, Mat3& C, Mat3& J) {
  const double theta = phi.norm();
  const Mat3 W = skew(phi);
  const Mat3 W2 = W * W;
  if (theta < kSmallAngle) {
    C = Mat3::Identity() + W + 0.5 * W2;
    J = Mat3::Identity() + 0.5 * W + W2 / 6.0;
    return;
  }
  const double t2 = theta * theta;
  const double s = std::sin(theta);
  const double c = std::cos(theta);
  C = Mat3::Identity() + (s / theta) * W + ((1.0 - c) / t2) * W2;
  J = Mat3::Identity() + ((1.0 - c) / t2) * W + ((theta - s) / (t2 * theta)) * W2;
}

}  // namespace

Pose exp_se3(const Vec6& xi) {
  const Vec3 rho = xi.head<3>();
  const Vec3 phi = xi.tail<3>();
  Mat3 C, J;
  rotation_and_left_jacobian(phi, C, J);
  return {C, J * rho};
}

Vec6 log_se3(const Pose& T) {
  const double tr = T.C.trace();
  const double cos_theta = std::min(1.0, std::max(-1.0, (tr - 1.0) / 2.0));
  const double theta = std::acos(cos_theta);

  Vec3 phi;
  if (theta < kSmallAngle) {
    // First order: C ≈ I + skew(phi).
    phi << (T.C(2, 1) - T.C(1, 2)) / 2.0,
           (T.C(0, 2) - T.C(2, 0)) / 2.0,
           (T.C(1, 0) - T.C(0, 1)) / 2.0;
  } else {
    const double k = theta / (2.0 * std::sin(theta));
    phi << k * (T.C(2, 1) - T.C(1, 2)),
           k * (T.C(0, 2) - T.C(2, 0)),
           k * (T.C(1, 0) - T.C(0, 1));
  }

  Mat3 C, J;
  rotation_and_left_jacobian(phi, C, J);
  Vec6 xi;
  xi.head<3>() = J.inverse() * T.r;
  xi.tail<3>() = phi;
  return xi;
}

Pose perturb_left(const Pose& T, const Vec6& xi) { return compose(exp_se3(xi), T); }

Pose yaw_pose(double yaw_rad, const Vec3& position_world) {
  Mat3 C_wb;  // body->world
  const double c = std::cos(yaw_rad), s = std::sin(yaw_rad);
  C_wb << c, -s, 0.0,
          s, c, 0.0,
          0.0, 0.0, 1.0;
  const Mat3 C = C_wb.transpose();
  return {C, -(C * position_world)};
}

Mat3 reorthonormalize(const Mat3& C) {
  Eigen::JacobiSVD<Mat3> svd(C, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Mat3 R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0.0) {
    Mat3 D = Mat3::Identity();
    D(2, 2) = -1.0;
    R = svd.matrixU() * D * svd.matrixV().transpose();
  }
  return R;
}

bool is_rotation(const Mat3& C, double tol) {
  const Mat3 E = C.transpose() * C - Mat3::Identity();
  return E.cwiseAbs().maxCoeff() <= tol && std::abs(C.determinant() - 1.0) <= tol;
}

}  // namespace tagplan::spatial
