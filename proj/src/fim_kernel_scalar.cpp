// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/fim_kernel.hpp"

namespace tagplan::kernel {

FimBatch::FimBatch(std::size_t count)
    : count_(count),
      padded_(count == 0 ? 4 : (count + 3) & ~std::size_t{3}),
      data_(kRows * padded_, 0.0) {
  // Benign padding: identity pose, corners at unit depth, so the wide
  // kernels never divide by zero in dead lanes.
  for (std::size_t i = count_; i < padded_; ++i) {
    row(kRotRow + 0)[i] = 1.0;
    row(kRotRow + 4)[i] = 1.0;
    row(kRotRow + 8)[i] = 1.0;
    for (int c = 0; c < 4; ++c) row(kCornerRow + 3 * c + 2)[i] = 1.0;
  }
}

void FimBatch::set_pose(std::size_t item, const double* rot_row_major, const double* trans) {
  for (std::size_t k = 0; k < 9; ++k) row(kRotRow + k)[item] = rot_row_major[k];
  for (std::size_t k = 0; k < 3; ++k) row(kTransRow + k)[item] = trans[k];
}

void FimBatch::set_corner(std::size_t item, int corner, double x, double y, double z) {
  row(kCornerRow + 3 * static_cast<std::size_t>(corner) + 0)[item] = x;
  row(kCornerRow + 3 * static_cast<std::size_t>(corner) + 1)[item] = y;
  row(kCornerRow + 3 * static_cast<std::size_t>(corner) + 2)[item] = z;
}

std::array<double, kFimLen> FimBatch::result(std::size_t item) const {
  std::array<double, kFimLen> out;
  for (std::size_t k = 0; k < kFimLen; ++k) out[k] = row(kOutRow + k)[item];
  return out;
}

// Reference kernel. The AVX2/NEON variants in the sibling files mirror this
// operation sequence exactly, one item per lane; any edit here must be
// replayed there or the bit-equivalence tests fail.
void fim_batch_scalar(const KernelContext& ctx, FimBatch& batch) {
  const double* R[9];
  const double* t[3];
  for (std::size_t k = 0; k < 9; ++k) R[k] = batch.row(FimBatch::kRotRow + k);
  for (std::size_t k = 0; k < 3; ++k) t[k] = batch.row(FimBatch::kTransRow + k);

  const double* cr = ctx.cam_rot.data();
  const double* ct = ctx.cam_trans.data();
  const double fu = ctx.fu;
  const double fv = ctx.fv;

  for (std::size_t i = 0; i < batch.count(); ++i) {
    double acc[kFimLen] = {0.0};

    for (int n = 0; n < 4; ++n) {
      const double* cx = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 0);
      const double* cy = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 1);
      const double* cz = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 2);
      const double wx = cx[i], wy = cy[i], wz = cz[i];

      // Vehicle-frame corner.
      const double vx = R[0][i] * wx + R[1][i] * wy + R[2][i] * wz + t[0][i];
      const double vy = R[3][i] * wx + R[4][i] * wy + R[5][i] * wz + t[1][i];
      const double vz = R[6][i] * wx + R[7][i] * wy + R[8][i] * wz + t[2][i];

      // Camera-frame corner.
      const double X = cr[0] * vx + cr[1] * vy + cr[2] * vz + ct[0];
      const double Y = cr[3] * vx + cr[4] * vy + cr[5] * vz + ct[1];
      const double Z = cr[6] * vx + cr[7] * vy + cr[8] * vz + ct[2];

      const double iz = 1.0 / Z;
      const double iz2 = iz * iz;
      const double su0 = fu * iz;
      const double su2 = -(fu * (X * iz2));
      const double sv1 = fv * iz;
      const double sv2 = -(fv * (Y * iz2));

      // Pose-perturbation factor [C_cv | -C_cv*skew(p_v)], rows 0 and 2
      // premultiplied by the projection rows above.
      double zf[3][6];
      for (int r = 0; r < 3; ++r) {
        zf[r][0] = cr[3 * r + 0];
        zf[r][1] = cr[3 * r + 1];
        zf[r][2] = cr[3 * r + 2];
        zf[r][3] = -(cr[3 * r + 1] * vz - cr[3 * r + 2] * vy);
        zf[r][4] = -(cr[3 * r + 2] * vx - cr[3 * r + 0] * vz);
        zf[r][5] = -(cr[3 * r + 0] * vy - cr[3 * r + 1] * vx);
      }

      double gu[6], gv[6];
      for (int k = 0; k < 6; ++k) {
        gu[k] = su0 * zf[0][k] + su2 * zf[2][k];
        gv[k] = sv1 * zf[1][k] + sv2 * zf[2][k];
      }

      std::size_t idx = 0;
      for (int a = 0; a < 6; ++a)
        for (int b = a; b < 6; ++b, ++idx) acc[idx] += gu[a] * gu[b] + gv[a] * gv[b];
    }

    for (std::size_t k = 0; k < kFimLen; ++k)
      batch.row(FimBatch::kOutRow + k)[i] = ctx.inv_sigma2 * acc[k];
  }
}

}  // namespace tagplan::kernel
