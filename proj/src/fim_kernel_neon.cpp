// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/fim_kernel.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

namespace tagplan::kernel {

// Two items per iteration, one per lane. Same operation sequence as
// fim_batch_scalar (FNEG is an exact sign flip, FMUL/FADD/FSUB/FDIV are the
// elementwise IEEE operations), so results are bit-identical to the scalar
// reference.
void fim_batch_neon(const KernelContext& ctx, FimBatch& batch) {
  const double* R[9];
  const double* t[3];
  for (std::size_t k = 0; k < 9; ++k) R[k] = batch.row(FimBatch::kRotRow + k);
  for (std::size_t k = 0; k < 3; ++k) t[k] = batch.row(FimBatch::kTransRow + k);

  const double* cr = ctx.cam_rot.data();
  const double* ct = ctx.cam_trans.data();
  const float64x2_t fu = vdupq_n_f64(ctx.fu);
  const float64x2_t fv = vdupq_n_f64(ctx.fv);
  const float64x2_t inv_sigma2 = vdupq_n_f64(ctx.inv_sigma2);
  const float64x2_t one = vdupq_n_f64(1.0);

  float64x2_t crv[9], ctv[3];
  for (int k = 0; k < 9; ++k) crv[k] = vdupq_n_f64(cr[k]);
  for (int k = 0; k < 3; ++k) ctv[k] = vdupq_n_f64(ct[k]);

  for (std::size_t i = 0; i < batch.padded(); i += 2) {
    float64x2_t acc[kFimLen];
    for (std::size_t k = 0; k < kFimLen; ++k) acc[k] = vdupq_n_f64(0.0);

    float64x2_t r[9], tr[3];
    for (int k = 0; k < 9; ++k) r[k] = vld1q_f64(R[k] + i);
    for (int k = 0; k < 3; ++k) tr[k] = vld1q_f64(t[k] + i);

    for (int n = 0; n < 4; ++n) {
      const double* cxp = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 0);
      const double* cyp = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 1);
      const double* czp = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 2);
      const float64x2_t wx = vld1q_f64(cxp + i);
      const float64x2_t wy = vld1q_f64(cyp + i);
      const float64x2_t wz = vld1q_f64(czp + i);

      const float64x2_t vx = vaddq_f64(
          vaddq_f64(vaddq_f64(vmulq_f64(r[0], wx), vmulq_f64(r[1], wy)), vmulq_f64(r[2], wz)),
          tr[0]);
      const float64x2_t vy = vaddq_f64(
          vaddq_f64(vaddq_f64(vmulq_f64(r[3], wx), vmulq_f64(r[4], wy)), vmulq_f64(r[5], wz)),
          tr[1]);
      const float64x2_t vz = vaddq_f64(
          vaddq_f64(vaddq_f64(vmulq_f64(r[6], wx), vmulq_f64(r[7], wy)), vmulq_f64(r[8], wz)),
          tr[2]);

      const float64x2_t X = vaddq_f64(
          vaddq_f64(vaddq_f64(vmulq_f64(crv[0], vx), vmulq_f64(crv[1], vy)),
                    vmulq_f64(crv[2], vz)),
          ctv[0]);
      const float64x2_t Y = vaddq_f64(
          vaddq_f64(vaddq_f64(vmulq_f64(crv[3], vx), vmulq_f64(crv[4], vy)),
                    vmulq_f64(crv[5], vz)),
          ctv[1]);
      const float64x2_t Z = vaddq_f64(
          vaddq_f64(vaddq_f64(vmulq_f64(crv[6], vx), vmulq_f64(crv[7], vy)),
                    vmulq_f64(crv[8], vz)),
          ctv[2]);

      const float64x2_t iz = vdivq_f64(one, Z);
      const float64x2_t iz2 = vmulq_f64(iz, iz);
      const float64x2_t su0 = vmulq_f64(fu, iz);
      const float64x2_t su2 = vnegq_f64(vmulq_f64(fu, vmulq_f64(X, iz2)));
      const float64x2_t sv1 = vmulq_f64(fv, iz);
      const float64x2_t sv2 = vnegq_f64(vmulq_f64(fv, vmulq_f64(Y, iz2)));

      float64x2_t zf[3][6];
      for (int row = 0; row < 3; ++row) {
        zf[row][0] = crv[3 * row + 0];
        zf[row][1] = crv[3 * row + 1];
        zf[row][2] = crv[3 * row + 2];
        zf[row][3] =
            vnegq_f64(vsubq_f64(vmulq_f64(crv[3 * row + 1], vz), vmulq_f64(crv[3 * row + 2], vy)));
        zf[row][4] =
            vnegq_f64(vsubq_f64(vmulq_f64(crv[3 * row + 2], vx), vmulq_f64(crv[3 * row + 0], vz)));
        zf[row][5] =
            vnegq_f64(vsubq_f64(vmulq_f64(crv[3 * row + 0], vy), vmulq_f64(crv[3 * row + 1], vx)));
      }

      float64x2_t gu[6], gv[6];
      for (int k = 0; k < 6; ++k) {
        gu[k] = vaddq_f64(vmulq_f64(su0, zf[0][k]), vmulq_f64(su2, zf[2][k]));
        gv[k] = vaddq_f64(vmulq_f64(sv1, zf[1][k]), vmulq_f64(sv2, zf[2][k]));
      }

      std::size_t idx = 0;
      for (int a = 0; a < 6; ++a)
        for (int b = a; b < 6; ++b, ++idx)
          acc[idx] =
              vaddq_f64(acc[idx], vaddq_f64(vmulq_f64(gu[a], gu[b]), vmulq_f64(gv[a], gv[b])));
    }

    for (std::size_t k = 0; k < kFimLen; ++k)
      vst1q_f64(batch.row(FimBatch::kOutRow + k) + i, vmulq_f64(inv_sigma2, acc[k]));
  }
}

}  // namespace tagplan::kernel

#endif  // __aarch64__
