// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/fim_kernel.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

namespace tagplan::kernel {

namespace {

// IEEE sign flip, identical to scalar unary minus.
inline __m256d neg(__m256d x) { return _mm256_xor_pd(x, _mm256_set1_pd(-0.0)); }

}  // namespace

// Four items per iteration, one per lane. Same operation sequence as
// fim_batch_scalar, elementwise IEEE mul/add/sub/div only (no FMA), so the
// results are bit-identical to the scalar reference.
void fim_batch_avx2(const KernelContext& ctx, FimBatch& batch) {
  const double* R[9];
  const double* t[3];
  for (std::size_t k = 0; k < 9; ++k) R[k] = batch.row(FimBatch::kRotRow + k);
  for (std::size_t k = 0; k < 3; ++k) t[k] = batch.row(FimBatch::kTransRow + k);

  const double* cr = ctx.cam_rot.data();
  const double* ct = ctx.cam_trans.data();
  const __m256d fu = _mm256_set1_pd(ctx.fu);
  const __m256d fv = _mm256_set1_pd(ctx.fv);
  const __m256d inv_sigma2 = _mm256_set1_pd(ctx.inv_sigma2);
  const __m256d one = _mm256_set1_pd(1.0);

  __m256d crv[9], ctv[3];
  for (int k = 0; k < 9; ++k) crv[k] = _mm256_set1_pd(cr[k]);
  for (int k = 0; k < 3; ++k) ctv[k] = _mm256_set1_pd(ct[k]);

  for (std::size_t i = 0; i < batch.padded(); i += 4) {
    __m256d acc[kFimLen];
    for (std::size_t k = 0; k < kFimLen; ++k) acc[k] = _mm256_setzero_pd();

    const __m256d r0 = _mm256_loadu_pd(R[0] + i), r1 = _mm256_loadu_pd(R[1] + i),
                  r2 = _mm256_loadu_pd(R[2] + i), r3 = _mm256_loadu_pd(R[3] + i),
                  r4 = _mm256_loadu_pd(R[4] + i), r5 = _mm256_loadu_pd(R[5] + i),
                  r6 = _mm256_loadu_pd(R[6] + i), r7 = _mm256_loadu_pd(R[7] + i),
                  r8 = _mm256_loadu_pd(R[8] + i);
    const __m256d t0 = _mm256_loadu_pd(t[0] + i), t1 = _mm256_loadu_pd(t[1] + i),
                  t2 = _mm256_loadu_pd(t[2] + i);

    for (int n = 0; n < 4; ++n) {
      const double* cxp = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 0);
      const double* cyp = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 1);
      const double* czp = batch.row(FimBatch::kCornerRow + 3 * static_cast<std::size_t>(n) + 2);
      const __m256d wx = _mm256_loadu_pd(cxp + i);
      const __m256d wy = _mm256_loadu_pd(cyp + i);
      const __m256d wz = _mm256_loadu_pd(czp + i);

      // vx = R0*wx + R1*wy + R2*wz + t0, matching the scalar associativity
      // ((R0*wx + R1*wy) + R2*wz) + t0.
      const __m256d vx = _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r0, wx), _mm256_mul_pd(r1, wy)),
                        _mm256_mul_pd(r2, wz)),
          t0);
      const __m256d vy = _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r3, wx), _mm256_mul_pd(r4, wy)),
                        _mm256_mul_pd(r5, wz)),
          t1);
      const __m256d vz = _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(r6, wx), _mm256_mul_pd(r7, wy)),
                        _mm256_mul_pd(r8, wz)),
          t2);

      const __m256d X = _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(crv[0], vx), _mm256_mul_pd(crv[1], vy)),
                        _mm256_mul_pd(crv[2], vz)),
          ctv[0]);
      const __m256d Y = _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(crv[3], vx), _mm256_mul_pd(crv[4], vy)),
                        _mm256_mul_pd(crv[5], vz)),
          ctv[1]);
      const __m256d Z = _mm256_add_pd(
          _mm256_add_pd(_mm256_add_pd(_mm256_mul_pd(crv[6], vx), _mm256_mul_pd(crv[7], vy)),
                        _mm256_mul_pd(crv[8], vz)),
          ctv[2]);

      const __m256d iz = _mm256_div_pd(one, Z);
      const __m256d iz2 = _mm256_mul_pd(iz, iz);
      const __m256d su0 = _mm256_mul_pd(fu, iz);
      const __m256d su2 = neg(_mm256_mul_pd(fu, _mm256_mul_pd(X, iz2)));
      const __m256d sv1 = _mm256_mul_pd(fv, iz);
      const __m256d sv2 = neg(_mm256_mul_pd(fv, _mm256_mul_pd(Y, iz2)));

      __m256d zf[3][6];
      for (int r = 0; r < 3; ++r) {
        zf[r][0] = crv[3 * r + 0];
        zf[r][1] = crv[3 * r + 1];
        zf[r][2] = crv[3 * r + 2];
        zf[r][3] = neg(_mm256_sub_pd(_mm256_mul_pd(crv[3 * r + 1], vz),
                                     _mm256_mul_pd(crv[3 * r + 2], vy)));
        zf[r][4] = neg(_mm256_sub_pd(_mm256_mul_pd(crv[3 * r + 2], vx),
                                     _mm256_mul_pd(crv[3 * r + 0], vz)));
        zf[r][5] = neg(_mm256_sub_pd(_mm256_mul_pd(crv[3 * r + 0], vy),
                                     _mm256_mul_pd(crv[3 * r + 1], vx)));
      }

      __m256d gu[6], gv[6];
      for (int k = 0; k < 6; ++k) {
        gu[k] = _mm256_add_pd(_mm256_mul_pd(su0, zf[0][k]), _mm256_mul_pd(su2, zf[2][k]));
        gv[k] = _mm256_add_pd(_mm256_mul_pd(sv1, zf[1][k]), _mm256_mul_pd(sv2, zf[2][k]));
      }

      std::size_t idx = 0;
      for (int a = 0; a < 6; ++a)
        for (int b = a; b < 6; ++b, ++idx)
          acc[idx] = _mm256_add_pd(
              acc[idx],
              _mm256_add_pd(_mm256_mul_pd(gu[a], gu[b]), _mm256_mul_pd(gv[a], gv[b])));
    }

    for (std::size_t k = 0; k < kFimLen; ++k)
      _mm256_storeu_pd(batch.row(FimBatch::kOutRow + k) + i, _mm256_mul_pd(inv_sigma2, acc[k]));
  }
}

}  // namespace tagplan::kernel

#endif  // x86_64
