// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace tagplan::kernel {

/// Number of stored reals per 6x6 symmetric information matrix.
inline constexpr std::size_t kFimLen = 21;

/// Flat index of (i, j), i <= j, into the packed upper triangle.
constexpr std::size_t tri_index(std::size_t i, std::size_t j) {
  return i * (13 - i) / 2 + (j - i);
}

/// Per-batch constants: the vehicle-to-camera transform, the focal lengths,
/// and the inverse pixel-noise variance.
struct KernelContext {
  std::array<double, 9> cam_rot{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major C_cv
  std::array<double, 3> cam_trans{0, 0, 0};
  double fu = 1.0;
  double fv = 1.0;
  double inv_sigma2 = 1.0;
};

/// Structure-of-arrays batch of independent tag-FIM work items. Each item is
/// one (vehicle pose, 4 world corners) pair; the result is the packed 6x6
/// information matrix of the 8 corner-pixel measurements. All corner depths
/// must already be gated positive (see sensing::detectable); the kernels do
/// no validity checks.
///
/// Layout: 45 rows of `padded()` doubles each, padded to a multiple of the
/// widest lane count. Rows 0..8 are the world-to-vehicle rotation
/// (row-major), 9..11 its translation, 12..23 the corner coordinates
/// (corner n at rows 12+3n), 24..44 the outputs.
class FimBatch {
 public:
  explicit FimBatch(std::size_t count);

  std::size_t count() const { return count_; }
  std::size_t padded() const { return padded_; }

  void set_pose(std::size_t item, const double* rot_row_major, const double* trans);
  void set_corner(std::size_t item, int corner, double x, double y, double z);

  std::array<double, kFimLen> result(std::size_t item) const;

  const double* row(std::size_t r) const { return data_.data() + r * padded_; }
  double* row(std::size_t r) { return data_.data() + r * padded_; }

  static constexpr std::size_t kRotRow = 0;
  static constexpr std::size_t kTransRow = 9;
  static constexpr std::size_t kCornerRow = 12;
  static constexpr std::size_t kOutRow = 24;
  static constexpr std::size_t kRows = 45;

 private:
  std::size_t count_;
  std::size_t padded_;
  std::vector<double> data_;  // padded_ is a multiple of 4 so rows stay aligned
};

/// Kernel variants compute bit-identical results: the wide versions batch
/// independent items across lanes and execute the scalar reference's exact
/// operation sequence per lane.
using FimKernelFn = void (*)(const KernelContext&, FimBatch&);

void fim_batch_scalar(const KernelContext& ctx, FimBatch& batch);
#if defined(__x86_64__) || defined(_M_X64)
void fim_batch_avx2(const KernelContext& ctx, FimBatch& batch);
#endif
#if defined(__aarch64__)
void fim_batch_neon(const KernelContext& ctx, FimBatch& batch);
#endif

struct KernelVariant {
  std::string name;
  FimKernelFn fn;
};

/// Variants compiled in and supported by this CPU (scalar first).
const std::vector<KernelVariant>& available_kernels();

/// The variant used by sensing::tag_fim: the widest supported one, unless
/// overridden by TAGPLAN_SIMD=scalar|avx2|neon (read once).
const KernelVariant& active_kernel();

}  // namespace tagplan::kernel
