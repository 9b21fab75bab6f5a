// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/fim_kernel.hpp"

#include <cstdlib>
#include <cstring>

namespace tagplan::kernel {

const std::vector<KernelVariant>& available_kernels() {
  static const std::vector<KernelVariant> kernels = [] {
    std::vector<KernelVariant> v;
    v.push_back({"scalar", &fim_batch_scalar});
#if defined(__x86_64__) || defined(_M_X64)
    if (__builtin_cpu_supports("avx2")) v.push_back({"avx2", &fim_batch_avx2});
#endif
#if defined(__aarch64__)
    v.push_back({"neon", &fim_batch_neon});
#endif
    return v;
  }();
  return kernels;
}

const KernelVariant& active_kernel() {
  static const KernelVariant selected = [] {
    const auto& kernels = available_kernels();
    if (const char* env = std::getenv("TAGPLAN_SIMD")) {
      for (const KernelVariant& k : kernels)
        if (k.name == env) return k;
      // Unknown or unsupported name: fall through to the default choice.
    }
    return kernels.back();  // widest supported
  }();
  return selected;
}

}  // namespace tagplan::kernel
