// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <array>
#include <atomic>
#include <cstdint>
#include <mutex>
#include <span>
#include <unordered_map>
#include <vector>

#include "tagplan/fim_kernel.hpp"
#include "tagplan/ga.hpp"
#include "tagplan/project_model.hpp"

namespace tagplan::valuation {

/// Cache of per-(query pose, slot, size) information matrices, compressed to
/// 21 floats each. Undetectable pairs are stored as explicit zeros so they
/// are never recomputed. Values are identical whichever path computes them,
/// so determinism does not depend on thread count or fill order.
class FimTable {
 public:
  struct Entry {
    std::uint32_t slot = 0;
    std::uint8_t size_value = 0;  // 1-based gene value
    std::array<float, kernel::kFimLen> fim{};
  };

  explicit FimTable(const model::ProjectModel& m);

  /// Fills every feasible (pose, slot, size) key, batching the information
  /// math through the active SIMD kernel. Idempotent.
  void precompute_all(unsigned threads = 0);
  bool precomputed() const { return precomputed_; }

  /// Non-zero entries of one pose, sorted by (slot, size). Requires
  /// precompute_all.
  std::span<const Entry> entries(std::size_t phase, std::size_t pose) const;

  /// Cached value if present (counted as a hit), else computes, stores, and
  /// returns it. Zero means computed-but-undetectable.
  std::array<float, kernel::kFimLen> get_or_compute(std::size_t phase, std::size_t pose,
                                                    std::uint32_t slot, int size_value);

  std::uint64_t hits() const { return hits_.load(std::memory_order_relaxed); }
  std::uint64_t misses() const { return misses_.load(std::memory_order_relaxed); }
  double hit_rate() const;

  const model::ProjectModel& project() const { return *model_; }

  // Raw access for the binary cache file.
  struct PhaseData {
    std::vector<std::uint32_t> pose_offset;  // poses + 1
    std::vector<Entry> entries;
  };
  const std::vector<PhaseData>& phase_data() const { return phases_; }
  void adopt(std::vector<PhaseData> phases);  // marks the table precomputed

 private:
  std::array<float, kernel::kFimLen> compute_key(std::size_t phase, std::size_t pose,
                                                 std::uint32_t slot, int size_value) const;

  const model::ProjectModel* model_;
  bool precomputed_ = false;
  std::vector<PhaseData> phases_;

  // Lazy side table for the on-demand mode.
  mutable std::mutex lazy_mutex_;
  std::vector<std::unordered_map<std::uint64_t, std::array<float, kernel::kFimLen>>> lazy_;
  mutable std::atomic<std::uint64_t> hits_{0};
  mutable std::atomic<std::uint64_t> misses_{0};
};

struct ChangeCounts {
  std::vector<long> placements;  // per size index
  long removals = 0;
  long replacements = 0;

  long total_placements() const;
};

/// Placement/removal/replacement counting across consecutive phases. A slot
/// that becomes infeasible (wall demolished) drops its tag for free; a size
/// change is one removal plus one placement; a run of L active phases incurs
/// floor((L-1)/k_wear) wear replacements.
ChangeCounts count_changes(const model::ProjectModel& m, const ga::Chromosome& c, int k_wear);

/// Installation cost w_plc * [sum_i n_plc_i / alpha_i + n_rmv / lambda_rmv
/// + lambda_rpl * n_rpl] with w_plc = s_min * p_c * n_cells_total.
double cost(const ChangeCounts& counts, std::size_t n_cells_total, const CostParams& cp);

/// Frozen scoring view over a precomputed table: per-cell capacities and,
/// for the trace metric, a per-gene additive lookup that makes chromosome
/// scoring O(active genes).
class Evaluator {
 public:
  Evaluator(const model::ProjectModel& m, const FimTable& table, sensing::MetricKind metric,
            bool normalize, bool cost_enabled);

  /// Sum over the cell's query poses of metric(sum of active tag FIMs),
  /// divided by capacity in normalized mode (0 when capacity is 0).
  double cell_utility(const ga::Chromosome& c, std::size_t phase, std::size_t cell) const;

  /// Utility of the cell with every feasible slot at the largest size;
  /// configuration-independent, cached at construction.
  double cell_capacity(std::size_t phase, std::size_t cell) const {
    return capacities_[phase][cell];
  }

  double total_utility(const ga::Chromosome& c) const;
  double total_cost(const ga::Chromosome& c) const;
  double score(const ga::Chromosome& c) const;

  std::size_t n_cells_total() const { return n_cells_total_; }
  sensing::MetricKind metric_kind() const { return metric_; }
  bool normalized() const { return normalize_; }

  /// Normalized per-cell utilities for one phase, clamped to [0, 1] (the
  /// heatmap values).
  std::vector<double> phase_cell_utilities(const ga::Chromosome& c, std::size_t phase) const;

  /// Slow-path total utility, bypassing the trace lookup (test oracle).
  double total_utility_generic(const ga::Chromosome& c) const;

 private:
  double pose_metric(const ga::Chromosome& c, std::size_t phase, std::size_t pose) const;

  const model::ProjectModel* model_;
  const FimTable* table_;
  sensing::MetricKind metric_;
  bool normalize_;
  bool cost_enabled_;
  std::size_t n_cells_total_ = 0;
  std::vector<std::vector<double>> capacities_;  // [phase][cell]
  bool use_trace_lut_ = false;
  std::vector<double> trace_lut_;  // [gene * n_sizes + size-1] weighted trace sums
};

}  // namespace tagplan::valuation
