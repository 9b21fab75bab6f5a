// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/valuation.hpp"

#include <algorithm>
#include <cmath>

#include "tagplan/thread_pool.hpp"

namespace tagplan::valuation {

void PlanningParams::validate() const {
  if (cell_size <= 0.0) throw model::ProjectSchemaError("planning: cell_size must be positive");
  if (delta_theta_deg <= 0.0 ||
      std::abs(std::remainder(360.0, delta_theta_deg)) > 1e-9)
    throw model::ProjectSchemaError("planning: delta_theta must divide 360");
  if (d_res <= 0.0) throw model::ProjectSchemaError("planning: d_res must be positive");
  if (tag_sizes.empty()) throw model::ProjectSchemaError("planning: tag_sizes must be non-empty");
  for (double s : tag_sizes)
    if (s <= 0.0) throw model::ProjectSchemaError("planning: tag sizes must be positive");
  if (tag_sizes.size() > 1) {
    const bool asc = std::is_sorted(tag_sizes.begin(), tag_sizes.end(), std::less<double>());
    const bool desc = std::is_sorted(tag_sizes.begin(), tag_sizes.end(), std::greater<double>());
    if (!asc && !desc)
      throw model::ProjectSchemaError("planning: tag_sizes must be strictly monotonic");
    for (std::size_t i = 1; i < tag_sizes.size(); ++i)
      if (tag_sizes[i] == tag_sizes[i - 1])
        throw model::ProjectSchemaError("planning: tag_sizes must be strictly monotonic");
  }
  if (max_tags_per_phase < 0)
    throw model::ProjectSchemaError("planning: max_tags_per_phase must be >= 0");
}

int PlanningParams::max_size_value() const {
  const auto it = std::max_element(tag_sizes.begin(), tag_sizes.end());
  return static_cast<int>(std::distance(tag_sizes.begin(), it)) + 1;
}

void CostParams::validate(std::size_t n_sizes) const {
  if (alpha.size() != n_sizes)
    throw model::ProjectSchemaError("cost: alpha must have one entry per tag size");
  int units = 0;
  for (double a : alpha) {
    if (!(a > 0.0 && a <= 1.0))
      throw model::ProjectSchemaError("cost: alpha entries must be in (0, 1]");
    if (a == 1.0) ++units;
  }
  if (units != 1)
    throw model::ProjectSchemaError("cost: exactly one alpha must equal 1 (the reference tag)");
  if (!(lambda_rmv > 0.0 && lambda_rmv <= 1.0))
    throw model::ProjectSchemaError("cost: lambda_rmv must be in (0, 1]");
  if (lambda_rpl < 0.0) throw model::ProjectSchemaError("cost: lambda_rpl must be >= 0");
  if (k_wear < 1) throw model::ProjectSchemaError("cost: k_wear must be >= 1");
  if (s_min < 0.0 || p_c < 0.0)
    throw model::ProjectSchemaError("cost: s_min and p_c must be >= 0");
}

std::vector<QueryPose> enumerate_query_poses(const std::vector<scene::GridCell>& cells,
                                             const std::vector<double>& altitudes,
                                             double delta_theta_deg) {
  const int n_yaw = static_cast<int>(std::lround(360.0 / delta_theta_deg));
  std::vector<QueryPose> poses;
  poses.reserve(cells.size() * altitudes.size() * static_cast<std::size_t>(n_yaw));
  for (std::size_t ci = 0; ci < cells.size(); ++ci) {
    for (double alt : altitudes) {
      for (int k = 0; k < n_yaw; ++k) {
        QueryPose qp;
        qp.cell_index = static_cast<int>(ci);
        qp.altitude = alt;
        qp.yaw_deg = delta_theta_deg * k;
        const spatial::Vec3 pos(cells[ci].center.x, cells[ci].center.y, alt);
        qp.t_vw = spatial::yaw_pose(qp.yaw_deg * M_PI / 180.0, pos);
        poses.push_back(std::move(qp));
      }
    }
  }
  return poses;
}

// ---------------------------------------------------------------------------
// FimTable

namespace {

// Exact packing: poses < 2^32, slots < 2^24, size values < 2^8.
std::uint64_t lazy_key(std::size_t pose, std::uint32_t slot, int size_value) {
  return (static_cast<std::uint64_t>(pose) << 32) |
         (static_cast<std::uint64_t>(slot) << 8) | static_cast<std::uint64_t>(size_value);
}

}  // namespace

FimTable::FimTable(const model::ProjectModel& m) : model_(&m) {
  phases_.resize(m.n_phases());
  lazy_.resize(m.n_phases());
}

std::array<float, kernel::kFimLen> FimTable::compute_key(std::size_t phase, std::size_t pose,
                                                         std::uint32_t slot,
                                                         int size_value) const {
  std::array<float, kernel::kFimLen> out{};
  if (!model_->feasible(phase, slot)) return out;
  const model::PhaseModel& pm = model_->phases[phase];
  const QueryPose& qp = pm.poses[pose];
  const sensing::ActiveSlot as = model_->active_slot(slot, size_value);
  // Occlusion is checked in the scene of the pose's own flight layer.
  const scene::Scene& scn = pm.scenes[0];
  if (!sensing::detectable(qp.t_vw, as, scn, model_->spec.camera)) return out;
  const sensing::Fim f = sensing::tag_fim(
      qp.t_vw, scene::tag_corners_world(as.option, as.height, as.size), model_->spec.camera,
      model_->spec.noise);
  for (std::size_t k = 0; k < kernel::kFimLen; ++k) out[k] = static_cast<float>(f.packed()[k]);
  return out;
}

void FimTable::precompute_all(unsigned threads) {
  if (precomputed_) return;
  const model::ProjectModel& m = *model_;
  const kernel::KernelContext ctx = [&] {
    kernel::KernelContext c;
    const Eigen::Matrix<double, 3, 3, Eigen::RowMajor> crot = m.spec.camera.t_cv.C;
    for (int k = 0; k < 9; ++k) c.cam_rot[static_cast<std::size_t>(k)] = crot.data()[k];
    for (int k = 0; k < 3; ++k) c.cam_trans[static_cast<std::size_t>(k)] = m.spec.camera.t_cv.r(k);
    c.fu = m.spec.camera.fu;
    c.fv = m.spec.camera.fv;
    c.inv_sigma2 = m.spec.noise.inv_sigma2();
    return c;
  }();

  for (std::size_t pi = 0; pi < m.n_phases(); ++pi) {
    const model::PhaseModel& pm = m.phases[pi];
    const std::size_t n_poses = pm.poses.size();
    std::vector<std::vector<Entry>> per_pose(n_poses);

    // Feasible slots once per phase.
    std::vector<std::uint32_t> phase_slots;
    for (std::size_t si = 0; si < m.n_slots(); ++si)
      if (m.feasible(pi, si)) phase_slots.push_back(static_cast<std::uint32_t>(si));

    parallel_for(
        n_poses,
        [&](std::size_t qi) {
          const QueryPose& qp = pm.poses[qi];
          const scene::Scene& scn = pm.scenes[0];
          std::vector<Entry>& bucket = per_pose[qi];
          std::vector<std::array<spatial::HomPoint, 4>> corner_list;
          for (const std::uint32_t si : phase_slots) {
            for (int sv = 1; sv <= m.n_sizes(); ++sv) {
              const sensing::ActiveSlot as = m.active_slot(si, sv);
              if (!sensing::detectable(qp.t_vw, as, scn, m.spec.camera)) continue;
              Entry e;
              e.slot = si;
              e.size_value = static_cast<std::uint8_t>(sv);
              bucket.push_back(e);
              corner_list.push_back(scene::tag_corners_world(as.option, as.height, as.size));
            }
          }
          if (bucket.empty()) return;

          kernel::FimBatch batch(bucket.size());
          const Eigen::Matrix<double, 3, 3, Eigen::RowMajor> rot = qp.t_vw.C;
          for (std::size_t bi = 0; bi < bucket.size(); ++bi) {
            batch.set_pose(bi, rot.data(), qp.t_vw.r.data());
            for (int n = 0; n < 4; ++n) {
              const spatial::HomPoint& c = corner_list[bi][static_cast<std::size_t>(n)];
              batch.set_corner(bi, n, c(0), c(1), c(2));
            }
          }
          kernel::active_kernel().fn(ctx, batch);
          for (std::size_t bi = 0; bi < bucket.size(); ++bi) {
            const auto packed = batch.result(bi);
            for (std::size_t k = 0; k < kernel::kFimLen; ++k)
              bucket[bi].fim[k] = static_cast<float>(packed[k]);
          }
        },
        threads);

    PhaseData& pd = phases_[pi];
    pd.pose_offset.assign(n_poses + 1, 0);
    std::size_t total = 0;
    for (std::size_t qi = 0; qi < n_poses; ++qi) {
      pd.pose_offset[qi] = static_cast<std::uint32_t>(total);
      total += per_pose[qi].size();
    }
    pd.pose_offset[n_poses] = static_cast<std::uint32_t>(total);
    pd.entries.clear();
    pd.entries.reserve(total);
    for (std::size_t qi = 0; qi < n_poses; ++qi)
      pd.entries.insert(pd.entries.end(), per_pose[qi].begin(), per_pose[qi].end());
  }
  precomputed_ = true;
}

std::span<const FimTable::Entry> FimTable::entries(std::size_t phase, std::size_t pose) const {
  const PhaseData& pd = phases_[phase];
  const std::size_t a = pd.pose_offset[pose];
  const std::size_t b = pd.pose_offset[pose + 1];
  return {pd.entries.data() + a, b - a};
}

std::array<float, kernel::kFimLen> FimTable::get_or_compute(std::size_t phase, std::size_t pose,
                                                            std::uint32_t slot, int size_value) {
  if (precomputed_) {
    hits_.fetch_add(1, std::memory_order_relaxed);
    const auto span = entries(phase, pose);
    const auto it = std::lower_bound(span.begin(), span.end(), std::pair{slot, size_value},
                                     [](const Entry& e, const std::pair<std::uint32_t, int>& k) {
                                       return std::pair<std::uint32_t, int>{e.slot, e.size_value} <
                                              k;
                                     });
    if (it != span.end() && it->slot == slot && it->size_value == size_value) return it->fim;
    return {};  // computed, undetectable
  }

  const std::uint64_t key = lazy_key(pose, slot, size_value);
  {
    std::lock_guard<std::mutex> lock(lazy_mutex_);
    const auto it = lazy_[phase].find(key);
    if (it != lazy_[phase].end()) {
      hits_.fetch_add(1, std::memory_order_relaxed);
      return it->second;
    }
  }
  misses_.fetch_add(1, std::memory_order_relaxed);
  const auto value = compute_key(phase, pose, slot, size_value);
  std::lock_guard<std::mutex> lock(lazy_mutex_);
  return lazy_[phase].emplace(key, value).first->second;
}

double FimTable::hit_rate() const {
  const std::uint64_t h = hits(), m = misses();
  return (h + m) == 0 ? 1.0 : static_cast<double>(h) / static_cast<double>(h + m);
}

void FimTable::adopt(std::vector<PhaseData> phases) {
  phases_ = std::move(phases);
  precomputed_ = true;
}

// ---------------------------------------------------------------------------
// Change counting and cost

long ChangeCounts::total_placements() const {
  long t = 0;
  for (long v : placements) t += v;
  return t;
}

ChangeCounts count_changes(const model::ProjectModel& m, const ga::Chromosome& c, int k_wear) {
  ChangeCounts counts;
  counts.placements.assign(static_cast<std::size_t>(m.n_sizes()), 0);

  for (std::size_t s = 0; s < m.n_slots(); ++s) {
    int prev = 0;  // size value active in the previous phase (0 = none)
    int run = 0;   // consecutive active phases at this location
    for (std::size_t p = 0; p < m.n_phases(); ++p) {
      const bool feasible = m.feasible(p, s);
      const int g = feasible ? c.genes[m.gene_index(p, s)] : 0;
      if (g > 0) {
        if (prev == 0) {
          ++counts.placements[static_cast<std::size_t>(g - 1)];
        } else if (g != prev) {
          // Size change: the old tag comes off, the new one goes up.
          ++counts.removals;
          ++counts.placements[static_cast<std::size_t>(g - 1)];
        }
        ++run;
      } else {
        if (prev > 0 && feasible) ++counts.removals;
        // A location that became infeasible loses its tag with the wall.
        if (run > 0) counts.replacements += (run - 1) / k_wear;
        run = 0;
      }
      prev = g;
    }
    if (run > 0) counts.replacements += (run - 1) / k_wear;
  }
  return counts;
}

double cost(const ChangeCounts& counts, std::size_t n_cells_total, const CostParams& cp) {
  const double w_plc = cp.s_min * cp.p_c * static_cast<double>(n_cells_total);
  double bracket = 0.0;
  for (std::size_t i = 0; i < counts.placements.size(); ++i)
    bracket += static_cast<double>(counts.placements[i]) / cp.alpha[i];
  bracket += static_cast<double>(counts.removals) / cp.lambda_rmv;
  bracket += cp.lambda_rpl * static_cast<double>(counts.replacements);
  return w_plc * bracket;
}

// ---------------------------------------------------------------------------
// Evaluator

Evaluator::Evaluator(const model::ProjectModel& m, const FimTable& table,
                     sensing::MetricKind metric, bool normalize, bool cost_enabled)
    : model_(&m), table_(&table), metric_(metric), normalize_(normalize),
      cost_enabled_(cost_enabled) {
  n_cells_total_ = m.n_cells_total();

  // Per-cell capacities: every feasible slot at the largest size.
  const int max_sv = m.spec.planning.max_size_value();
  capacities_.resize(m.n_phases());
  for (std::size_t pi = 0; pi < m.n_phases(); ++pi) {
    const model::PhaseModel& pm = m.phases[pi];
    capacities_[pi].assign(pm.cells.size(), 0.0);
    const std::size_t per_cell = pm.poses_per_cell();
    for (std::size_t ci = 0; ci < pm.cells.size(); ++ci) {
      double acc = 0.0;
      for (std::size_t qi = ci * per_cell; qi < (ci + 1) * per_cell; ++qi) {
        spatial::Mat6 sum = spatial::Mat6::Zero();
        for (const FimTable::Entry& e : table.entries(pi, qi)) {
          if (static_cast<int>(e.size_value) != max_sv) continue;
          std::size_t k = 0;
          for (int a = 0; a < 6; ++a)
            for (int b = a; b < 6; ++b, ++k) {
              sum(a, b) += e.fim[k];
              if (a != b) sum(b, a) = sum(a, b);
            }
        }
        acc += sensing::metric(sum, metric_);
      }
      capacities_[pi][ci] = acc;
    }
  }

  // Additive per-gene lookup: exact for the trace metric, which commutes
  // with the FIM sum.
  if (metric_ == sensing::MetricKind::Trace) {
    use_trace_lut_ = true;
    trace_lut_.assign(m.gene_count() * static_cast<std::size_t>(m.n_sizes()), 0.0);
    for (std::size_t pi = 0; pi < m.n_phases(); ++pi) {
      const model::PhaseModel& pm = m.phases[pi];
      const std::size_t per_cell = pm.poses_per_cell();
      for (std::size_t qi = 0; qi < pm.poses.size(); ++qi) {
        const std::size_t ci = qi / per_cell;
        const double cap = capacities_[pi][ci];
        double w = pm.roi_importance(pm.cells[ci].roi_index);
        if (normalize_) w = cap > 0.0 ? w / cap : 0.0;
        if (w == 0.0) continue;
        for (const FimTable::Entry& e : table.entries(pi, qi)) {
          double tr = 0.0;
          for (int a = 0; a < 6; ++a) tr += e.fim[kernel::tri_index(a, a)];
          const std::size_t gi = m.gene_index(pi, e.slot);
          trace_lut_[gi * static_cast<std::size_t>(m.n_sizes()) + (e.size_value - 1)] += w * tr;
        }
      }
    }
  }
}

double Evaluator::pose_metric(const ga::Chromosome& c, std::size_t phase,
                              std::size_t pose) const {
  spatial::Mat6 sum = spatial::Mat6::Zero();
  bool any = false;
  for (const FimTable::Entry& e : table_->entries(phase, pose)) {
    if (c.genes[model_->gene_index(phase, e.slot)] != e.size_value) continue;
    any = true;
    std::size_t k = 0;
    for (int a = 0; a < 6; ++a)
      for (int b = a; b < 6; ++b, ++k) {
        sum(a, b) += e.fim[k];
        if (a != b) sum(b, a) = sum(a, b);
      }
  }
  if (!any) return 0.0;
  return sensing::metric(sum, metric_);
}

double Evaluator::cell_utility(const ga::Chromosome& c, std::size_t phase,
                               std::size_t cell) const {
  const model::PhaseModel& pm = model_->phases[phase];
  const std::size_t per_cell = pm.poses_per_cell();
  double acc = 0.0;
  for (std::size_t qi = cell * per_cell; qi < (cell + 1) * per_cell; ++qi)
    acc += pose_metric(c, phase, qi);
  if (normalize_) {
    const double cap = capacities_[phase][cell];
    return cap > 0.0 ? acc / cap : 0.0;
  }
  return acc;
}

double Evaluator::total_utility_generic(const ga::Chromosome& c) const {
  double total = 0.0;
  for (std::size_t pi = 0; pi < model_->n_phases(); ++pi) {
    const model::PhaseModel& pm = model_->phases[pi];
    for (std::size_t ci = 0; ci < pm.cells.size(); ++ci)
      total += pm.roi_importance(pm.cells[ci].roi_index) * cell_utility(c, pi, ci);
  }
  return total;
}

double Evaluator::total_utility(const ga::Chromosome& c) const {
  if (!use_trace_lut_) return total_utility_generic(c);
  double total = 0.0;
  const auto n_sizes = static_cast<std::size_t>(model_->n_sizes());
  for (std::size_t g = 0; g < model_->gene_count(); ++g) {
    const std::uint8_t v = c.genes[g];
    if (v > 0) total += trace_lut_[g * n_sizes + (v - 1)];
  }
  return total;
}

double Evaluator::total_cost(const ga::Chromosome& c) const {
  if (!cost_enabled_) return 0.0;
  return cost(count_changes(*model_, c, model_->spec.cost.k_wear), n_cells_total_,
              model_->spec.cost);
}

double Evaluator::score(const ga::Chromosome& c) const { return total_utility(c) - total_cost(c); }

std::vector<double> Evaluator::phase_cell_utilities(const ga::Chromosome& c,
                                                    std::size_t phase) const {
  std::vector<double> out(model_->phases[phase].cells.size(), 0.0);
  for (std::size_t ci = 0; ci < out.size(); ++ci) {
    double v = cell_utility(c, phase, ci);
    // The max-size capacity is not a strict bound when a smaller tag is
    // detectable somewhere the largest one is not (too big for the image up
    // close); displayed values are clamped to the unit range.
    if (normalize_) v = std::min(v, 1.0);
    out[ci] = v;
  }
  return out;
}

}  // namespace tagplan::valuation
