// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "tagplan/rng.hpp"

namespace tagplan::ga {

/// Integer gene vector over all (slot, phase) pairs, phase-major. Gene value
/// 0 means no tag; i > 0 selects tag size index i.
struct Chromosome {
  std::vector<std::uint8_t> genes;

  bool operator==(const Chromosome& o) const { return genes == o.genes; }
  bool operator<(const Chromosome& o) const { return genes < o.genes; }
};

enum class CrossoverKind { SinglePoint, TwoPoint, Uniform };
enum class MutationKind { Flip, Shuffle };

CrossoverKind crossover_from_string(const std::string& s);
MutationKind mutation_from_string(const std::string& s);

struct GaParams {
  int population = 50;
  int max_iters = 5000;
  CrossoverKind crossover = CrossoverKind::SinglePoint;
  MutationKind mutation = MutationKind::Flip;
  double mutation_rate = -1.0;  // negative = default 1/|genes|
  int elitism = 2;
  int stall_window = 0;  // 0 = disabled
  std::uint64_t seed = 0;

  void validate() const;
};

/// Frozen optimization instance. The fitness function must be pure and
/// thread-safe; it is the only thing evaluated in parallel.
struct Problem {
  std::size_t n_phases = 1;
  std::size_t n_slots = 0;
  int n_sizes = 1;
  int max_tags_per_phase = 0;            // 0 = no budget
  std::vector<std::uint8_t> feasible;    // per gene, phase-major
  std::function<double(const Chromosome&)> fitness;

  std::size_t n_genes() const { return n_phases * n_slots; }
  std::size_t gene_index(std::size_t phase, std::size_t slot) const {
    return phase * n_slots + slot;
  }
};

struct HistoryRecord {
  int iteration = 0;
  double best = 0.0;
  double mean = 0.0;
  std::uint64_t evaluations = 0;
  double cache_hit_rate = 1.0;
};

struct RunResult {
  Chromosome best;
  double best_score = 0.0;
  std::vector<HistoryRecord> history;
};

/// Zeroes infeasible genes, then zeroes uniformly random excess actives in
/// any phase above the budget. Feasible inputs pass through unchanged and
/// consume no randomness.
Chromosome repair(Chromosome c, const Problem& problem, Rng& rng);

/// Each gene 0 with probability 1/2, otherwise a uniform size index;
/// repaired afterward.
std::vector<Chromosome> random_population(const Problem& problem, int count, Rng& rng);

/// Roulette selection over scores shifted positive; two independent draws,
/// repetition allowed. Returns population indices.
std::pair<std::size_t, std::size_t> select_pair(const std::vector<double>& scores, Rng& rng);

/// Children are repaired before returning.
std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            CrossoverKind kind, const Problem& problem, Rng& rng);

/// Flip resamples each gene with the given probability; shuffle permutes one
/// random window of length <= 8. Repaired before returning.
Chromosome mutate(Chromosome c, MutationKind kind, double rate, const Problem& problem, Rng& rng);

/// Full GA loop: parallel evaluation, descending sort with lexicographic
/// tie-break, elitism, then select/crossover/mutate until the next
/// generation is full. Deterministic for a fixed seed under any worker
/// count: the master RNG is consumed only on the coordinating thread.
RunResult run(const Problem& problem, const GaParams& params,
              const std::function<double()>& cache_hit_rate = {}, unsigned threads = 0);

/// Semi-random baseline: draws `count` feasible random chromosomes and
/// returns the highest-scoring one (ties to the lexicographically smaller).
Chromosome random_baseline(const Problem& problem, int count, Rng& rng, unsigned threads = 0);

}  // namespace tagplan::ga
