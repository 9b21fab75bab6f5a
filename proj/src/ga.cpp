// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#include "tagplan/ga.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

#include "tagplan/thread_pool.hpp"

namespace tagplan::ga {

CrossoverKind crossover_from_string(const std::string& s) {
  if (s == "single_point") return CrossoverKind::SinglePoint;
  if (s == "two_point") return CrossoverKind::TwoPoint;
  if (s == "uniform") return CrossoverKind::Uniform;
  throw std::invalid_argument("unknown crossover kind: " + s);
}

MutationKind mutation_from_string(const std::string& s) {
  if (s == "flip") return MutationKind::Flip;
  if (s == "shuffle") return MutationKind::Shuffle;
  throw std::invalid_argument("unknown mutation kind: " + s);
}

void GaParams::validate() const {
  if (population < 2) throw std::invalid_argument("ga: population must be >= 2");
  if (elitism < 0 || elitism >= population)
    throw std::invalid_argument("ga: elitism must be in [0, population)");
  if ((population - elitism) % 2 != 0)
    throw std::invalid_argument("ga: population minus elitism must be even");
  if (max_iters < 1) throw std::invalid_argument("ga: max_iters must be >= 1");
  if (mutation_rate > 1.0) throw std::invalid_argument("ga: mutation_rate must be <= 1");
  if (stall_window < 0) throw std::invalid_argument("ga: stall_window must be >= 0");
}

Chromosome repair(Chromosome c, const Problem& problem, Rng& rng) {
  for (std::size_t g = 0; g < problem.n_genes(); ++g)
    if (!problem.feasible[g]) c.genes[g] = 0;

  if (problem.max_tags_per_phase > 0) {
    std::vector<std::size_t> active;
    for (std::size_t p = 0; p < problem.n_phases; ++p) {
      active.clear();
      for (std::size_t s = 0; s < problem.n_slots; ++s) {
        const std::size_t g = problem.gene_index(p, s);
        if (c.genes[g] > 0) active.push_back(g);
      }
      while (active.size() > static_cast<std::size_t>(problem.max_tags_per_phase)) {
        const std::size_t pick = rng.index(active.size());
        c.genes[active[pick]] = 0;
        active.erase(active.begin() + static_cast<std::ptrdiff_t>(pick));
      }
    }
  }
  return c;
}

std::vector<Chromosome> random_population(const Problem& problem, int count, Rng& rng) {
  std::vector<Chromosome> pop;
  pop.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    Chromosome c;
    c.genes.resize(problem.n_genes());
    for (std::size_t g = 0; g < problem.n_genes(); ++g) {
      if (rng.coin()) {
        c.genes[g] = 0;
      } else {
        c.genes[g] =
            static_cast<std::uint8_t>(rng.uniform_int(1, static_cast<std::uint64_t>(problem.n_sizes)));
      }
    }
    pop.push_back(repair(std::move(c), problem, rng));
  }
  return pop;
}

std::pair<std::size_t, std::size_t> select_pair(const std::vector<double>& scores, Rng& rng) {
  const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
  const double lo = *lo_it, hi = *hi_it;
  const double delta = 1e-9 * (hi - lo + 1.0);

  std::vector<double> cumulative(scores.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < scores.size(); ++i) {
    acc += scores[i] - lo + delta;
    cumulative[i] = acc;
  }

  const auto draw = [&]() -> std::size_t {
    const double x = rng.uniform01() * acc;
    const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), x);
    return std::min<std::size_t>(static_cast<std::size_t>(it - cumulative.begin()),
                                 scores.size() - 1);
  };
  const std::size_t a = draw();
  const std::size_t b = draw();
  return {a, b};
}

std::pair<Chromosome, Chromosome> crossover(const Chromosome& a, const Chromosome& b,
                                            CrossoverKind kind, const Problem& problem, Rng& rng) {
  const std::size_t n = a.genes.size();
  Chromosome c1 = a, c2 = b;
  switch (kind) {
    case CrossoverKind::SinglePoint: {
      const std::size_t cut = static_cast<std::size_t>(rng.uniform_int(0, n));
      for (std::size_t g = cut; g < n; ++g) std::swap(c1.genes[g], c2.genes[g]);
      break;
    }
    case CrossoverKind::TwoPoint: {
      std::size_t i = static_cast<std::size_t>(rng.uniform_int(0, n));
      std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, n));
      if (i > j) std::swap(i, j);
      for (std::size_t g = i; g < j; ++g) std::swap(c1.genes[g], c2.genes[g]);
      break;
    }
    case CrossoverKind::Uniform: {
      for (std::size_t g = 0; g < n; ++g)
        if (rng.coin()) std::swap(c1.genes[g], c2.genes[g]);
      break;
    }
  }
  return {repair(std::move(c1), problem, rng), repair(std::move(c2), problem, rng)};
}

Chromosome mutate(Chromosome c, MutationKind kind, double rate, const Problem& problem, Rng& rng) {
  const std::size_t n = c.genes.size();
  switch (kind) {
    case MutationKind::Flip: {
      for (std::size_t g = 0; g < n; ++g) {
        if (rng.uniform01() >= rate) continue;
        // Resample uniformly over the other n_sizes values.
        const auto shift = rng.uniform_int(1, static_cast<std::uint64_t>(problem.n_sizes));
        c.genes[g] = static_cast<std::uint8_t>(
            (static_cast<std::uint64_t>(c.genes[g]) + shift) %
            (static_cast<std::uint64_t>(problem.n_sizes) + 1));
      }
      break;
    }
    case MutationKind::Shuffle: {
      if (n >= 2) {
        const std::size_t len = static_cast<std::size_t>(
            rng.uniform_int(2, std::min<std::uint64_t>(8, n)));
        const std::size_t start = static_cast<std::size_t>(rng.uniform_int(0, n - len));
        // Fisher-Yates over the window.
        for (std::size_t k = len - 1; k > 0; --k) {
          const std::size_t j = static_cast<std::size_t>(rng.uniform_int(0, k));
          std::swap(c.genes[start + k], c.genes[start + j]);
        }
      }
      break;
    }
  }
  return repair(std::move(c), problem, rng);
}

Chromosome random_baseline(const Problem& problem, int count, Rng& rng, unsigned threads) {
  std::vector<Chromosome> pop = random_population(problem, count, rng);
  std::vector<double> scores(pop.size(), 0.0);
  parallel_for(
      pop.size(), [&](std::size_t i) { scores[i] = problem.fitness(pop[i]); }, threads);
  std::size_t best = 0;
  for (std::size_t i = 1; i < pop.size(); ++i) {
    if (scores[i] > scores[best] || (scores[i] == scores[best] && pop[i] < pop[best])) best = i;
  }
  return pop[best];
}

RunResult run(const Problem& problem, const GaParams& params,
              const std::function<double()>& cache_hit_rate, unsigned threads) {
  params.validate();
  if (problem.n_genes() == 0) throw std::invalid_argument("ga: empty problem");
  if (problem.feasible.size() != problem.n_genes())
    throw std::invalid_argument("ga: feasibility mask size mismatch");
  if (!problem.fitness) throw std::invalid_argument("ga: missing fitness function");

  Rng rng(params.seed);
  const double rate = params.mutation_rate >= 0.0
                          ? params.mutation_rate
                          : 1.0 / static_cast<double>(problem.n_genes());

  std::vector<Chromosome> pop = random_population(problem, params.population, rng);
  std::vector<double> scores(pop.size(), 0.0);
  std::vector<std::size_t> order(pop.size());

  RunResult result;
  std::uint64_t evaluations = 0;
  double best_so_far = 0.0;
  int stall = 0;

  for (int iter = 0; iter < params.max_iters; ++iter) {
    parallel_for(
        pop.size(), [&](std::size_t i) { scores[i] = problem.fitness(pop[i]); }, threads);
    evaluations += pop.size();

    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
      if (scores[x] != scores[y]) return scores[x] > scores[y];
      return pop[x] < pop[y];  // deterministic tie-break
    });

    const double best = scores[order[0]];
    const double mean =
        std::accumulate(scores.begin(), scores.end(), 0.0) / static_cast<double>(scores.size());
    result.history.push_back({iter, best, mean, evaluations,
                              cache_hit_rate ? cache_hit_rate() : 1.0});

    if (iter == 0 || best > best_so_far) {
      best_so_far = best;
      stall = 0;
      result.best = pop[order[0]];
      result.best_score = best;
    } else {
      ++stall;
    }

    const bool stop = (iter + 1 >= params.max_iters) ||
                      (params.stall_window > 0 && stall >= params.stall_window);
    if (stop) break;

    std::vector<Chromosome> next;
    next.reserve(pop.size());
    for (int e = 0; e < params.elitism; ++e) next.push_back(pop[order[static_cast<std::size_t>(e)]]);
    while (next.size() < pop.size()) {
      const auto [ia, ib] = select_pair(scores, rng);
      auto [c1, c2] = crossover(pop[ia], pop[ib], params.crossover, problem, rng);
      c1 = mutate(std::move(c1), params.mutation, rate, problem, rng);
      c2 = mutate(std::move(c2), params.mutation, rate, problem, rng);
      next.push_back(std::move(c1));
      if (next.size() < pop.size()) next.push_back(std::move(c2));
    }
    pop = std::move(next);
  }
  return result;
}

}  // namespace tagplan::ga
