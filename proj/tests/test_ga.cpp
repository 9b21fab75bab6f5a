// Copyright (c) 2026 tagplan contributors
// SPDX-License-Identifier: Apache-2.0
//
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "tagplan/ga.hpp"

using namespace tagplan;
using namespace tagplan::ga;

namespace {

// Additive synthetic fitness: value v at slot s scores weight[s] * v.
Problem toy_problem(std::size_t n_slots, int n_sizes, int budget,
                    std::vector<double> weights = {}) {
  Problem p;
  p.n_phases = 1;
  p.n_slots = n_slots;
  p.n_sizes = n_sizes;
  p.max_tags_per_phase = budget;
  p.feasible.assign(n_slots, 1);
  if (weights.empty()) {
    weights.resize(n_slots);
    for (std::size_t s = 0; s < n_slots; ++s)
      weights[s] = 1.0 + 0.37 * static_cast<double>((s * 7) % 11);
  }
  p.fitness = [weights](const Chromosome& c) {
    double acc = 0.0;
    for (std::size_t s = 0; s < c.genes.size(); ++s)
      acc += weights[s] * static_cast<double>(c.genes[s]);
    return acc;
  };
  return p;
}

}  // namespace

TEST_CASE("random_population: determinism, size, all-infeasible mask") {
  Problem p = toy_problem(20, 2, 0);

  Rng a(99), b(99);
  const auto pop1 = random_population(p, 50, a);
  const auto pop2 = random_population(p, 50, b);
  CHECK(pop1.size() == 50);
  CHECK(pop1 == pop2);

  p.feasible.assign(p.n_slots, 0);
  Rng c(1);
  for (const Chromosome& chrom : random_population(p, 10, c))
    for (const auto g : chrom.genes) CHECK(g == 0);
}

TEST_CASE("repair: idempotence, budget clamp, infeasible zeroing") {
  Problem p = toy_problem(40, 3, 32);
  p.feasible[7] = 0;

  Rng rng(5);
  Chromosome all;
  all.genes.assign(40, 2);
  const Chromosome repaired = repair(all, p, rng);
  CHECK(repaired.genes[7] == 0);
  int active = 0;
  for (const auto g : repaired.genes) active += g > 0;
  CHECK(active == 32);

  // Feasible input passes through without consuming randomness.
  Rng r1(42), r2(42);
  const Chromosome again = repair(repaired, p, r1);
  CHECK(again == repaired);
  CHECK(r1.next_u64() == r2.next_u64());
}

TEST_CASE("select_pair: uniform under equal scores, dominant under skew") {
  Rng rng(7);

  // Equal scores: chi-square over 10k draws, 10 bins, p > 0.01 threshold
  // (21.67 critical value at 9 dof).
  std::vector<double> equal(10, 3.5);
  std::vector<int> histogram(10, 0);
  const int draws = 10000;
  for (int i = 0; i < draws / 2; ++i) {
    const auto [a, b] = select_pair(equal, rng);
    ++histogram[a];
    ++histogram[b];
  }
  const double expected = draws / 10.0;
  double chi2 = 0.0;
  for (int h : histogram) chi2 += (h - expected) * (h - expected) / expected;
  CHECK(chi2 < 21.67);

  // 1000:1 shifted ratio: dominant index selected in > 99% of draws.
  // Shifted weights are s - min + delta, so score 1000 vs 0 gives the
  // dominant arm ~1000/1009 of the mass.
  std::vector<double> skew(10, 0.0);
  skew[3] = 1000.0;
  int dominant = 0;
  for (int i = 0; i < 5000; ++i) {
    const auto [a, b] = select_pair(skew, rng);
    dominant += (a == 3) + (b == 3);
  }
  CHECK(static_cast<double>(dominant) / 10000.0 > 0.99);

  // Negative scores handled by the positivity shift.
  std::vector<double> negative{-5.0, -3.0, -10.0};
  CHECK_NOTHROW(select_pair(negative, rng));
}

TEST_CASE("crossover conserves genes and respects boundaries") {
  Problem p = toy_problem(12, 3, 0);
  Rng rng(11);

  Chromosome a, b;
  a.genes = {1, 2, 0, 3, 1, 0, 2, 2, 1, 0, 3, 1};
  b.genes = {0, 0, 1, 1, 2, 2, 3, 0, 0, 1, 2, 3};

  for (const auto kind : {CrossoverKind::SinglePoint, CrossoverKind::TwoPoint,
                          CrossoverKind::Uniform}) {
    for (int i = 0; i < 50; ++i) {
      const auto [c1, c2] = crossover(a, b, kind, p, rng);
      // Multiset of (index, value) across children equals that across
      // parents (budget 0 means repair never interferes).
      std::multiset<std::pair<std::size_t, int>> parents, children;
      for (std::size_t g = 0; g < a.genes.size(); ++g) {
        parents.insert({g, a.genes[g]});
        parents.insert({g, b.genes[g]});
        children.insert({g, c1.genes[g]});
        children.insert({g, c2.genes[g]});
      }
      CHECK(parents == children);
    }
  }

  // a == b: children equal the parents.
  const auto [s1, s2] = crossover(a, a, CrossoverKind::SinglePoint, p, rng);
  CHECK(s1 == a);
  CHECK(s2 == a);
}

TEST_CASE("mutate: identity at rate 0, complement at rate 1 with one size") {
  Problem p = toy_problem(30, 1, 0);
  Rng rng(13);

  Chromosome c;
  c.genes.assign(30, 0);
  for (std::size_t i = 0; i < 30; i += 3) c.genes[i] = 1;

  const Chromosome same = mutate(c, MutationKind::Flip, 0.0, p, rng);
  CHECK(same == c);

  const Chromosome flipped = mutate(c, MutationKind::Flip, 1.0, p, rng);
  for (std::size_t i = 0; i < 30; ++i) CHECK(flipped.genes[i] == 1 - c.genes[i]);
}

TEST_CASE("mutate: expected flip count matches the rate") {
  Problem p = toy_problem(200, 2, 0);
  Rng rng(17);
  const double rate = 0.05;
  const int trials = 1000;
  long flips = 0;
  Chromosome c;
  c.genes.assign(200, 0);
  for (int t = 0; t < trials; ++t) {
    const Chromosome m = mutate(c, MutationKind::Flip, rate, p, rng);
    for (std::size_t i = 0; i < m.genes.size(); ++i) flips += m.genes[i] != c.genes[i];
  }
  const double n = 200.0 * trials;
  const double sigma = std::sqrt(n * rate * (1 - rate));
  CHECK(std::abs(static_cast<double>(flips) - n * rate) < 3.0 * sigma);
}

TEST_CASE("mutate: shuffle permutes one window") {
  Problem p = toy_problem(30, 3, 0);
  Rng rng(19);
  Chromosome c;
  c.genes.resize(30);
  for (std::size_t i = 0; i < 30; ++i) c.genes[i] = static_cast<std::uint8_t>(i % 4);

  for (int t = 0; t < 50; ++t) {
    const Chromosome m = mutate(c, MutationKind::Shuffle, 0.0, p, rng);
    // Same multiset of values overall.
    std::multiset<int> before(c.genes.begin(), c.genes.end());
    std::multiset<int> after(m.genes.begin(), m.genes.end());
    CHECK(before == after);
    // Differences confined to one window of length <= 8.
    std::size_t lo = 30, hi = 0;
    for (std::size_t i = 0; i < 30; ++i) {
      if (m.genes[i] != c.genes[i]) {
        lo = std::min(lo, i);
        hi = std::max(hi, i);
      }
    }
    if (lo <= hi) CHECK(hi - lo < 8);
  }
}

TEST_CASE("run: monotone best, determinism, and improvement over init") {
  const Problem p = toy_problem(24, 2, 6);
  GaParams params;
  params.population = 20;
  params.max_iters = 60;
  params.seed = 77;

  const RunResult r1 = run(p, params);
  const RunResult r2 = run(p, params);
  CHECK(r1.best == r2.best);
  CHECK(r1.best_score == r2.best_score);

  for (std::size_t i = 1; i < r1.history.size(); ++i)
    CHECK(r1.history[i].best >= r1.history[i - 1].best - 1e-12);

  // The optimum of the toy problem: the six highest weights at max size.
  // GA with 60 generations on 24 genes should find it.
  Rng rng(1);
  const auto init = random_population(p, 20, rng);
  double best_init = 0.0;
  for (const auto& c : init) best_init = std::max(best_init, p.fitness(c));
  CHECK(r1.best_score >= best_init);

  // Re-evaluating the returned best reproduces its recorded score.
  CHECK(p.fitness(r1.best) == r1.best_score);

  // Every history record satisfies the evaluation bookkeeping.
  CHECK(r1.history.front().evaluations == 20);
  CHECK(r1.history.back().evaluations == 20u * r1.history.size());
}

TEST_CASE("run: stall window stops early") {
  const Problem p = toy_problem(10, 1, 0);
  GaParams params;
  params.population = 10;
  params.max_iters = 5000;
  params.stall_window = 15;
  params.seed = 3;
  const RunResult r = run(p, params);
  CHECK(r.history.size() < 5000);
  // The all-active chromosome is optimal for the toy fitness.
  double total = 0.0;
  Chromosome all;
  all.genes.assign(10, 1);
  total = p.fitness(all);
  CHECK(r.best_score == doctest::Approx(total));
}

TEST_CASE("run: every evaluated chromosome respects the mask and budget") {
  Problem p = toy_problem(16, 2, 4);
  p.feasible[0] = p.feasible[9] = 0;
  int violations = 0;
  const auto base_fitness = p.fitness;
  p.fitness = [&](const Chromosome& c) {
    int active = 0;
    for (std::size_t g = 0; g < c.genes.size(); ++g) {
      if (c.genes[g] > 0 && !p.feasible[g]) ++violations;
      active += c.genes[g] > 0;
    }
    if (active > 4) ++violations;
    return base_fitness(c);
  };
  GaParams params;
  params.population = 16;
  params.max_iters = 40;
  params.seed = 21;
  run(p, params);
  CHECK(violations == 0);
}

TEST_CASE("params validation") {
  GaParams params;
  params.population = 1;
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = GaParams{};
  params.elitism = 3;  // population - elitism odd
  CHECK_THROWS_AS(params.validate(), std::invalid_argument);
  params = GaParams{};
  CHECK_NOTHROW(params.validate());
}

TEST_CASE("random_baseline returns the best of its draws") {
  const Problem p = toy_problem(20, 2, 5);
  Rng rng(33);
  const Chromosome best = random_baseline(p, 100, rng);
  Rng rng2(33);
  const auto pop = random_population(p, 100, rng2);
  double max_score = -1.0;
  for (const auto& c : pop) max_score = std::max(max_score, p.fitness(c));
  CHECK(p.fitness(best) == doctest::Approx(max_score));
}
