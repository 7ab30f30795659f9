// Copyright 2026 The ensemble-forge Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "forge/ga.hpp"

#include <algorithm>
#include <random>
#include <string>

#include "forge/diversity.hpp"
#include "forge/error.hpp"
#include "forge/format.hpp"
#include "forge/pool.hpp"
#include "forge/random.hpp"

namespace forge {
namespace {

using Chromosome = std::vector<int>;

struct Individual {
  Chromosome genes;
  Fitness fit;
};

Fitness score(const Chromosome& genes, std::span<const IdentityDescriptor> pool, double target) {
  Fitness f;
  f.target = target;
  f.achieved = kw_variance(pool, genes);
  const double gap = f.achieved - target;
  f.value = gap == 0.0 ? 0.0 : -(gap * gap);
  return f;
}

std::vector<int> unused_indices(const Chromosome& genes, int pool_size) {
  std::vector<bool> used(pool_size, false);
  for (int g : genes) used[g] = true;
  std::vector<int> out;
  out.reserve(pool_size);
  for (int i = 0; i < pool_size; ++i) {
    if (!used[i]) out.push_back(i);
  }
  return out;
}

int draw(std::mt19937_64& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Chromosome random_chromosome(std::mt19937_64& rng, int pool_size, int k) {
  std::vector<int> all(pool_size);
  for (int i = 0; i < pool_size; ++i) all[i] = i;
  // Partial Fisher-Yates: the first k slots become a uniform k-subset.
  for (int i = 0; i < k; ++i) std::swap(all[i], all[draw(rng, i, pool_size - 1)]);
  Chromosome genes(all.begin(), all.begin() + k);
  std::sort(genes.begin(), genes.end());
  return genes;
}

// Replaces every repeated gene (after its first occurrence) with a uniform
// draw from indices not yet in the chromosome.
void repair(Chromosome& genes, int pool_size, std::mt19937_64& rng) {
  std::vector<bool> seen(pool_size, false);
  std::vector<std::size_t> duplicates;
  for (std::size_t i = 0; i < genes.size(); ++i) {
    if (seen[genes[i]]) {
      duplicates.push_back(i);
    } else {
      seen[genes[i]] = true;
    }
  }
  for (auto slot : duplicates) {
    auto pool = unused_indices(genes, pool_size);
    // A slot's own value is still present elsewhere, so `pool` excludes it.
    const int pick = pool[draw(rng, 0, static_cast<int>(pool.size()) - 1)];
    genes[slot] = pick;
  }
  std::sort(genes.begin(), genes.end());
}

void mutate(Chromosome& genes, int pool_size, double rate, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> coin(0.0, 1.0);
  const bool can_move = static_cast<int>(genes.size()) < pool_size;
  for (auto& gene : genes) {
    if (coin(rng) < rate && can_move) {
      const auto pool = unused_indices(genes, pool_size);
      gene = pool[draw(rng, 0, static_cast<int>(pool.size()) - 1)];
    }
  }
  std::sort(genes.begin(), genes.end());
}

std::size_t tournament(const std::vector<Individual>& population, int size,
                       std::mt19937_64& rng) {
  const int n = static_cast<int>(population.size());
  auto best = static_cast<std::size_t>(draw(rng, 0, n - 1));
  for (int t = 1; t < size; ++t) {
    const auto challenger = static_cast<std::size_t>(draw(rng, 0, n - 1));
    if (population[challenger].fit.value > population[best].fit.value) best = challenger;
  }
  return best;
}

std::vector<double> probe_grid(double pool_kw, int count) {
  std::vector<double> probes(count);
  if (count == 1) {
    probes[0] = pool_kw / 2.0;
    return probes;
  }
  for (int i = 0; i < count; ++i) {
    probes[i] = pool_kw * static_cast<double>(i) / static_cast<double>(count - 1);
  }
  return probes;
}

}  // namespace

EnsembleSelection::EnsembleSelection(std::vector<int> indices, std::size_t pool_size)
    : indices_(std::move(indices)) {
  std::sort(indices_.begin(), indices_.end());
  if (indices_.size() % 2 == 0) {
    throw Error(ErrorCode::kEvenEnsemble, "ensemble size " + std::to_string(indices_.size()) +
                                              " is even; majority votes need an odd count");
  }
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i] < 0 || static_cast<std::size_t>(indices_[i]) >= pool_size) {
      throw Error(ErrorCode::kInvalidSelection, "index " + std::to_string(indices_[i]) +
                                                    " outside pool of " +
                                                    std::to_string(pool_size));
    }
    if (i > 0 && indices_[i] == indices_[i - 1]) {
      throw Error(ErrorCode::kInvalidSelection,
                  "index " + std::to_string(indices_[i]) + " selected twice");
    }
  }
}

void GaConfig::validate() const {
  const auto bad = [](const std::string& why) { return Error(ErrorCode::kConfig, why); };
  if (population < 2) throw bad("population must be at least 2");
  if (generations < 1) throw bad("generations must be at least 1");
  if (!(crossover_rate >= 0.0 && crossover_rate <= 1.0)) throw bad("crossover rate outside [0, 1]");
  if (!(mutation_rate >= 0.0 && mutation_rate <= 1.0)) throw bad("mutation rate outside [0, 1]");
  if (tournament_size < 1) throw bad("tournament size must be at least 1");
  if (elitism < 0 || elitism > population) throw bad("elitism must lie in [0, population]");
  if (ensemble_size < 1 || ensemble_size % 2 == 0) throw bad("ensemble size must be odd and positive");
}

Fitness fitness(const EnsembleSelection& selection, std::span<const IdentityDescriptor> pool,
                double target) {
  for (int i : selection.indices()) {
    if (static_cast<std::size_t>(i) >= pool.size()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "index " + std::to_string(i) + " outside pool of " + std::to_string(pool.size()));
    }
  }
  return score(selection.indices(), pool, target);
}

Fitness fitness(const EnsembleSelection& selection, const Pool& pool, double target) {
  return fitness(selection, pool.descriptors(), target);
}

EvolveResult evolve(std::span<const IdentityDescriptor> pool, double target,
                    const GaConfig& config, std::optional<double> kw_ceiling) {
  config.validate();
  const int n = static_cast<int>(pool.size());
  const int k = config.ensemble_size;
  if (n < k) {
    throw Error(ErrorCode::kConfig, "pool of " + std::to_string(n) +
                                        " cannot supply an ensemble of " + std::to_string(k));
  }
  std::mt19937_64 rng(config.seed);
  std::uniform_real_distribution<double> coin(0.0, 1.0);

  std::vector<Individual> population;
  population.reserve(config.population);
  for (int i = 0; i < config.population; ++i) {
    auto genes = random_chromosome(rng, n, k);
    auto fit = score(genes, pool, target);
    population.push_back({std::move(genes), fit});
  }

  EvolveResult result;
  std::optional<Individual> best;
  std::optional<Individual> best_capped;
  const auto improves = [](const std::optional<Individual>& current, const Individual& ind) {
    return !current || ind.fit.value > current->fit.value;
  };
  const auto track = [&](int generation) {
    for (const auto& ind : population) {
      if (improves(best, ind)) best = ind;
      if (kw_ceiling && ind.fit.achieved <= *kw_ceiling && improves(best_capped, ind)) {
        best_capped = ind;
      }
    }
    const auto& reported = best_capped ? *best_capped : *best;
    result.history.push_back({generation, reported.fit.value, reported.fit.achieved});
  };
  track(0);

  for (int generation = 1; generation < config.generations; ++generation) {
    std::vector<std::size_t> ranked(population.size());
    for (std::size_t i = 0; i < ranked.size(); ++i) ranked[i] = i;
    std::stable_sort(ranked.begin(), ranked.end(), [&](std::size_t a, std::size_t b) {
      return population[a].fit.value > population[b].fit.value;
    });

    std::vector<Individual> next;
    next.reserve(config.population);
    for (int e = 0; e < config.elitism; ++e) next.push_back(population[ranked[e]]);

    while (static_cast<int>(next.size()) < config.population) {
      const auto& a = population[tournament(population, config.tournament_size, rng)].genes;
      const auto& b = population[tournament(population, config.tournament_size, rng)].genes;
      Chromosome first = a;
      Chromosome second = b;
      if (coin(rng) < config.crossover_rate && k > 1) {
        const int cut = draw(rng, 1, k - 1);
        std::copy(b.begin() + cut, b.end(), first.begin() + cut);
        std::copy(a.begin() + cut, a.end(), second.begin() + cut);
      }
      repair(first, n, rng);
      repair(second, n, rng);
      mutate(first, n, config.mutation_rate, rng);
      mutate(second, n, config.mutation_rate, rng);

      for (auto* child : {&first, &second}) {
        if (static_cast<int>(next.size()) == config.population) break;
        auto fit = score(*child, pool, target);
        next.push_back({std::move(*child), fit});
      }
    }
    population = std::move(next);
    track(generation);
  }

  const auto& reported = best_capped ? *best_capped : *best;
  result.best = EnsembleSelection(reported.genes, pool.size());
  result.fitness = reported.fit;
  return result;
}

EvolveResult evolve(const Pool& pool, double target, const GaConfig& config,
                    std::optional<double> kw_ceiling) {
  return evolve(pool.descriptors(), target, config, kw_ceiling);
}

void write_history_csv(const std::vector<GenerationRecord>& history, std::ostream& out) {
  out << "generation,best_fitness,best_achieved_kw\n";
  for (const auto& r : history) {
    out << r.generation << ',' << format_double(r.best_fitness) << ','
        << format_double(r.best_achieved_kw) << '\n';
  }
}

std::uint64_t probe_seed(std::uint64_t seed, int index) {
  return derive_seed(seed, StreamPurpose::kGa, static_cast<std::uint64_t>(index));
}

std::vector<double> Calibration::target_values() const {
  std::vector<double> out;
  out.reserve(targets.size());
  for (const auto& t : targets) out.push_back(t.kw);
  return out;
}

Calibration calibrate_targets(std::span<const IdentityDescriptor> pool, int probe_count,
                              const GaConfig& config) {
  if (probe_count < 1) throw Error(ErrorCode::kConfig, "probe count must be at least 1");
  Calibration out;
  const double pool_kw = kw_variance(pool);
  out.probes = probe_grid(pool_kw, probe_count);
  std::vector<CalibratedTarget> reached;
  for (int i = 0; i < probe_count; ++i) {
    GaConfig run = config;
    run.seed = probe_seed(config.seed, i);
    const double kw = evolve(pool, out.probes[i], run, pool_kw).fitness.achieved;
    out.achieved.push_back(kw);
    if (kw <= pool_kw) reached.push_back({kw, run.seed});
  }
  std::stable_sort(reached.begin(), reached.end(),
                   [](const CalibratedTarget& a, const CalibratedTarget& b) { return a.kw < b.kw; });
  for (const auto& t : reached) {
    if (out.targets.empty() || t.kw - out.targets.back().kw > kTargetMergeTolerance) {
      out.targets.push_back(t);
    }
  }
  return out;
}

Calibration calibrate_targets(const Pool& pool, int probe_count, const GaConfig& config) {
  return calibrate_targets(pool.descriptors(), probe_count, config);
}

}  // namespace forge
