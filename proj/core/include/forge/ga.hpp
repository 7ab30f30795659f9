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

#pragma once

/// @file ga.hpp
/// Genetic search for a k-of-n sub-ensemble whose structural diversity hits
/// a target, scored by fitness = -(kw - target)^2.
///
/// The search sees descriptors only. It has no access to any data split, so
/// held-out test error can never influence which ensemble is chosen.

#include <cstdint>
#include <optional>
#include <ostream>
#include <span>
#include <vector>

#include "forge/ids.hpp"

namespace forge {

class Pool;

/// Sorted, distinct, in-bounds pool indices of odd count.
class EnsembleSelection {
 public:
  EnsembleSelection() = default;
  /// Sorts `indices` and throws kInvalidSelection on duplicates or an index
  /// outside [0, pool_size), kEvenEnsemble on an even count.
  EnsembleSelection(std::vector<int> indices, std::size_t pool_size);

  const std::vector<int>& indices() const noexcept { return indices_; }
  std::size_t size() const noexcept { return indices_.size(); }

  friend bool operator==(const EnsembleSelection&, const EnsembleSelection&) = default;

 private:
  std::vector<int> indices_;
};

struct GaConfig {
  int population = 20;
  int generations = 28;
  double crossover_rate = 0.08;
  double mutation_rate = 0.1;
  int tournament_size = 5;
  int elitism = 1;
  int ensemble_size = 9;
  std::uint64_t seed = 0;

  /// Throws kConfig when any field is out of range.
  void validate() const;

  friend bool operator==(const GaConfig&, const GaConfig&) = default;
};

struct Fitness {
  double value = 0.0;
  double target = 0.0;
  double achieved = 0.0;
};

Fitness fitness(const EnsembleSelection& selection, std::span<const IdentityDescriptor> pool,
                double target);
Fitness fitness(const EnsembleSelection& selection, const Pool& pool, double target);

struct GenerationRecord {
  int generation = 0;
  double best_fitness = 0.0;
  double best_achieved_kw = 0.0;
};

struct EvolveResult {
  EnsembleSelection best;
  Fitness fitness;
  /// Best-ever individual after each generation; nondecreasing in fitness
  /// (under a ceiling: from the first generation that meets it).
  std::vector<GenerationRecord> history;
};

/// Generational GA. Generation 0 is a population of uniformly random
/// selections; each later generation keeps the `elitism` fittest unchanged
/// and fills the rest with offspring. Per mating, random draws are consumed
/// in this order: tournament for parent A, tournament for parent B,
/// crossover coin, cut point (only when crossing), repair draws for child 1
/// then child 2, mutation draws for child 1 then child 2. `generations`
/// counts evaluated populations including the initial one.
///
/// With `kw_ceiling` set, the search itself is unchanged but the reported
/// best (and history) only considers individuals whose kw does not exceed
/// the ceiling; if none was ever seen, the unrestricted best is returned.
///
/// Throws kConfig when the config is invalid or the pool holds fewer than
/// ensemble_size descriptors.
EvolveResult evolve(std::span<const IdentityDescriptor> pool, double target,
                    const GaConfig& config, std::optional<double> kw_ceiling = std::nullopt);
EvolveResult evolve(const Pool& pool, double target, const GaConfig& config,
                    std::optional<double> kw_ceiling = std::nullopt);

/// Writes `generation,best_fitness,best_achieved_kw` rows with a header.
void write_history_csv(const std::vector<GenerationRecord>& history, std::ostream& out);

/// Seed of the phase-1 run on probe `index`: an independent restart per
/// probe, derived from the configured seed.
std::uint64_t probe_seed(std::uint64_t seed, int index);

struct CalibratedTarget {
  double kw = 0.0;
  /// Seed of the probe run that reached it (the first one, on duplicates).
  std::uint64_t seed = 0;
};

struct Calibration {
  /// Evenly spaced over [0, pool kw].
  std::vector<double> probes;
  /// kw reached by the phase-1 run on each probe.
  std::vector<double> achieved;
  /// Achieved values within [0, pool kw], sorted, near-duplicates (within
  /// 1e-6) merged.
  std::vector<CalibratedTarget> targets;

  std::vector<double> target_values() const;
};

/// Phase 1 of target calibration: runs evolve() once per probe, each run
/// seeded with probe_seed(config.seed, i), and returns the distinct
/// diversity values actually reached. Each returned target is the kw of an
/// existing sub-ensemble and lies in [0, pool kw]; a run that overshoots the
/// pool's own kw contributes no target. Throws kConfig when probe_count < 1.
Calibration calibrate_targets(std::span<const IdentityDescriptor> pool, int probe_count,
                              const GaConfig& config);
Calibration calibrate_targets(const Pool& pool, int probe_count, const GaConfig& config);

inline constexpr double kTargetMergeTolerance = 1e-6;

}  // namespace forge
