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

/// @file pool.hpp
/// The bank of trained classifiers sub-ensembles are drawn from.
///
/// Construction is an accept/reject loop: attempt `a` draws a random spec
/// (or uses the forced one), trains it on the training split and keeps it
/// when its validation error is below the cap. Each attempt owns the random
/// stream derived from (master seed, a), so a pool is a pure function of
/// its inputs regardless of how many threads train it.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <vector>

#include "forge/data.hpp"
#include "forge/ids.hpp"
#include "forge/mlp.hpp"

namespace forge {

struct PoolConfig {
  int size = 60;
  double error_cap = 0.45;
  /// 0 means 20 x size.
  int max_attempts = 0;
  int epochs = kDefaultEpochs;
  /// Independent pools built by build_max_diversity_pool.
  int candidates = 5;
  /// Worker threads for training; 0 uses the hardware concurrency. Not
  /// stored with the pool.
  int threads = 0;
  /// When set, every attempt uses this spec instead of a random one.
  std::optional<ClassifierSpec> forced_spec;

  int attempt_limit() const noexcept { return max_attempts > 0 ? max_attempts : 20 * size; }

  /// Throws kConfig on non-positive sizes or a cap outside (0, 1].
  void validate() const;

  friend bool operator==(const PoolConfig&, const PoolConfig&) = default;
};

class Pool {
 public:
  struct Stats {
    int attempts = 0;
    int rejections = 0;
    /// Index of the candidate chosen by build_max_diversity_pool.
    int candidate = 0;

    friend bool operator==(const Stats&, const Stats&) = default;
  };

  Pool() = default;
  /// Recomputes pool_kw from the classifiers and checks every descriptor
  /// against its spec.
  Pool(PoolConfig config, std::uint64_t master_seed, int input_dim,
       std::vector<TrainedClassifier> classifiers, Stats stats,
       std::optional<NormalizationStats> normalization);

  const std::vector<TrainedClassifier>& classifiers() const noexcept { return classifiers_; }
  const TrainedClassifier& operator[](std::size_t i) const { return classifiers_.at(i); }
  std::size_t size() const noexcept { return classifiers_.size(); }
  const std::vector<IdentityDescriptor>& descriptors() const noexcept { return descriptors_; }
  double pool_kw() const noexcept { return pool_kw_; }
  std::uint64_t master_seed() const noexcept { return master_seed_; }
  int input_dim() const noexcept { return input_dim_; }
  const PoolConfig& config() const noexcept { return config_; }
  const Stats& stats() const noexcept { return stats_; }
  /// Stats the training data was normalized with, when known.
  const std::optional<NormalizationStats>& normalization() const noexcept {
    return normalization_;
  }

  friend bool operator==(const Pool&, const Pool&) = default;

 private:
  PoolConfig config_;
  std::uint64_t master_seed_ = 0;
  int input_dim_ = 0;
  std::vector<TrainedClassifier> classifiers_;
  std::vector<IdentityDescriptor> descriptors_;
  double pool_kw_ = 0.0;
  Stats stats_;
  std::optional<NormalizationStats> normalization_;
};

/// Trains classifiers until config.size pass the validation cap. Reads the
/// bundle's train and validation splits only. Throws kExhaustion when the
/// attempt limit is reached first.
Pool build_pool(const PoolConfig& config, const DatasetBundle& data, std::uint64_t master_seed);

/// Seed of candidate pool `index`. Candidate 0 uses the master seed itself,
/// so a single-candidate search equals build_pool.
std::uint64_t candidate_seed(std::uint64_t master_seed, int index);

/// Builds config.candidates pools and keeps the one with the largest
/// pool_kw, the lowest candidate index winning ties.
Pool build_max_diversity_pool(const PoolConfig& config, const DatasetBundle& data,
                              std::uint64_t master_seed);

/// Binary pool file; see docs/pool_format.md for the layout. Throws kIo.
void save_pool(const Pool& pool, const std::filesystem::path& path);
/// Throws kIo, kFormat (bad magic, truncation, inconsistent records),
/// kVersion and kChecksum.
Pool load_pool(const std::filesystem::path& path);

std::vector<std::uint8_t> serialize_pool(const Pool& pool);
Pool deserialize_pool(const std::vector<std::uint8_t>& bytes);

inline constexpr std::uint32_t kPoolFormatVersion = 1;

}  // namespace forge
