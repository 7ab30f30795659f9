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

/// @file pipeline.hpp
/// End-to-end diversity/accuracy sweep: data -> split -> max-diversity
/// pool -> phase-1 target calibration -> phase-2 GA per target -> majority
/// vote scoring on validation and test -> report files.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "forge/data.hpp"
#include "forge/ensemble.hpp"
#include "forge/ga.hpp"
#include "forge/pool.hpp"

namespace forge {

inline constexpr std::string_view kVersion = "0.1.0";

struct DataSourceConfig {
  /// When unset the synthetic generator is used.
  std::optional<std::filesystem::path> csv;
  std::string label_column = "label";
  SynthParams synth{27'721, 875.0 / 27'721.0, 0.3};
  /// Rows drawn from the source before splitting; unset keeps every row.
  std::optional<std::size_t> draw = 1875;
  /// Positive share of the drawn rows; unset draws uniformly.
  std::optional<double> positive_share = 875.0 / 1875.0;
  SplitCounts counts;
  SplitOrder order = SplitOrder::kShuffled;
  StatsScope scope = StatsScope::kTrainOnly;
};

struct SweepConfig {
  DataSourceConfig data;
  PoolConfig pool;
  GaConfig ga;
  /// When unset the GA seed is derived from the master seed.
  std::optional<std::uint64_t> ga_seed;
  int probe_count = 6;
  std::uint64_t seed = 0;

  /// Throws kConfig when a nested config is invalid.
  void validate() const;
};

/// Parses the JSON config document. Every field is optional, so "{}" is a
/// complete config. Throws kParse on malformed JSON or mistyped fields and
/// kConfig on invalid values.
SweepConfig parse_sweep_config(std::string_view json_text);
SweepConfig load_sweep_config(const std::filesystem::path& path);
/// Canonical JSON echo of a config (fixed key order).
std::string sweep_config_to_json(const SweepConfig& config);

/// Loads or synthesizes the source, draws, splits and normalizes it.
DatasetBundle prepare_data(const DataSourceConfig& config, std::uint64_t master_seed);

/// Seed handed to build_max_diversity_pool by run_sweep.
std::uint64_t pool_seed(std::uint64_t master_seed);
/// GA config used by run_sweep, with the seed resolved.
GaConfig resolved_ga(const SweepConfig& config);

struct PoolSummary {
  std::size_t size = 0;
  double pool_kw = 0.0;
  int attempts = 0;
  int rejections = 0;
  int candidate = 0;
};

struct SweepRow {
  double target_kw = 0.0;
  double achieved_kw = 0.0;
  double fitness = 0.0;
  double validation_error = 0.0;
  double test_error = 0.0;
  std::vector<int> indices;
  std::vector<std::string> descriptors;
  std::vector<double> member_validation_errors;
};

struct SweepReport {
  SweepConfig config;
  PoolSummary pool;
  Calibration calibration;
  /// Sorted by achieved kw ascending.
  std::vector<SweepRow> rows;

  /// Row with the lowest test error (first on ties), if any.
  const SweepRow* min_test_error_row() const;
};

/// Runs the whole pipeline. Deterministic in (config, config.seed).
SweepReport run_sweep(const SweepConfig& config);

/// Calibration, GA and scoring on an existing pool. Only the GA stage
/// decides membership and it sees descriptors alone.
SweepReport run_sweep_on_pool(const SweepConfig& config, const Pool& pool,
                              const DatasetBundle& bundle);

inline constexpr double kReportKwTolerance = 1e-12;

/// Writes sweep.csv, sweep.json, curve.csv and table2.txt into `directory`
/// (created if needed). Every row's kw is recomputed from its descriptors
/// first; a mismatch beyond 1e-12 throws kFormat. Output bytes depend only
/// on the report.
void emit_report(const SweepReport& report, const std::filesystem::path& directory);

std::string render_sweep_csv(const SweepReport& report);
std::string render_sweep_json(const SweepReport& report);
std::string render_curve_csv(const SweepReport& report);
std::string render_table2(const SweepReport& report);

}  // namespace forge
