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

/// @file data.hpp
/// Tabular binary-classification data: CSV I/O, min-max normalization,
/// train/validation/test splitting and a synthetic stand-in for dyad-year
/// conflict data.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <istream>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <vector>

namespace forge {

/// Row-major feature matrix plus 0/1 labels. Immutable once constructed.
class Dataset {
 public:
  Dataset() = default;
  /// Throws kDimensionMismatch when sizes disagree and kNonBinaryLabel on a
  /// label other than 0 or 1.
  Dataset(std::vector<std::string> feature_names, std::vector<double> features,
          std::vector<int> labels);

  std::size_t size() const noexcept { return labels_.size(); }
  bool empty() const noexcept { return labels_.empty(); }
  std::size_t dim() const noexcept { return names_.size(); }

  std::span<const double> row(std::size_t i) const {
    return {features_.data() + i * dim(), dim()};
  }
  int label(std::size_t i) const { return labels_[i]; }

  const std::vector<std::string>& feature_names() const noexcept { return names_; }
  const std::vector<double>& features() const noexcept { return features_; }
  const std::vector<int>& labels() const noexcept { return labels_; }

  std::size_t positives() const noexcept;

  /// Rows picked by `indices`, in that order.
  Dataset select(std::span<const std::size_t> indices) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::vector<std::string> names_;
  std::vector<double> features_;
  std::vector<int> labels_;
};

/// Per-feature minimum and maximum. Every feature must have max > min.
class NormalizationStats {
 public:
  NormalizationStats() = default;
  /// Throws kConstantFeature naming the first zero-width feature and
  /// kDimensionMismatch when the vectors differ in length.
  NormalizationStats(std::vector<double> minimum, std::vector<double> maximum,
                     std::vector<std::string> names = {});

  static NormalizationStats fit(const Dataset& data);

  std::size_t dim() const noexcept { return min_.size(); }
  const std::vector<double>& minimum() const noexcept { return min_; }
  const std::vector<double>& maximum() const noexcept { return max_; }

  friend bool operator==(const NormalizationStats& a, const NormalizationStats& b) {
    return a.min_ == b.min_ && a.max_ == b.max_;
  }

 private:
  std::vector<double> min_;
  std::vector<double> max_;
};

struct NormalizedDataset {
  Dataset data;
  NormalizationStats stats;
};

/// x -> (x - min) / (max - min) per feature, stats fitted on `data` itself.
NormalizedDataset normalize(const Dataset& data);

struct ScaledDataset {
  Dataset data;
  /// Entries that landed outside [0, 1] because the split exceeds the range
  /// the stats were fitted on.
  std::size_t out_of_range = 0;
};

ScaledDataset apply_stats(const Dataset& data, const NormalizationStats& stats);

struct DatasetBundle {
  Dataset train;
  Dataset validation;
  Dataset test;
  NormalizationStats stats;
};

struct SplitCounts {
  std::size_t train = 1006;
  std::size_t validation = 317;
  std::size_t test = 552;

  std::size_t total() const noexcept { return train + validation + test; }
};

enum class SplitOrder { kShuffled, kSequential };
enum class StatsScope { kTrainOnly, kGlobal };

struct SplitOptions {
  SplitOrder order = SplitOrder::kShuffled;
  std::uint64_t seed = 0;
  /// kGlobal fits stats on all rows that enter the bundle instead of the
  /// training rows only.
  StatsScope scope = StatsScope::kTrainOnly;
};

/// Partitions `data` into disjoint train/validation/test blocks of exactly
/// the requested sizes and normalizes all three with one set of stats.
/// Throws kInsufficientSamples when the counts exceed the sample count.
DatasetBundle split(const Dataset& data, const SplitCounts& counts, const SplitOptions& options);

/// Parses a comma-separated file with a header row. The column named
/// `label_column` becomes the label; the rest are features in file order.
Dataset load_csv(const std::filesystem::path& path, const std::string& label_column = "label");
Dataset parse_csv(std::istream& in, const std::string& label_column = "label");

/// Writes features in round-trip precision followed by a `label` column.
void save_csv(const Dataset& data, const std::filesystem::path& path);
void write_csv(const Dataset& data, std::ostream& out);

/// Parameters of the synthetic conflict generator.
struct SynthParams {
  std::size_t samples = 27'721;
  /// 875 conflict dyad-years out of 26,846 + 875.
  double minority_fraction = 875.0 / 27'721.0;
  double noise = 0.1;
};

/// Feature names of the synthetic generator, in column order.
const std::vector<std::string>& conflict_feature_names();

/// Latent score of the hidden labelling rule on one raw feature row. The
/// highest-scoring round(minority_fraction * n) rows are labelled 1 before
/// noise is applied.
double conflict_score(std::span<const double> raw_row);

/// Generates `samples` dyad-like rows with seven features and a binary
/// label. Noise flips positives with probability `noise` and negatives with
/// probability noise * p / (1 - p), which keeps the expected positive rate
/// at p. Throws kInvalidParameter unless p is in (0, 0.5] and noise in
/// [0, 0.5].
Dataset synth_conflict(std::size_t samples, double minority_fraction, double noise,
                       std::mt19937_64& rng);

/// Draws `count` rows without replacement. With `positive_share` set, the
/// draw is stratified: round(count * share) positives (capped by
/// availability, remainder filled with negatives); otherwise uniform.
/// Output rows keep their original relative order.
Dataset subsample(const Dataset& data, std::size_t count, std::optional<double> positive_share,
                  std::mt19937_64& rng);

}  // namespace forge
