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

#include "forge/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <string_view>

#include "forge/error.hpp"
#include "forge/format.hpp"

namespace forge {
namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  while (true) {
    const auto comma = line.find(',', start);
    fields.push_back(line.substr(start, comma - start));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  for (auto& f : fields) {
    while (!f.empty() && (f.front() == ' ' || f.front() == '\t')) f.remove_prefix(1);
    while (!f.empty() && (f.back() == ' ' || f.back() == '\t' || f.back() == '\r')) {
      f.remove_suffix(1);
    }
  }
  return fields;
}

std::string at_line(std::size_t line_no) { return "line " + std::to_string(line_no) + ": "; }

double parse_number(std::string_view field, std::size_t line_no) {
  double value = 0.0;
  const auto* first = field.data();
  const auto* last = field.data() + field.size();
  if (!field.empty() && field.front() == '+') ++first;
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (field.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw Error(ErrorCode::kParse,
                at_line(line_no) + "field '" + std::string(field) + "' is not a finite number");
  }
  return value;
}

}  // namespace

Dataset::Dataset(std::vector<std::string> feature_names, std::vector<double> features,
                 std::vector<int> labels)
    : names_(std::move(feature_names)), features_(std::move(features)), labels_(std::move(labels)) {
  if (features_.size() != names_.size() * labels_.size()) {
    throw Error(ErrorCode::kDimensionMismatch,
                "feature storage holds " + std::to_string(features_.size()) + " values, expected " +
                    std::to_string(names_.size()) + " x " + std::to_string(labels_.size()));
  }
  for (std::size_t i = 0; i < labels_.size(); ++i) {
    if (labels_[i] != 0 && labels_[i] != 1) {
      throw Error(ErrorCode::kNonBinaryLabel, "sample " + std::to_string(i) + " has label " +
                                                  std::to_string(labels_[i]));
    }
  }
}

std::size_t Dataset::positives() const noexcept {
  return static_cast<std::size_t>(std::count(labels_.begin(), labels_.end(), 1));
}

Dataset Dataset::select(std::span<const std::size_t> indices) const {
  std::vector<double> features;
  std::vector<int> labels;
  features.reserve(indices.size() * dim());
  labels.reserve(indices.size());
  for (auto i : indices) {
    if (i >= size()) {
      throw Error(ErrorCode::kIndexOutOfRange, "sample index " + std::to_string(i) + " out of range");
    }
    const auto r = row(i);
    features.insert(features.end(), r.begin(), r.end());
    labels.push_back(labels_[i]);
  }
  return Dataset(names_, std::move(features), std::move(labels));
}

NormalizationStats::NormalizationStats(std::vector<double> minimum, std::vector<double> maximum,
                                       std::vector<std::string> names)
    : min_(std::move(minimum)), max_(std::move(maximum)) {
  if (min_.size() != max_.size()) {
    throw Error(ErrorCode::kDimensionMismatch, "minimum and maximum vectors differ in length");
  }
  for (std::size_t j = 0; j < min_.size(); ++j) {
    if (!(max_[j] > min_[j])) {
      const auto label = j < names.size() ? "'" + names[j] + "'" : std::to_string(j);
      throw Error(ErrorCode::kConstantFeature,
                  "feature " + label + " has zero width (min " + format_double(min_[j]) +
                      ", max " + format_double(max_[j]) + ")");
    }
  }
}

NormalizationStats NormalizationStats::fit(const Dataset& data) {
  if (data.empty()) throw Error(ErrorCode::kEmptySplit, "cannot fit normalization on no samples");
  std::vector<double> lo(data.dim(), 0.0);
  std::vector<double> hi(data.dim(), 0.0);
  for (std::size_t j = 0; j < data.dim(); ++j) lo[j] = hi[j] = data.row(0)[j];
  for (std::size_t i = 1; i < data.size(); ++i) {
    const auto r = data.row(i);
    for (std::size_t j = 0; j < data.dim(); ++j) {
      lo[j] = std::min(lo[j], r[j]);
      hi[j] = std::max(hi[j], r[j]);
    }
  }
  return NormalizationStats(std::move(lo), std::move(hi), data.feature_names());
}

NormalizedDataset normalize(const Dataset& data) {
  auto stats = NormalizationStats::fit(data);
  auto scaled = apply_stats(data, stats);
  return {std::move(scaled.data), std::move(stats)};
}

ScaledDataset apply_stats(const Dataset& data, const NormalizationStats& stats) {
  if (stats.dim() != data.dim()) {
    throw Error(ErrorCode::kDimensionMismatch, "stats cover " + std::to_string(stats.dim()) +
                                                   " features, data has " +
                                                   std::to_string(data.dim()));
  }
  ScaledDataset out;
  std::vector<double> features = data.features();
  const auto d = data.dim();
  for (std::size_t i = 0; i < features.size(); ++i) {
    const auto j = i % d;
    const double lo = stats.minimum()[j];
    const double hi = stats.maximum()[j];
    features[i] = (features[i] - lo) / (hi - lo);
    if (features[i] < 0.0 || features[i] > 1.0) ++out.out_of_range;
  }
  out.data = Dataset(data.feature_names(), std::move(features), data.labels());
  return out;
}

DatasetBundle split(const Dataset& data, const SplitCounts& counts, const SplitOptions& options) {
  if (counts.total() > data.size()) {
    throw Error(ErrorCode::kInsufficientSamples,
                "requested " + std::to_string(counts.total()) + " samples, only " +
                    std::to_string(data.size()) + " available");
  }
  std::vector<std::size_t> order(data.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  if (options.order == SplitOrder::kShuffled) {
    std::mt19937_64 rng(options.seed);
    std::shuffle(order.begin(), order.end(), rng);
  }
  const auto block = [&](std::size_t first, std::size_t count) {
    return std::span<const std::size_t>(order).subspan(first, count);
  };
  const auto train_rows = data.select(block(0, counts.train));
  const auto val_rows = data.select(block(counts.train, counts.validation));
  const auto test_rows = data.select(block(counts.train + counts.validation, counts.test));

  NormalizationStats stats = options.scope == StatsScope::kGlobal
                                 ? NormalizationStats::fit(data.select(block(0, counts.total())))
                                 : NormalizationStats::fit(train_rows);
  DatasetBundle bundle;
  bundle.train = apply_stats(train_rows, stats).data;
  bundle.validation = apply_stats(val_rows, stats).data;
  bundle.test = apply_stats(test_rows, stats).data;
  bundle.stats = std::move(stats);
  return bundle;
}

Dataset parse_csv(std::istream& in, const std::string& label_column) {
  std::string line;
  std::size_t line_no = 1;
  if (!std::getline(in, line)) throw Error(ErrorCode::kParse, "missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_fields(line);
  std::size_t label_at = header.size();
  std::vector<std::string> names;
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == label_column && label_at == header.size()) {
      label_at = c;
    } else {
      names.emplace_back(header[c]);
    }
  }
  if (label_at == header.size()) {
    throw Error(ErrorCode::kMissingColumn, "header has no column named '" + label_column + "'");
  }

  std::vector<double> features;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto fields = split_fields(line);
    if (fields.size() != header.size()) {
      throw Error(ErrorCode::kParse, at_line(line_no) + "expected " +
                                         std::to_string(header.size()) + " fields, got " +
                                         std::to_string(fields.size()));
    }
    for (std::size_t c = 0; c < fields.size(); ++c) {
      const double value = parse_number(fields[c], line_no);
      if (c == label_at) {
        if (value != 0.0 && value != 1.0) {
          throw Error(ErrorCode::kNonBinaryLabel,
                      at_line(line_no) + "label '" + std::string(fields[c]) + "' is not 0 or 1");
        }
        labels.push_back(static_cast<int>(value));
      } else {
        features.push_back(value);
      }
    }
  }
  return Dataset(std::move(names), std::move(features), std::move(labels));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for reading");
  return parse_csv(in, label_column);
}

void write_csv(const Dataset& data, std::ostream& out) {
  for (const auto& name : data.feature_names()) out << name << ',';
  out << "label\n";
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (double v : data.row(i)) out << format_double(v) << ',';
    out << data.label(i) << '\n';
  }
}

void save_csv(const Dataset& data, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::kIo, "cannot open '" + path.string() + "' for writing");
  write_csv(data, out);
  if (!out) throw Error(ErrorCode::kIo, "write to '" + path.string() + "' failed");
}

const std::vector<std::string>& conflict_feature_names() {
  static const std::vector<std::string> names = {
      "allies", "contingency", "distance", "major_power", "capability", "democracy", "dependency"};
  return names;
}

double conflict_score(std::span<const double> raw) {
  const double allies = raw[0];
  const double contingency = raw[1];
  const double distance = raw[2];
  const double major_power = raw[3];
  const double capability = raw[4];
  const double democracy = raw[5];
  const double dependency = raw[6];
  return 1.2 * contingency + 0.9 * major_power + 1.0 * contingency * major_power -
         0.8 * (distance - 2.6) - 0.5 * allies - 0.35 * capability - 0.06 * democracy +
         8.0 * dependency;
}

Dataset synth_conflict(std::size_t samples, double minority_fraction, double noise,
                       std::mt19937_64& rng) {
  if (!(minority_fraction > 0.0 && minority_fraction <= 0.5)) {
    throw Error(ErrorCode::kInvalidParameter, "minority fraction must lie in (0, 0.5]");
  }
  if (!(noise >= 0.0 && noise <= 0.5)) {
    throw Error(ErrorCode::kInvalidParameter, "noise must lie in [0, 0.5]");
  }
  if (samples == 0) throw Error(ErrorCode::kInvalidParameter, "sample count must be positive");

  constexpr std::size_t kDim = 7;
  std::bernoulli_distribution allies(0.25);
  std::bernoulli_distribution contingency(0.35);
  std::uniform_real_distribution<double> log_distance(1.0, 4.2);
  std::bernoulli_distribution major_power(0.2);
  std::normal_distribution<double> capability(0.0, 0.8);
  std::uniform_int_distribution<int> democracy(-10, 10);
  std::exponential_distribution<double> dependency(50.0);

  std::vector<double> features;
  features.reserve(samples * kDim);
  for (std::size_t i = 0; i < samples; ++i) {
    // One draw per feature, in column order.
    const double a = allies(rng) ? 1.0 : 0.0;
    const double c = contingency(rng) ? 1.0 : 0.0;
    const double dist = log_distance(rng);
    const double mp = major_power(rng) ? 1.0 : 0.0;
    const double cap = std::min(std::abs(capability(rng)), 3.0);
    const double dem = democracy(rng);
    const double dep = dependency(rng);
    features.insert(features.end(), {a, c, dist, mp, cap, dem, dep});
  }

  std::vector<double> scores(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    scores[i] = conflict_score(std::span<const double>(features).subspan(i * kDim, kDim));
  }
  std::vector<std::size_t> ranked(samples);
  std::iota(ranked.begin(), ranked.end(), std::size_t{0});
  std::stable_sort(ranked.begin(), ranked.end(),
                   [&](std::size_t x, std::size_t y) { return scores[x] > scores[y]; });
  const auto positives =
      static_cast<std::size_t>(std::llround(minority_fraction * static_cast<double>(samples)));
  std::vector<int> labels(samples, 0);
  for (std::size_t r = 0; r < positives; ++r) labels[ranked[r]] = 1;

  const double flip_negative = noise * minority_fraction / (1.0 - minority_fraction);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (auto& label : labels) {
    const double u = unit(rng);
    if (label == 1 ? u < noise : u < flip_negative) label = 1 - label;
  }
  return Dataset(conflict_feature_names(), std::move(features), std::move(labels));
}

Dataset subsample(const Dataset& data, std::size_t count, std::optional<double> positive_share,
                  std::mt19937_64& rng) {
  if (count > data.size()) {
    throw Error(ErrorCode::kInsufficientSamples, "cannot draw " + std::to_string(count) +
                                                     " of " + std::to_string(data.size()) +
                                                     " samples");
  }
  std::vector<std::size_t> picked;
  if (!positive_share) {
    std::vector<std::size_t> all(data.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    std::sample(all.begin(), all.end(), std::back_inserter(picked), count, rng);
  } else {
    if (!(*positive_share >= 0.0 && *positive_share <= 1.0)) {
      throw Error(ErrorCode::kInvalidParameter, "positive share must lie in [0, 1]");
    }
    std::vector<std::size_t> pos;
    std::vector<std::size_t> neg;
    for (std::size_t i = 0; i < data.size(); ++i) (data.label(i) == 1 ? pos : neg).push_back(i);
    auto want_pos = std::min<std::size_t>(
        pos.size(), static_cast<std::size_t>(std::llround(*positive_share * double(count))));
    auto want_neg = count - want_pos;
    if (want_neg > neg.size()) {
      want_neg = neg.size();
      want_pos = count - want_neg;
    }
    std::sample(pos.begin(), pos.end(), std::back_inserter(picked), want_pos, rng);
    std::sample(neg.begin(), neg.end(), std::back_inserter(picked), want_neg, rng);
    std::sort(picked.begin(), picked.end());
  }
  return data.select(picked);
}

}  // namespace forge
