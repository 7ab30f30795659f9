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

#include <gtest/gtest.h>

#include <algorithm>
#include <numeric>
#include <set>
#include <sstream>

#include "forge/data.hpp"
#include "test_util.hpp"

namespace forge {
namespace {

Dataset grid(std::size_t n) {
  std::vector<double> x;
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(static_cast<double>(i));           // row id, also a feature
    x.push_back(static_cast<double>((i * 7) % 13));
    y.push_back(static_cast<int>(i % 3 == 0));
  }
  return Dataset({"id", "mix"}, x, y);
}

TEST(DatasetType, RejectsBadShapes) {
  EXPECT_FORGE_ERROR(Dataset({"a"}, {1.0, 2.0}, {0}), ErrorCode::kDimensionMismatch);
  EXPECT_FORGE_ERROR(Dataset({"a"}, {1.0}, {2}), ErrorCode::kNonBinaryLabel);
}

TEST(Normalize, Anchors) {
  const Dataset d({"a", "b"}, {-2.0, 10.0, 0.0, 30.0, 2.0, 20.0}, {0, 1, 0});
  const auto n = normalize(d).data;
  EXPECT_EQ(n.row(0)[0], 0.0);
  EXPECT_EQ(n.row(2)[0], 1.0);
  EXPECT_EQ(n.row(1)[0], 0.5);
  EXPECT_EQ(n.row(0)[1], 0.0);
  EXPECT_EQ(n.row(1)[1], 1.0);
  EXPECT_EQ(n.row(2)[1], 0.5);
  EXPECT_EQ(n.labels(), d.labels());
}

TEST(Normalize, Idempotent) {
  std::mt19937_64 rng(3);
  const auto d = synth_conflict(500, 0.1, 0.1, rng);
  const auto once = normalize(d).data;
  const auto twice = normalize(once).data;
  for (std::size_t i = 0; i < once.features().size(); ++i) {
    EXPECT_NEAR(once.features()[i], twice.features()[i], 1e-12);
  }
}

TEST(Normalize, ZeroWidthFeature) {
  const Dataset d({"a", "flat"}, {0.0, 5.0, 1.0, 5.0}, {0, 1});
  try {
    normalize(d);
    ADD_FAILURE() << "expected kConstantFeature";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kConstantFeature);
    EXPECT_NE(std::string(e.what()).find("flat"), std::string::npos) << e.what();
  }
}

TEST(ApplyStats, CountsOutOfRange) {
  const NormalizationStats stats({0.0}, {10.0});
  const Dataset d({"a"}, {-1.0, 5.0, 10.0, 12.0}, {0, 0, 1, 1});
  const auto scaled = apply_stats(d, stats);
  EXPECT_EQ(scaled.out_of_range, 2u);
  EXPECT_DOUBLE_EQ(scaled.data.row(3)[0], 1.2);
  EXPECT_FORGE_ERROR(apply_stats(grid(3), stats), ErrorCode::kDimensionMismatch);
}

TEST(Split, SizesAndDisjointness) {
  const auto data = grid(2000);
  SplitOptions opt;
  opt.seed = 17;
  const auto b = split(data, {}, opt);
  EXPECT_EQ(b.train.size(), 1006u);
  EXPECT_EQ(b.validation.size(), 317u);
  EXPECT_EQ(b.test.size(), 552u);
  // Undo the normalization of the id column to recover source rows.
  const double lo = b.stats.minimum()[0];
  const double hi = b.stats.maximum()[0];
  std::set<long long> seen;
  for (const Dataset* part : {&b.train, &b.validation, &b.test}) {
    for (std::size_t i = 0; i < part->size(); ++i) {
      const auto id = std::llround(part->row(i)[0] * (hi - lo) + lo);
      EXPECT_TRUE(seen.insert(id).second) << "row " << id << " appears twice";
      EXPECT_EQ(part->label(i), static_cast<int>(id % 3 == 0));
    }
  }
  EXPECT_EQ(seen.size(), 1875u);
}

TEST(Split, TrainOnlyStatsMapTrainIntoUnitRange) {
  SplitOptions opt;
  opt.seed = 4;
  const auto b = split(grid(400), {200, 100, 100}, opt);
  for (double v : b.train.features()) {
    EXPECT_GE(v, 0.0);
    EXPECT_LE(v, 1.0);
  }
  opt.scope = StatsScope::kGlobal;
  const auto g = split(grid(400), {200, 100, 100}, opt);
  for (const Dataset* part : {&g.train, &g.validation, &g.test}) {
    for (double v : part->features()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
}

TEST(Split, DeterministicAndSeedSensitive) {
  const auto data = grid(600);
  SplitOptions a;
  a.seed = 1;
  SplitOptions b;
  b.seed = 2;
  const SplitCounts counts{300, 100, 100};
  EXPECT_EQ(split(data, counts, a).train, split(data, counts, a).train);
  EXPECT_NE(split(data, counts, a).train, split(data, counts, b).train);
}

TEST(Split, SequentialKeepsOrder) {
  SplitOptions opt;
  opt.order = SplitOrder::kSequential;
  const auto b = split(grid(10), {4, 3, 3}, opt);
  for (std::size_t i = 1; i < b.train.size(); ++i) {
    EXPECT_LT(b.train.row(i - 1)[0], b.train.row(i)[0]);
  }
  EXPECT_DOUBLE_EQ(b.validation.row(0)[0], 4.0 / 3.0);  // id 4, train ids span [0, 3]
}

TEST(Split, InsufficientSamples) {
  EXPECT_FORGE_ERROR(split(grid(100), {}, {}), ErrorCode::kInsufficientSamples);
}

TEST(Csv, Parses) {
  std::istringstream in("x,label,y\n1.5,0,2\n\n-3,1,4e-1\n");
  const auto d = parse_csv(in);
  EXPECT_EQ(d.feature_names(), (std::vector<std::string>{"x", "y"}));
  EXPECT_EQ(d.features(), (std::vector<double>{1.5, 2.0, -3.0, 0.4}));
  EXPECT_EQ(d.labels(), (std::vector<int>{0, 1}));
}

TEST(Csv, NonBinaryLabelNamesLine) {
  std::istringstream in("x,label\n1,0\n2,1\n3,2\n");
  try {
    parse_csv(in);
    ADD_FAILURE() << "expected kNonBinaryLabel";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kNonBinaryLabel);
    EXPECT_NE(std::string(e.what()).find("line 4"), std::string::npos) << e.what();
  }
}

TEST(Csv, Errors) {
  std::istringstream missing("x,y\n1,0\n");
  EXPECT_FORGE_ERROR(parse_csv(missing), ErrorCode::kMissingColumn);
  std::istringstream ragged("x,label\n1,0,5\n");
  EXPECT_FORGE_ERROR(parse_csv(ragged), ErrorCode::kParse);
  std::istringstream text("x,label\nabc,0\n");
  EXPECT_FORGE_ERROR(parse_csv(text), ErrorCode::kParse);
  std::istringstream empty("");
  EXPECT_FORGE_ERROR(parse_csv(empty), ErrorCode::kParse);
  EXPECT_FORGE_ERROR(load_csv("/nonexistent/forge.csv"), ErrorCode::kIo);
}

TEST(Csv, RoundTrip) {
  std::mt19937_64 rng(8);
  const auto d = synth_conflict(300, 0.2, 0.1, rng);
  const auto dir = testing::scratch_dir("csv_round_trip");
  save_csv(d, dir / "d.csv");
  EXPECT_EQ(load_csv(dir / "d.csv"), d);
}

TEST(Synth, NoiselessLabelsFollowScoreRanking) {
  std::mt19937_64 rng(21);
  const auto d = synth_conflict(2000, 0.1, 0.0, rng);
  ASSERT_EQ(d.dim(), 7u);
  ASSERT_EQ(d.feature_names(), conflict_feature_names());
  EXPECT_EQ(d.positives(), 200u);
  double lowest_positive = 1e300;
  double highest_negative = -1e300;
  for (std::size_t i = 0; i < d.size(); ++i) {
    const double s = conflict_score(d.row(i));
    if (d.label(i) == 1) lowest_positive = std::min(lowest_positive, s);
    else highest_negative = std::max(highest_negative, s);
  }
  EXPECT_GE(lowest_positive, highest_negative);
}

TEST(Synth, MinorityShare) {
  std::mt19937_64 rng(22);
  const auto d = synth_conflict(10'000, 0.03, 0.1, rng);
  const double share = static_cast<double>(d.positives()) / 10'000.0;
  EXPECT_GE(share, 0.01);
  EXPECT_LE(share, 0.05);
}

TEST(Synth, DeterministicAndValidated) {
  std::mt19937_64 a(5);
  std::mt19937_64 b(5);
  EXPECT_EQ(synth_conflict(100, 0.1, 0.2, a), synth_conflict(100, 0.1, 0.2, b));
  EXPECT_FORGE_ERROR(synth_conflict(100, 0.0, 0.1, a), ErrorCode::kInvalidParameter);
  EXPECT_FORGE_ERROR(synth_conflict(100, 0.6, 0.1, a), ErrorCode::kInvalidParameter);
  EXPECT_FORGE_ERROR(synth_conflict(100, 0.1, 0.7, a), ErrorCode::kInvalidParameter);
}

TEST(Subsample, StratifiedShareAndOrder) {
  std::mt19937_64 rng(30);
  const auto population = synth_conflict(5000, 0.2, 0.0, rng);
  const auto drawn = subsample(population, 400, 0.5, rng);
  EXPECT_EQ(drawn.size(), 400u);
  EXPECT_EQ(drawn.positives(), 200u);
  const auto uniform = subsample(population, 400, std::nullopt, rng);
  EXPECT_EQ(uniform.size(), 400u);
  EXPECT_FORGE_ERROR(subsample(population, 5001, std::nullopt, rng),
                     ErrorCode::kInsufficientSamples);
}

TEST(Subsample, KeepsSourceOrder) {
  std::mt19937_64 rng(31);
  const auto drawn = subsample(grid(300), 50, 0.5, rng);
  for (std::size_t i = 1; i < drawn.size(); ++i) EXPECT_LT(drawn.row(i - 1)[0], drawn.row(i)[0]);
}

}  // namespace
}  // namespace forge
