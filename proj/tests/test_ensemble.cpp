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

#include "forge/ensemble.hpp"
#include "test_util.hpp"

namespace forge {
namespace {

/// Pool of randomly weighted (untrained) networks: cheap and with varied votes.
Pool random_weight_pool(std::uint64_t seed, int n) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  std::vector<TrainedClassifier> members;
  for (const auto& spec : testing::random_specs(seed, n)) {
    TrainedClassifier c;
    c.spec = spec;
    c.descriptor = encode(spec, 7);
    c.network = MlpNetwork::zeros(7, spec.hidden_nodes, spec.activation, spec.learning_rate());
    for (auto block : c.network.weights.blocks()) {
      for (double& w : block) w = u(rng);
    }
    members.push_back(std::move(c));
  }
  PoolConfig config;
  config.size = n;
  return Pool(config, seed, 7, std::move(members), {}, std::nullopt);
}

const DatasetBundle& bundle() {
  static const DatasetBundle b = testing::small_bundle(91, 100, 60, 80);
  return b;
}

TEST(MajorityVote, Examples) {
  const std::vector<int> a = {1, 0, 1};
  auto v = majority_vote(a);
  EXPECT_EQ(v.winner, 1);
  EXPECT_EQ(v.margin, 1);
  const std::vector<int> b = {0, 0, 0, 1, 1};
  v = majority_vote(b);
  EXPECT_EQ(v.winner, 0);
  EXPECT_EQ(v.margin, 1);
  const std::vector<int> unanimous(9, 1);
  v = majority_vote(unanimous);
  EXPECT_EQ(v.winner, 1);
  EXPECT_EQ(v.margin, 9);
  EXPECT_EQ(v.labels, unanimous);
}

TEST(MajorityVote, Errors) {
  const std::vector<int> even = {1, 0};
  EXPECT_FORGE_ERROR(majority_vote(even), ErrorCode::kEvenEnsemble);
  EXPECT_FORGE_ERROR(majority_vote(std::vector<int>{}), ErrorCode::kEvenEnsemble);
  const std::vector<int> bad = {1, 2, 0};
  EXPECT_FORGE_ERROR(majority_vote(bad), ErrorCode::kNonBinaryLabel);
}

TEST(MajorityVote, PermutationAndFlipSymmetry) {
  std::mt19937_64 rng(4);
  std::bernoulli_distribution coin(0.5);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<int> labels(1 + 2 * (trial % 6));
    for (int& l : labels) l = coin(rng) ? 1 : 0;
    const auto v = majority_vote(labels);
    auto shuffled = labels;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_EQ(majority_vote(shuffled).winner, v.winner);
    EXPECT_EQ(majority_vote(shuffled).margin, v.margin);
    auto flipped = labels;
    for (int& l : flipped) l = 1 - l;
    EXPECT_EQ(majority_vote(flipped).winner, 1 - v.winner);
    EXPECT_EQ(majority_vote(flipped).margin, v.margin);
    EXPECT_GE(v.margin, 1);
  }
}

TEST(EnsembleError, MatchesRecountOracle) {
  const auto pool = random_weight_pool(5, 25);
  const auto& test = bundle().test;
  std::mt19937_64 rng(6);
  std::vector<int> all(25);
  for (int i = 0; i < 25; ++i) all[i] = i;
  for (int trial = 0; trial < 100; ++trial) {
    const int k = 1 + 2 * (trial % 5);
    std::vector<int> pick;
    std::sample(all.begin(), all.end(), std::back_inserter(pick), k, rng);
    const EnsembleSelection sel(pick, 25);
    int wrong = 0;
    for (std::size_t s = 0; s < test.size(); ++s) {
      int ones = 0;
      for (int i : pick) ones += predict_label(pool[i].network, test.row(s));
      const int voted = 2 * ones > k ? 1 : 0;
      wrong += voted != test.label(s);
    }
    EXPECT_EQ(ensemble_error(sel, pool, test),
              static_cast<double>(wrong) / static_cast<double>(test.size()));
  }
}

TEST(EnsembleError, IdenticalMembersMatchSingleMember) {
  auto pool = random_weight_pool(7, 5);
  std::vector<TrainedClassifier> copies(3, pool[2]);
  PoolConfig config;
  config.size = 3;
  const Pool same(config, 0, 7, copies, {}, std::nullopt);
  EXPECT_EQ(ensemble_error(EnsembleSelection({0, 1, 2}, 3), same, bundle().test),
            classification_error(pool[2].network, bundle().test));
}

TEST(EnsembleError, EmptySplit) {
  const auto pool = random_weight_pool(8, 3);
  EXPECT_FORGE_ERROR(ensemble_error(EnsembleSelection({0, 1, 2}, 3), pool, Dataset()),
                     ErrorCode::kEmptySplit);
}

TEST(EvaluateSelection, Fields) {
  const auto pool = random_weight_pool(9, 11);
  const EnsembleSelection sel({0, 3, 5, 8, 10}, 11);
  const auto row = evaluate_selection(sel, pool, bundle());
  EXPECT_EQ(row.achieved_kw, kw_variance(pool.descriptors(), sel.indices()));
  EXPECT_EQ(row.validation_error, ensemble_error(sel, pool, bundle().validation));
  EXPECT_EQ(row.test_error, ensemble_error(sel, pool, bundle().test));
  ASSERT_EQ(row.descriptors.size(), 5u);
  EXPECT_EQ(row.descriptors[1], pool[3].descriptor.to_string());
  EXPECT_EQ(row.member_validation_errors.size(), 5u);
}

}  // namespace
}  // namespace forge
