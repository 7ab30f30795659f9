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

#include <cstring>

#include "forge/pool.hpp"
#include "test_util.hpp"

namespace forge {
namespace {

PoolConfig small_config(int size = 8) {
  PoolConfig c;
  c.size = size;
  c.epochs = 30;
  c.candidates = 1;
  c.threads = 2;
  return c;
}

const DatasetBundle& bundle() {
  static const DatasetBundle b = testing::small_bundle(77);
  return b;
}

TEST(PoolConfigCheck, Validation) {
  PoolConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.attempt_limit(), 1200);
  c.size = 0;
  EXPECT_FORGE_ERROR(c.validate(), ErrorCode::kConfig);
  c = {};
  c.error_cap = 1.5;
  EXPECT_FORGE_ERROR(c.validate(), ErrorCode::kConfig);
  c = {};
  c.epochs = 0;
  EXPECT_FORGE_ERROR(c.validate(), ErrorCode::kConfig);
}

TEST(BuildPool, MembersSatisfyConstraints) {
  const auto pool = build_pool(small_config(), bundle(), 3);
  ASSERT_EQ(pool.size(), 8u);
  for (const auto& c : pool.classifiers()) {
    EXPECT_LT(c.validation_error, 0.45);
    EXPECT_GT(c.spec.hidden_nodes, 7);
    EXPECT_EQ(c.descriptor, encode(c.spec, 7));
    EXPECT_DOUBLE_EQ(c.validation_error, classification_error(c.network, bundle().validation));
  }
  EXPECT_EQ(pool.pool_kw(), kw_variance(pool.descriptors()));
  EXPECT_GE(pool.stats().attempts, 8);
  EXPECT_EQ(pool.stats().attempts - pool.stats().rejections, 8);
}

TEST(BuildPool, SingleMemberHasZeroDiversity) {
  EXPECT_EQ(build_pool(small_config(1), bundle(), 4).pool_kw(), 0.0);
}

TEST(BuildPool, ImpossibleCapExhausts) {
  auto c = small_config(3);
  c.error_cap = 0.0;
  c.max_attempts = 6;
  EXPECT_FORGE_ERROR(build_pool(c, bundle(), 5), ErrorCode::kExhaustion);
}

TEST(BuildPool, ForcedSpecGivesHomogeneousPool) {
  auto c = small_config(4);
  c.forced_spec = ClassifierSpec{MachineType::kMlp, 10, Activation::kSoftmax, 1};
  const auto pool = build_pool(c, bundle(), 6);
  EXPECT_EQ(pool.pool_kw(), 0.0);
  for (const auto& m : pool.classifiers()) EXPECT_EQ(m.spec, *c.forced_spec);
}

TEST(BuildPool, DeterministicAcrossThreadCounts) {
  auto one = small_config();
  one.threads = 1;
  auto three = small_config();
  three.threads = 3;
  EXPECT_EQ(build_pool(one, bundle(), 9), build_pool(three, bundle(), 9));
  EXPECT_NE(build_pool(one, bundle(), 9).descriptors(), build_pool(one, bundle(), 10).descriptors());
}

TEST(MaxDiversityPool, SingleCandidateEqualsBuildPool) {
  EXPECT_EQ(candidate_seed(12, 0), 12u);
  EXPECT_EQ(build_max_diversity_pool(small_config(), bundle(), 12),
            build_pool(small_config(), bundle(), 12));
}

TEST(MaxDiversityPool, KeepsMostDiverseCandidate) {
  auto c = small_config(6);
  c.candidates = 3;
  const auto chosen = build_max_diversity_pool(c, bundle(), 13);
  for (int i = 0; i < 3; ++i) {
    const auto candidate = build_pool(c, bundle(), candidate_seed(13, i));
    EXPECT_GE(chosen.pool_kw(), candidate.pool_kw()) << "candidate " << i;
    if (i == chosen.stats().candidate) EXPECT_EQ(candidate.descriptors(), chosen.descriptors());
  }
  EXPECT_EQ(chosen, build_max_diversity_pool(c, bundle(), 13));
}

class PoolFile : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    auto c = small_config(5);
    pool_ = new Pool(build_pool(c, bundle(), 21));
  }
  static void TearDownTestSuite() { delete pool_; }
  static Pool* pool_;
};

Pool* PoolFile::pool_ = nullptr;

TEST_F(PoolFile, RoundTrip) {
  const auto dir = testing::scratch_dir("pool_round_trip");
  save_pool(*pool_, dir / "pool.bin");
  const auto loaded = load_pool(dir / "pool.bin");
  PoolConfig expected = pool_->config();
  expected.threads = 0;
  EXPECT_EQ(loaded.config(), expected);
  EXPECT_EQ(loaded.classifiers(), pool_->classifiers());
  EXPECT_EQ(loaded.pool_kw(), pool_->pool_kw());
  EXPECT_EQ(loaded.stats(), pool_->stats());
  EXPECT_EQ(loaded.master_seed(), 21u);
  EXPECT_EQ(serialize_pool(loaded), serialize_pool(*pool_));
}

TEST_F(PoolFile, Magic) {
  auto bytes = serialize_pool(*pool_);
  ASSERT_GT(bytes.size(), 20u);
  EXPECT_EQ(std::memcmp(bytes.data(), "FORGEPL\0", 8), 0);
  bytes[0] = 'X';
  EXPECT_FORGE_ERROR(deserialize_pool(bytes), ErrorCode::kFormat);
}

TEST_F(PoolFile, Truncation) {
  const auto bytes = serialize_pool(*pool_);
  for (std::size_t keep : {std::size_t{4}, std::size_t{12}, std::size_t{30}, bytes.size() - 1}) {
    const std::vector<std::uint8_t> cut(bytes.begin(), bytes.begin() + keep);
    EXPECT_FORGE_ERROR(deserialize_pool(cut), ErrorCode::kFormat);
  }
}

TEST_F(PoolFile, FutureVersion) {
  auto bytes = serialize_pool(*pool_);
  bytes[8] = 99;  // little-endian u32 right after the magic
  EXPECT_FORGE_ERROR(deserialize_pool(bytes), ErrorCode::kVersion);
}

TEST_F(PoolFile, FlippedByte) {
  auto bytes = serialize_pool(*pool_);
  bytes[bytes.size() / 2] ^= 0x10;
  EXPECT_FORGE_ERROR(deserialize_pool(bytes), ErrorCode::kChecksum);
}

TEST_F(PoolFile, MissingFile) {
  EXPECT_FORGE_ERROR(load_pool("/nonexistent/pool.bin"), ErrorCode::kIo);
}

}  // namespace
}  // namespace forge
