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

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "forge/data.hpp"
#include "forge/error.hpp"
#include "forge/diversity.hpp"
#include "forge/ids.hpp"
#include "forge/mlp.hpp"
#include "forge/pool.hpp"

/// Expects `statement` to throw forge::Error with the given code.
#define EXPECT_FORGE_ERROR(statement, expected_code)                          \
  do {                                                                        \
    try {                                                                     \
      statement;                                                              \
      ADD_FAILURE() << "expected forge::Error from: " #statement;             \
    } catch (const ::forge::Error& forge_error_) {                            \
      EXPECT_EQ(forge_error_.code(), expected_code) << forge_error_.what();   \
    }                                                                         \
  } while (0)

namespace forge::testing {

inline std::filesystem::path data_path(const std::string& name) {
  return std::filesystem::path(FORGE_TEST_DATA_DIR) / name;
}

inline BitMatrix reference_matrix() {
  std::ifstream in(data_path("reference_ids.txt"));
  return BitMatrix::read_position_major(in);
}

/// Every valid spec for input dimension `d`.
inline std::vector<ClassifierSpec> all_specs(int d) {
  std::vector<ClassifierSpec> out;
  for (int h = d + 1; h <= kMaxHiddenNodes; ++h) {
    for (auto a : kAllActivations) {
      for (int r = 0; r < 3; ++r) out.push_back({MachineType::kMlp, h, a, r});
    }
  }
  return out;
}

inline BitMatrix random_matrix(std::mt19937_64& rng, int rows) {
  std::bernoulli_distribution bit(0.5);
  std::vector<BitMatrix::Row> out(rows);
  for (auto& row : out) {
    for (auto& b : row) b = bit(rng) ? 1 : 0;
  }
  return BitMatrix(std::move(out));
}

/// Small, mostly balanced synthetic bundle that trains in milliseconds.
inline DatasetBundle small_bundle(std::uint64_t seed, std::size_t train = 200,
                                  std::size_t validation = 100, std::size_t test = 100,
                                  double noise = 0.2) {
  std::mt19937_64 rng(seed);
  const auto total = train + validation + test;
  auto population = synth_conflict(total * 8, 0.2, noise, rng);
  auto drawn = subsample(population, total, 0.45, rng);
  SplitOptions options;
  options.seed = seed + 1;
  return split(drawn, {train, validation, test}, options);
}

/// Untrained (zero-weight) classifiers carrying the given specs; enough for
/// anything that only looks at descriptors.
inline Pool pool_from_specs(const std::vector<ClassifierSpec>& specs, int input_dim = 7) {
  std::vector<TrainedClassifier> classifiers;
  for (const auto& spec : specs) {
    TrainedClassifier c;
    c.spec = spec;
    c.descriptor = encode(spec, input_dim);
    c.network = MlpNetwork::zeros(input_dim, spec.hidden_nodes, spec.activation,
                                  spec.learning_rate());
    classifiers.push_back(std::move(c));
  }
  PoolConfig config;
  config.size = static_cast<int>(specs.size());
  return Pool(config, 0, input_dim, std::move(classifiers), {}, std::nullopt);
}

inline std::vector<ClassifierSpec> random_specs(std::uint64_t seed, int count, int d = 7) {
  std::mt19937_64 rng(seed);
  std::vector<ClassifierSpec> out;
  for (int i = 0; i < count; ++i) out.push_back(random_spec(rng, d));
  return out;
}

/// Fresh empty directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("forge_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

}  // namespace forge::testing
