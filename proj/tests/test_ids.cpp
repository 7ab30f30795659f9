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

#include <array>
#include <set>

#include "forge/error.hpp"
#include "forge/ids.hpp"
#include "test_util.hpp"

namespace forge {
namespace {

constexpr int kDim = 7;

TEST(IdsEncode, WorkedExampleFiveHiddenLinearSlowestRate) {
  const ClassifierSpec spec{MachineType::kMlp, 5, Activation::kLinear, 0};
  // 5 hidden nodes needs d < 5.
  EXPECT_EQ(encode(spec, 4).to_string(), "100101100001");
}

TEST(IdsEncode, LayoutExamples) {
  EXPECT_EQ(encode({MachineType::kMlp, 30, Activation::kSoftmax, 2}, kDim).to_string(),
            "111110001100");
  EXPECT_EQ(encode({MachineType::kMlp, 8, Activation::kLogistic, 1}, kDim).to_string(),
            "101000010010");
}

TEST(IdsEncode, RejectsHiddenCountOutsideRange) {
  EXPECT_FORGE_ERROR(encode({MachineType::kMlp, 7, Activation::kLinear, 0}, kDim),
                     ErrorCode::kInvalidSpec);
  EXPECT_FORGE_ERROR(encode({MachineType::kMlp, 31, Activation::kLinear, 0}, kDim),
                     ErrorCode::kInvalidSpec);
  EXPECT_FORGE_ERROR(encode({MachineType::kMlp, 10, Activation::kLinear, 3}, kDim),
                     ErrorCode::kInvalidSpec);
}

TEST(IdsDecode, WorkedExample) {
  const auto spec = decode(IdentityDescriptor::from_string("100101100001"), 4);
  EXPECT_EQ(spec.hidden_nodes, 5);
  EXPECT_EQ(spec.activation, Activation::kLinear);
  EXPECT_DOUBLE_EQ(spec.learning_rate(), 0.01);
}

TEST(IdsDecode, RejectsMalformed) {
  for (const char* text : {"100101110001", "000101100001", "100101100000", "100101100011",
                           "100111000001", "111111100001"}) {
    SCOPED_TRACE(text);
    EXPECT_FORGE_ERROR(decode(IdentityDescriptor::from_string(text), 4),
                       ErrorCode::kMalformedDescriptor);
  }
}

TEST(IdsDescriptor, TextFormRejectsBadInput) {
  EXPECT_FORGE_ERROR(IdentityDescriptor::from_string("10010110000"),
                     ErrorCode::kMalformedDescriptor);
  EXPECT_FORGE_ERROR(IdentityDescriptor::from_string("10010110000x"),
                     ErrorCode::kMalformedDescriptor);
}

TEST(IdsRoundTrip, ExhaustiveOverValidSpecs) {
  const auto specs = testing::all_specs(kDim);
  ASSERT_EQ(specs.size(), 207u);
  std::set<std::string> seen;
  for (const auto& spec : specs) {
    const auto d = encode(spec, kDim);
    EXPECT_EQ(decode(d, kDim), spec);
    EXPECT_EQ(encode(decode(d, kDim), kDim), d);
    EXPECT_EQ(d.to_string().size(), 12u);
    seen.insert(d.to_string());
  }
  EXPECT_EQ(seen.size(), 207u);
}

// Independent validity predicate over raw strings.
bool valid_by_layout(const std::string& s, int d) {
  if (s[0] != '1') return false;
  const int hidden = std::stoi(s.substr(1, 5), nullptr, 2);
  const auto ones = [&](int first) {
    return (s[first] == '1') + (s[first + 1] == '1') + (s[first + 2] == '1');
  };
  return hidden >= d + 1 && hidden <= 30 && ones(6) == 1 && ones(9) == 1;
}

TEST(IdsDecode, AcceptsExactlyTheValidLayouts) {
  int accepted = 0;
  for (int v = 0; v < 4096; ++v) {
    std::string s(12, '0');
    for (int i = 0; i < 12; ++i) s[i] = ((v >> (11 - i)) & 1) ? '1' : '0';
    const bool expected = valid_by_layout(s, kDim);
    bool decoded = true;
    try {
      decode(IdentityDescriptor::from_string(s), kDim);
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::kMalformedDescriptor);
      decoded = false;
    }
    EXPECT_EQ(decoded, expected) << s;
    accepted += decoded;
  }
  EXPECT_EQ(accepted, 207);
}

TEST(IdsRandomSpec, StaysInLegalDomain) {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 2000; ++i) {
    const auto spec = random_spec(rng, kDim);
    EXPECT_GE(spec.hidden_nodes, 8);
    EXPECT_LE(spec.hidden_nodes, 30);
    EXPECT_NO_THROW(encode(spec, kDim));
  }
}

TEST(IdsRandomSpec, DeterministicUnderSeed) {
  std::mt19937_64 a(42);
  std::mt19937_64 b(42);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(random_spec(a, kDim), random_spec(b, kDim));
}

TEST(IdsRandomSpec, FieldsAreUniform) {
  std::mt19937_64 rng(2024);
  std::array<int, 3> activations{};
  std::array<int, 3> rates{};
  std::array<int, 31> hidden{};
  constexpr int kDraws = 10'000;
  for (int i = 0; i < kDraws; ++i) {
    const auto s = random_spec(rng, kDim);
    ++activations[static_cast<int>(s.activation)];
    ++rates[s.learning_rate_index];
    ++hidden[s.hidden_nodes];
  }
  for (int a = 0; a < 3; ++a) {
    EXPECT_NEAR(activations[a] / double(kDraws), 1.0 / 3.0, 0.03);
    EXPECT_NEAR(rates[a] / double(kDraws), 1.0 / 3.0, 0.03);
  }
  // Chi-square over the 23 hidden-node values; 22 dof, 0.999 quantile ~ 48.3.
  double chi2 = 0.0;
  const double expected = kDraws / 23.0;
  for (int h = 8; h <= 30; ++h) chi2 += (hidden[h] - expected) * (hidden[h] - expected) / expected;
  EXPECT_LT(chi2, 48.3);
}

TEST(IdsRandomSpec, RejectsImpossibleInputDim) {
  std::mt19937_64 rng(1);
  EXPECT_FORGE_ERROR(random_spec(rng, 30), ErrorCode::kConfig);
  EXPECT_EQ(random_spec(rng, 29).hidden_nodes, 30);
}

}  // namespace
}  // namespace forge
